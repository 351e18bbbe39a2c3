#include "qwalk/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "qwalk/train.hpp"

namespace qwalk {

std::string to_string(Task t) {
  switch (t) {
    case Task::node_regression: return "node-regression";
    case Task::graph_classification: return "graph-classification";
    case Task::graph_regression: return "graph-regression";
  }
  return "?";
}

std::string to_string(DataFormat f) {
  switch (f) {
    case DataFormat::temperature: return "temperature";
    case DataFormat::tu: return "tu";
    case DataFormat::molecules: return "molecules";
    case DataFormat::synthetic_shift: return "synthetic-shift";
  }
  return "?";
}

std::string to_string(SplitScheme s) {
  switch (s) {
    case SplitScheme::thirds: return "thirds";
    case SplitScheme::kfold: return "kfold";
    case SplitScheme::stratified: return "stratified";
  }
  return "?";
}

namespace {

namespace pt = boost::property_tree;

template <class E>
E parse_enum(const std::string& s, std::initializer_list<E> all) {
  for (E e : all)
    if (to_string(e) == s) return e;
  std::string options;
  for (E e : all) options += (options.empty() ? "" : ", ") + to_string(e);
  throw std::invalid_argument("'" + s + "' is not one of " + options);
}

std::string strip_comment(std::string v) {
  for (const char* marker : {" ;", " #", "\t;", "\t#"}) {
    if (auto p = v.find(marker); p != std::string::npos) v.erase(p);
  }
  while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.pop_back();
  return v;
}

std::size_t to_count(const std::string& s) {
  std::size_t used = 0;
  if (s.empty() || s[0] == '-') throw std::invalid_argument("expected a non-negative integer");
  const unsigned long long v = std::stoull(s, &used);
  if (used != s.size()) throw std::invalid_argument("expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

double to_real(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("expected a number");
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw std::invalid_argument("expected true or false");
}

std::vector<std::size_t> to_counts(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(to_count(item.substr(b, item.find_last_not_of(" \t") - b + 1)));
  }
  return out;
}

std::string format_real(double v) {
  std::ostringstream os;
  os.precision(std::numeric_limits<double>::max_digits10);
  os << v;
  return os.str();
}

EdgeOrdering::Kind ordering_kind(const std::string& s) { return parse_edge_ordering(s); }

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> s = {
      {"experiment",
       {
           {"name", [](ExperimentConfig& c, const std::string& v) { c.name = v; }},
           {"task",
            [](ExperimentConfig& c, const std::string& v) {
              c.task = parse_enum(v, {Task::node_regression, Task::graph_classification, Task::graph_regression});
            }},
           {"seed", [](ExperimentConfig& c, const std::string& v) { c.seed = to_count(v); }},
           {"trials", [](ExperimentConfig& c, const std::string& v) { c.trials = to_count(v); }},
       }},
      {"data",
       {
           {"format",
            [](ExperimentConfig& c, const std::string& v) {
              c.format = parse_enum(
                  v, {DataFormat::temperature, DataFormat::tu, DataFormat::molecules, DataFormat::synthetic_shift});
            }},
           {"path", [](ExperimentConfig& c, const std::string& v) { c.path = v; }},
           {"name", [](ExperimentConfig& c, const std::string& v) { c.dataset_name = v; }},
           {"knn", [](ExperimentConfig& c, const std::string& v) { c.knn = to_count(v); }},
           {"pad_to", [](ExperimentConfig& c, const std::string& v) { c.pad_to = to_count(v); }},
           {"max_instances", [](ExperimentConfig& c, const std::string& v) { c.max_instances = to_count(v); }},
           {"split",
            [](ExperimentConfig& c, const std::string& v) {
              c.split = parse_enum(v, {SplitScheme::thirds, SplitScheme::kfold, SplitScheme::stratified});
            }},
           {"folds", [](ExperimentConfig& c, const std::string& v) { c.folds = to_count(v); }},
           {"train_fraction", [](ExperimentConfig& c, const std::string& v) { c.train_fraction = to_real(v); }},
           {"validation_fraction",
            [](ExperimentConfig& c, const std::string& v) { c.validation_fraction = to_real(v); }},
           {"synthetic_nodes", [](ExperimentConfig& c, const std::string& v) { c.synthetic_nodes = to_count(v); }},
           {"synthetic_hop", [](ExperimentConfig& c, const std::string& v) { c.synthetic_hop = to_count(v); }},
           {"synthetic_samples",
            [](ExperimentConfig& c, const std::string& v) { c.synthetic_samples = to_count(v); }},
       }},
      {"model",
       {
           {"kind", [](ExperimentConfig& c, const std::string& v) { c.model = parse_diffusion_kind(v); }},
           {"steps", [](ExperimentConfig& c, const std::string& v) { c.steps = to_count(v); }},
           {"coin_placement",
            [](ExperimentConfig& c, const std::string& v) { c.coin_placement = parse_coin_placement(v); }},
           {"coin_mode", [](ExperimentConfig& c, const std::string& v) { c.coin_mode = parse_coin_mode(v); }},
           {"learn_amplitudes", [](ExperimentConfig& c, const std::string& v) { c.learn_amplitudes = to_bool(v); }},
           {"learn_coins", [](ExperimentConfig& c, const std::string& v) { c.learn_coins = to_bool(v); }},
           {"complex", [](ExperimentConfig& c, const std::string& v) { c.complex_amplitudes = to_bool(v); }},
           {"edge_ordering",
            [](ExperimentConfig& c, const std::string& v) { c.edge_ordering.kind = ordering_kind(v); }},
           {"similarity_power",
            [](ExperimentConfig& c, const std::string& v) {
              c.edge_ordering.walk_power = static_cast<int>(to_count(v));
            }},
           {"hops", [](ExperimentConfig& c, const std::string& v) { c.hops = to_count(v); }},
           {"gcnn_features", [](ExperimentConfig& c, const std::string& v) { c.gcnn_features = to_count(v); }},
           {"gcnn_bias", [](ExperimentConfig& c, const std::string& v) { c.gcnn_bias = to_bool(v); }},
           {"diffusion_activation",
            [](ExperimentConfig& c, const std::string& v) { c.diffusion_activation = parse_activation(v); }},
           {"readout", [](ExperimentConfig& c, const std::string& v) { c.readout = parse_readout(v); }},
           {"hidden", [](ExperimentConfig& c, const std::string& v) { c.hidden = to_counts(v); }},
           {"hidden_activation",
            [](ExperimentConfig& c, const std::string& v) { c.hidden_activation = parse_activation(v); }},
           {"outputs", [](ExperimentConfig& c, const std::string& v) { c.outputs = to_count(v); }},
           {"output_activation",
            [](ExperimentConfig& c, const std::string& v) { c.output_activation = parse_activation(v); }},
           {"rescale_output", [](ExperimentConfig& c, const std::string& v) { c.rescale_output = to_bool(v); }},
           {"init_noise", [](ExperimentConfig& c, const std::string& v) { c.init_noise = to_real(v); }},
       }},
      {"training",
       {
           {"loss", [](ExperimentConfig& c, const std::string& v) { c.loss = parse_loss_kind(v); }},
           {"optimizer", [](ExperimentConfig& c, const std::string& v) { c.optimizer = parse_optimizer_kind(v); }},
           {"learning_rate", [](ExperimentConfig& c, const std::string& v) { c.learning_rate = to_real(v); }},
           {"epochs", [](ExperimentConfig& c, const std::string& v) { c.epochs = to_count(v); }},
           {"batch_size", [](ExperimentConfig& c, const std::string& v) { c.batch_size = to_count(v); }},
           {"patience", [](ExperimentConfig& c, const std::string& v) { c.patience = to_count(v); }},
       }},
  };
  return s;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  ExperimentConfig c;
  const auto& sch = schema();
  for (const auto& [section, body] : tree) {
    const auto sec = sch.find(section);
    if (sec == sch.end()) {
      if (body.empty()) throw ConfigError("config: key '" + section + "' must be inside a section");
      throw ConfigError("config: unknown section [" + section + "]");
    }
    for (const auto& [key, node] : body) {
      const auto field = sec->second.find(key);
      const std::string where = section + "." + key;
      if (field == sec->second.end()) throw ConfigError("config: unknown key '" + where + "'");
      const std::string value = strip_comment(node.get_value<std::string>());
      try {
        field->second(c, value);
      } catch (const std::exception& e) {
        throw ConfigError("config: " + where + " = '" + value + "': " + e.what());
      }
    }
  }
  return c;
}

ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config '" + path + "'");
  ExperimentConfig c = parse_config(f);
  if (!c.path.empty()) {
    const std::filesystem::path p(c.path);
    if (p.is_relative()) {
      c.path = (std::filesystem::path(path).parent_path() / p).lexically_normal().string();
    }
  }
  return c;
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  auto counts = [](const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s;
  };
  auto flag = [](bool b) { return b ? "true" : "false"; };
  os << "[experiment]\n"
     << "name = " << c.name << '\n'
     << "task = " << to_string(c.task) << '\n'
     << "seed = " << c.seed << '\n'
     << "trials = " << c.trials << "\n\n";
  os << "[data]\n"
     << "format = " << to_string(c.format) << '\n';
  if (!c.path.empty()) os << "path = " << c.path << '\n';
  if (!c.dataset_name.empty()) os << "name = " << c.dataset_name << '\n';
  os << "knn = " << c.knn << '\n'
     << "pad_to = " << c.pad_to << '\n'
     << "max_instances = " << c.max_instances << '\n'
     << "split = " << to_string(c.split) << '\n'
     << "folds = " << c.folds << '\n'
     << "train_fraction = " << format_real(c.train_fraction) << '\n'
     << "validation_fraction = " << format_real(c.validation_fraction) << '\n'
     << "synthetic_nodes = " << c.synthetic_nodes << '\n'
     << "synthetic_hop = " << c.synthetic_hop << '\n'
     << "synthetic_samples = " << c.synthetic_samples << "\n\n";
  os << "[model]\n"
     << "kind = " << to_string(c.model) << '\n';
  if (c.steps) os << "steps = " << *c.steps << '\n';
  os << "coin_placement = " << to_string(c.coin_placement) << '\n'
     << "coin_mode = " << to_string(c.coin_mode) << '\n'
     << "learn_amplitudes = " << flag(c.learn_amplitudes) << '\n'
     << "learn_coins = " << flag(c.learn_coins) << '\n'
     << "complex = " << flag(c.complex_amplitudes) << '\n'
     << "edge_ordering = " << to_string(c.edge_ordering.kind) << '\n'
     << "similarity_power = " << c.edge_ordering.walk_power << '\n';
  if (c.hops) os << "hops = " << *c.hops << '\n';
  os << "gcnn_features = " << c.gcnn_features << '\n'
     << "gcnn_bias = " << flag(c.gcnn_bias) << '\n'
     << "diffusion_activation = " << to_string(c.diffusion_activation) << '\n'
     << "readout = " << to_string(c.readout) << '\n'
     << "hidden = " << counts(c.hidden) << '\n'
     << "hidden_activation = " << to_string(c.hidden_activation) << '\n';
  if (c.outputs) os << "outputs = " << *c.outputs << '\n';
  if (c.output_activation) os << "output_activation = " << to_string(*c.output_activation) << '\n';
  os << "rescale_output = " << flag(c.rescale_output) << '\n'
     << "init_noise = " << format_real(c.init_noise) << "\n\n";
  os << "[training]\n"
     << "loss = " << to_string(c.loss) << '\n'
     << "optimizer = " << to_string(c.optimizer) << '\n';
  if (c.learning_rate) os << "learning_rate = " << format_real(*c.learning_rate) << '\n';
  os << "epochs = " << c.epochs << '\n'
     << "batch_size = " << c.batch_size << '\n'
     << "patience = " << c.patience << '\n';
  return os.str();
}

void validate(const ExperimentConfig& c, DiffusionKind model) {
  auto fail = [](const std::string& field, const std::string& why) { throw ConfigError(field + ": " + why); };
  if (!c.learning_rate) fail("training.learning_rate", "required (no default)");
  if (!(*c.learning_rate >= 0.0)) fail("training.learning_rate", "must be non-negative");
  if (model == DiffusionKind::quantum_walk && !c.steps) fail("model.steps", "required for qwnn models (no default)");
  if (model == DiffusionKind::dcnn && !c.hops) fail("model.hops", "required for dcnn models (no default)");
  if (c.epochs == 0 || c.epochs > max_epochs) fail("training.epochs", "must be in 1..128");
  if (c.batch_size == 0) fail("training.batch_size", "must be positive");
  if (c.trials == 0) fail("experiment.trials", "must be positive");
  if (c.edge_ordering.walk_power < 1) fail("model.similarity_power", "must be at least 1");
  if (c.format != DataFormat::synthetic_shift && c.path.empty()) fail("data.path", "required for this format");
  if (c.format == DataFormat::tu && c.dataset_name.empty()) fail("data.name", "required for TU datasets");
  if (c.format == DataFormat::temperature && c.knn == 0) fail("data.knn", "must be at least 1");
  if (c.split == SplitScheme::kfold && c.folds < 2) fail("data.folds", "k-fold needs at least 2 folds");
  if (c.train_fraction < 0 || c.validation_fraction < 0 || c.train_fraction + c.validation_fraction > 1.0) {
    fail("data.train_fraction", "fractions must be non-negative and sum to at most 1");
  }

  const bool node_task = c.task == Task::node_regression;
  const bool classify = c.task == Task::graph_classification;
  const bool node_data = c.format == DataFormat::temperature || c.format == DataFormat::synthetic_shift;
  if (node_task != node_data) fail("experiment.task", to_string(c.task) + " does not fit " + to_string(c.format) + " data");
  if (classify && c.format != DataFormat::tu) fail("experiment.task", "classification needs TU data");
  if (classify != (c.loss == LossKind::cross_entropy)) {
    fail("training.loss", classify ? "classification uses cross-entropy" : "regression uses mse or mae");
  }
  if (node_task && c.readout != Readout::none) fail("model.readout", "node regression keeps one row per node (none)");
  if (!node_task && c.readout == Readout::none) fail("model.readout", "graph tasks need sum, mean or flatten");
  if (c.readout == Readout::flatten && c.pad_to == 0) fail("model.readout", "flatten needs data.pad_to");
  if (model == DiffusionKind::quantum_walk && !node_task) {
    if (c.learn_amplitudes) fail("model.learn_amplitudes", "initial amplitudes are per-graph; use false for graph tasks");
    if (c.coin_placement == CoinPlacement::spatial) {
      fail("model.coin_placement", "spatial coins are per-node; graph tasks need temporal coins");
    }
  }
  if (c.rescale_output) {
    if (c.task != Task::graph_regression) fail("model.rescale_output", "only for graph regression");
    if (c.output_activation && *c.output_activation != Activation::sigmoid) {
      fail("model.output_activation", "rescaled outputs use a sigmoid");
    }
  }
  if (c.output_activation && *c.output_activation == Activation::softmax && !classify) {
    fail("model.output_activation", "softmax is for classification");
  }
  for (std::size_t h : c.hidden)
    if (h == 0) fail("model.hidden", "layer widths must be positive");
}

}  // namespace qwalk
