#include "qwalk/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

#include "qwalk/checkpoint.hpp"

namespace qwalk {

namespace {

std::shared_ptr<const Graph> share(Graph g) { return std::make_shared<const Graph>(std::move(g)); }

void truncate(std::vector<GraphInstance>& v, std::size_t max) {
  if (max > 0 && v.size() > max) v.resize(max);
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

RawDataset load_dataset(const ExperimentConfig& c) {
  RawDataset out;
  switch (c.format) {
    case DataFormat::synthetic_shift: {
      ShiftTask task = synthetic_shift_task(c.synthetic_nodes, c.synthetic_hop, c.synthetic_samples, c.seed);
      const auto g = share(std::move(task.graph));
      for (std::size_t s = 0; s < task.x.size(); ++s) {
        out.instances.push_back({g, task.x[s], task.y[s], -1, std::vector<std::uint8_t>(g->num_nodes(), 1)});
      }
      out.fixed_nodes = g->num_nodes();
      break;
    }
    case DataFormat::temperature: {
      const TemperatureData data = read_temperature_dir(c.path);
      std::vector<GeoPoint> points;
      for (const Station& s : data.stations) points.push_back(s.location);
      GeoGraph geo = knn_geo_graph(points, c.knn);
      out.notes.push_back(std::to_string(data.stations.size()) + " stations, " + std::to_string(data.dates.size()) +
                          " complete days (" + std::to_string(data.dropped_days) + " dropped), " +
                          std::to_string(c.knn) + "-NN graph with " + std::to_string(geo.components) +
                          " component(s), max degree " + std::to_string(geo.graph.max_degree()));
      const auto g = share(std::move(geo.graph));
      for (DayPair& p : temperature_pairs(data)) {
        out.instances.push_back({g, std::move(p.x), std::move(p.y), -1, std::vector<std::uint8_t>(g->num_nodes(), 1)});
      }
      out.fixed_nodes = g->num_nodes();
      break;
    }
    case DataFormat::tu: {
      TuDataset d = read_tu_dataset(c.path, c.dataset_name);
      for (const std::string& w : d.warnings) out.notes.push_back(c.dataset_name + ": " + w);
      const TuStatistics st = statistics(d);
      out.notes.push_back(c.dataset_name + ": " + std::to_string(st.graphs) + " graphs, average nodes " +
                          fixed(st.average_nodes, 1) + ", max nodes " + std::to_string(st.max_nodes) +
                          ", max degree " + std::to_string(st.max_degree) + ", " + std::to_string(st.node_classes) +
                          " node classes, " + std::to_string(st.graph_classes) + " graph classes");
      out.classes = d.graph_classes();
      out.instances = std::move(d.graphs);
      break;
    }
    case DataFormat::molecules: {
      const auto molecules = read_molecules_file(c.path);
      MoleculeDataset d = molecule_graphs(molecules);
      out.notes.push_back(std::to_string(d.graphs.size()) + " molecules, " + std::to_string(d.elements.size()) +
                          " elements, " + std::to_string(d.repaired) + " needed connectivity repair");
      out.instances = std::move(d.graphs);
      break;
    }
  }
  truncate(out.instances, c.max_instances);
  if (out.instances.empty()) throw DataError("dataset has no instances");
  if (c.pad_to > 0) {
    out.instances = pad_batch(out.instances, c.pad_to);
    out.fixed_nodes = c.pad_to;
  }
  for (const auto& inst : out.instances) out.labels.push_back(inst.label);
  return out;
}

std::vector<Split> make_splits(const ExperimentConfig& c, const RawDataset& data) {
  const std::size_t n = data.instances.size();
  switch (c.split) {
    case SplitScheme::thirds: return {split_thirds(n)};
    case SplitScheme::kfold: {
      if (c.folds > n) throw ConfigError("data.folds: " + std::to_string(c.folds) + " folds for " + std::to_string(n) + " instances");
      return kfold_splits(n, c.folds, c.seed);
    }
    case SplitScheme::stratified:
      return {stratified_split(data.labels, c.train_fraction, c.validation_fraction, c.seed)};
  }
  return {};
}

PreparedData prepare_data(const ExperimentConfig& c, const RawDataset& data, DiffusionKind kind) {
  PreparedData out;
  for (const auto& inst : data.instances) out.slot_dim = std::max(out.slot_dim, inst.graph->max_degree());
  out.in_features = static_cast<std::size_t>(data.instances.front().features.cols());
  const EdgeOrdering ordering = kind == DiffusionKind::quantum_walk ? c.edge_ordering : EdgeOrdering::as_given();
  std::map<std::pair<const Graph*, std::vector<std::uint8_t>>, std::shared_ptr<const PreparedGraph>> cache;
  for (std::size_t i = 0; i < data.instances.size(); ++i) {
    const GraphInstance& inst = data.instances[i];
    auto key = std::make_pair(inst.graph.get(), inst.node_mask);
    auto it = cache.find(key);
    if (it == cache.end()) {
      try {
        auto pg = std::make_shared<const PreparedGraph>(prepare_graph(*inst.graph, ordering, out.slot_dim, inst.node_mask, kind));
        it = cache.emplace(std::move(key), std::move(pg)).first;
      } catch (const std::invalid_argument& e) {
        throw DataError("instance " + std::to_string(i) + ": " + e.what());
      }
    }
    out.samples.push_back({it->second, inst.features, inst.targets});
  }
  if (cache.size() == 1) out.reference = cache.begin()->second;
  return out;
}

ModelSpec model_spec(const ExperimentConfig& c, const RawDataset& data, const PreparedData& prepared,
                     DiffusionKind kind) {
  ModelSpec s;
  s.diffusion = kind;
  s.walk = {c.steps.value_or(0), c.coin_placement, c.coin_mode, c.learn_amplitudes, c.learn_coins,
            c.complex_amplitudes};
  s.dcnn_hops = c.hops.value_or(0);
  s.gcnn_out_features = c.gcnn_features;
  s.gcnn_bias = c.gcnn_bias;
  s.diffusion_activation = c.diffusion_activation;
  s.readout = c.readout;
  s.hidden = c.hidden;
  s.hidden_activation = c.hidden_activation;
  const bool classify = c.task == Task::graph_classification;
  if (c.outputs) {
    s.outputs = *c.outputs;
  } else if (classify) {
    s.outputs = data.classes;
  } else {
    const std::size_t target = static_cast<std::size_t>(data.instances.front().targets.cols());
    const std::size_t f = prepared.in_features;
    const std::size_t width = kind == DiffusionKind::dcnn   ? (s.dcnn_hops + 1) * f
                              : kind == DiffusionKind::gcnn ? (s.gcnn_out_features ? s.gcnn_out_features : f)
                                                            : f;
    // node regression only needs a head when the diffusion width is off
    if (c.task == Task::graph_regression || width != target) s.outputs = target;
  }
  s.output_activation = c.output_activation.value_or(classify            ? Activation::softmax
                                                     : c.rescale_output ? Activation::sigmoid
                                                                        : Activation::identity);
  s.rescale_output = c.rescale_output;
  s.n_nodes = data.fixed_nodes;
  s.slot_dim = prepared.slot_dim;
  s.in_features = prepared.in_features;
  s.init_noise = c.init_noise;
  return s;
}

std::vector<Sample> select(const std::vector<Sample>& samples, const std::vector<std::size_t>& idx) {
  std::vector<Sample> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(samples.at(i));
  return out;
}

namespace {

void set_range_from(ModelGraphNet& model, const std::vector<Sample>& train) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const Sample& s : train) {
    lo = std::min(lo, s.targets.minCoeff());
    hi = std::max(hi, s.targets.maxCoeff());
  }
  model.set_output_range(lo, hi);
}

Evaluation evaluate_or_nan(const ModelGraphNet& m, const std::vector<Sample>& s, LossKind loss) {
  if (s.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, 0};
  }
  return evaluate(m, s, loss);
}

std::uint64_t model_seed(std::uint64_t trial_seed, std::size_t fold) {
  return trial_seed * 0x9E3779B97F4A7C15ULL + fold;
}

}  // namespace

std::vector<ModelSummary> run_experiment(const ExperimentConfig& base, const RunOptions& options) {
  ExperimentConfig c = base;
  if (options.seed) c.seed = *options.seed;
  if (options.trials) c.trials = *options.trials;
  std::vector<DiffusionKind> kinds = options.models;
  if (kinds.empty()) kinds.push_back(c.model);
  for (DiffusionKind k : kinds) validate(c, k);

  const RawDataset data = load_dataset(c);
  if (options.progress)
    for (const std::string& note : data.notes) *options.progress << note << '\n';
  const std::vector<Split> splits = make_splits(c, data);

  std::vector<ModelSummary> out;
  for (DiffusionKind kind : kinds) {
    ExperimentConfig mc = c;
    mc.model = kind;
    const PreparedData prepared = prepare_data(mc, data, kind);
    const ModelSpec spec = model_spec(mc, data, prepared, kind);
    ModelSummary summary;
    summary.model = kind;
    summary.metric = metric_name(c.loss);
    const std::string dir = options.out_dir.empty() ? "" : options.out_dir + "/" + to_string(kind);
    if (!dir.empty()) std::filesystem::create_directories(dir);

    for (std::size_t trial = 0; trial < c.trials; ++trial) {
      const std::uint64_t trial_seed = c.seed + trial;
      double fold_sum = 0.0;
      for (std::size_t f = 0; f < splits.size(); ++f) {
        const std::vector<Sample> train_set = select(prepared.samples, splits[f].train);
        const std::vector<Sample> val_set = select(prepared.samples, splits[f].validation);
        const std::vector<Sample> test_set = select(prepared.samples, splits[f].test);
        ModelGraphNet model(spec, model_seed(trial_seed, f), prepared.reference.get());
        if (spec.rescale_output) set_range_from(model, train_set);
        TrainConfig tc;
        tc.optimizer.kind = c.optimizer;
        tc.optimizer.learning_rate = *c.learning_rate;
        tc.loss = c.loss;
        tc.epochs = c.epochs;
        tc.batch_size = c.batch_size;
        tc.patience = c.patience;
        tc.seed = model_seed(trial_seed, f) + 1;
        const TrainingLog log = train(model, train_set, val_set, tc);

        FoldResult r;
        r.trial = trial;
        r.fold = f;
        r.test = evaluate_or_nan(model, test_set, c.loss);
        r.validation = evaluate_or_nan(model, val_set, c.loss);
        r.best_epoch = log.best().epoch;
        r.epochs_run = log.epochs.back().epoch;
        summary.folds.push_back(r);
        fold_sum += r.test.metric;

        if (!dir.empty()) {
          const std::string stem = dir + "/trial" + std::to_string(trial) + "_fold" + std::to_string(f);
          std::ofstream csv(stem + "_log.csv");
          log.write_csv(csv);
          save_checkpoint_file(stem + ".ckpt", model, serialize_config(mc));
        }
        if (options.progress) {
          *options.progress << to_string(kind) << " trial " << trial << " fold " << f << ": test "
                            << summary.metric << ' ' << fixed(r.test.metric) << ", validation " << summary.metric
                            << ' ' << fixed(r.validation.metric) << " (best epoch " << r.best_epoch << " of "
                            << r.epochs_run << ")\n";
        }
      }
      summary.trial_metrics.push_back(fold_sum / static_cast<double>(splits.size()));
    }
    const auto& m = summary.trial_metrics;
    summary.mean = std::accumulate(m.begin(), m.end(), 0.0) / static_cast<double>(m.size());
    if (m.size() > 1) {
      double ss = 0.0;
      for (double v : m) ss += (v - summary.mean) * (v - summary.mean);
      summary.stddev = std::sqrt(ss / static_cast<double>(m.size() - 1));
    }
    out.push_back(std::move(summary));
  }
  if (!options.out_dir.empty()) {
    std::ofstream csv(options.out_dir + "/summary.csv");
    csv << "model,metric,mean,std,trials\n";
    for (const auto& s : out) {
      csv << to_string(s.model) << ',' << s.metric << ',' << fixed(s.mean, 6) << ',' << fixed(s.stddev, 6) << ','
          << s.trial_metrics.size() << '\n';
    }
  }
  return out;
}

std::string summary_line(const ModelSummary& s) {
  const std::size_t r = s.trial_metrics.size();
  return s.metric + " " + fixed(s.mean) + " ± " + fixed(s.stddev) + " over " + std::to_string(r) +
         (r == 1 ? " trial" : " trials");
}

void write_comparison_table(std::ostream& os, const std::vector<ModelSummary>& rows) {
  char line[160];
  std::snprintf(line, sizeof line, "%-6s  %-9s  %10s  %10s  %6s\n", "model", "metric", "mean", "std", "trials");
  os << line;
  for (const auto& s : rows) {
    std::snprintf(line, sizeof line, "%-6s  %-9s  %10.4f  %10.4f  %6zu\n", to_string(s.model).c_str(),
                  s.metric.c_str(), s.mean, s.stddev, s.trial_metrics.size());
    os << line;
  }
}

SplitPart parse_split_part(const std::string& s) {
  if (s == "train") return SplitPart::train;
  if (s == "validation") return SplitPart::validation;
  if (s == "test") return SplitPart::test;
  throw ConfigError("--split must be train, validation or test (got '" + s + "')");
}

Evaluation evaluate_checkpoint(const std::string& checkpoint_path, SplitPart part, std::size_t fold,
                               const std::string& data_path_override) {
  const CheckpointContents ck = load_checkpoint_file(checkpoint_path);
  ExperimentConfig c = parse_config_string(ck.config_text);
  if (!data_path_override.empty()) c.path = data_path_override;
  validate(c);
  const RawDataset data = load_dataset(c);
  const std::vector<Split> splits = make_splits(c, data);
  if (fold >= splits.size()) {
    throw ConfigError("--fold " + std::to_string(fold) + " but the split has " + std::to_string(splits.size()) +
                      " fold(s)");
  }
  const PreparedData prepared = prepare_data(c, data, c.model);
  ModelGraphNet model(model_spec(c, data, prepared, c.model), 0, prepared.reference.get());
  apply_checkpoint(ck, model);
  const Split& s = splits[fold];
  const auto& idx = part == SplitPart::train ? s.train : part == SplitPart::validation ? s.validation : s.test;
  return evaluate_or_nan(model, select(prepared.samples, idx), c.loss);
}

}  // namespace qwalk
