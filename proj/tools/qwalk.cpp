// qwalk: train, evaluate and inspect quantum-walk graph networks.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "qwalk/checkpoint.hpp"
#include "qwalk/config.hpp"
#include "qwalk/datasets.hpp"
#include "qwalk/experiment.hpp"
#include "qwalk/inspect.hpp"
#include "qwalk/train.hpp"

namespace fs = std::filesystem;
using namespace qwalk;

namespace {

constexpr int exit_config = 2;
constexpr int exit_data = 3;

std::vector<DiffusionKind> parse_models(const std::string& list) {
  std::vector<DiffusionKind> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      out.push_back(parse_diffusion_kind(item));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("--models: ") + e.what());
    }
  }
  return out;
}

int cmd_train(const std::string& config_path, std::optional<std::uint64_t> seed, std::optional<std::size_t> trials,
              std::string out_dir, const std::string& models) {
  const ExperimentConfig c = load_config_file(config_path);
  RunOptions opt;
  opt.seed = seed;
  opt.trials = trials;
  opt.models = parse_models(models);
  opt.out_dir = out_dir.empty() ? "runs/" + c.name : out_dir;
  opt.progress = &std::cerr;
  const auto summaries = run_experiment(c, opt);
  for (const auto& s : summaries) std::cout << to_string(s.model) << ": " << summary_line(s) << '\n';
  if (summaries.size() > 1) write_comparison_table(std::cout, summaries);
  std::cerr << "logs and checkpoints in " << opt.out_dir << '\n';
  return 0;
}

int cmd_eval(const std::string& checkpoint, const std::string& split, std::size_t fold, const std::string& data) {
  const Evaluation e = evaluate_checkpoint(checkpoint, parse_split_part(split), fold, data);
  const ExperimentConfig c = parse_config_string(load_checkpoint_file(checkpoint).config_text);
  std::printf("%s fold %zu: %s %.6f, loss %.6f over %zu samples\n", split.c_str(), fold, metric_name(c.loss).c_str(),
              e.metric, e.loss, e.samples);
  return 0;
}

int cmd_inspect(const std::string& source, const std::string& coin, const std::string& state, std::size_t start,
                std::size_t steps, const std::string& out_dir) {
  const Graph g = parse_graph_source(source);
  const WalkTrace t = trace_walk(g, parse_inspect_coin(coin), start, steps, parse_start_state(state));
  if (out_dir.empty()) {
    write_marginals_csv(std::cout, t);
    return 0;
  }
  fs::create_directories(out_dir);
  std::ofstream m(out_dir + "/marginals.csv"), d(out_dir + "/diffusion.csv");
  write_marginals_csv(m, t);
  write_diffusion_csv(d, t.diffusion);
  std::cerr << "wrote " << out_dir << "/marginals.csv and diffusion.csv\n";
  return 0;
}

int cmd_import(const std::string& format, const std::string& path, const std::string& name, std::size_t knn,
               const std::string& out_dir) {
  if (!out_dir.empty()) fs::create_directories(out_dir);
  if (format == "tu") {
    const TuDataset d = read_tu_dataset(path, name);
    for (const auto& w : d.warnings) std::cerr << "warning: " << w << '\n';
    const TuStatistics s = statistics(d);
    std::printf("%s: %zu graphs, average nodes %.2f, max nodes %zu, max degree %zu, %zu node classes, %zu graph classes\n",
                name.c_str(), s.graphs, s.average_nodes, s.max_nodes, s.max_degree, s.node_classes, s.graph_classes);
    if (!out_dir.empty()) write_tu_dataset(out_dir, d);
  } else if (format == "molecules") {
    const auto mols = read_molecules_file(path);
    const MoleculeDataset d = molecule_graphs(mols);
    std::size_t max_atoms = 0, max_degree = 0;
    for (const auto& m : mols) max_atoms = std::max(max_atoms, m.charges.size());
    for (const auto& g : d.graphs) max_degree = std::max(max_degree, g.graph->max_degree());
    std::printf("%zu molecules, %zu elements, max atoms %zu, max degree %zu, %zu needed connectivity repair\n",
                mols.size(), d.elements.size(), max_atoms, max_degree, d.repaired);
    if (!out_dir.empty()) {
      std::ofstream os(out_dir + "/molecules.txt");
      write_molecules(os, mols);
    }
  } else if (format == "temperature") {
    const TemperatureData d = read_temperature_dir(path);
    std::vector<GeoPoint> pts;
    for (const auto& s : d.stations) pts.push_back(s.location);
    const GeoGraph geo = knn_geo_graph(pts, knn);
    std::printf("%zu stations, %zu complete days, %zu dropped, %zu-NN graph: %zu edges, %zu component(s), max degree %zu\n",
                d.stations.size(), d.dates.size(), d.dropped_days, knn, geo.graph.num_edges(), geo.components,
                geo.graph.max_degree());
    if (!out_dir.empty()) {
      std::ofstream os(out_dir + "/knn_graph.edges");
      write_edge_list(os, geo.graph);
    }
  } else {
    throw ConfigError("--format must be tu, molecules or temperature (got '" + format + "')");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-walk graph networks"};
  app.require_subcommand(1);

  std::string config, out_dir, models, checkpoint, split = "test", data, source, coin = "grover", start_state = "uniform", format, path, name;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::size_t fold = 0, start = 0, steps = 4, knn = 8;

  auto* train = app.add_subcommand("train", "Train the configured model(s) over all trials and folds");
  train->add_option("--config", config, "Experiment config (INI)")->required();
  train->add_option("--seed", seed, "Override the config seed");
  train->add_option("--trials", trials, "Override the trial count");
  train->add_option("--out-dir", out_dir, "Where logs, checkpoints and summary.csv go (default runs/<name>)");
  train->add_option("--models", models, "Comma list of qwnn,dcnn,gcnn to run on the same splits");

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on one split part");
  eval->add_option("--checkpoint", checkpoint, "Checkpoint written by train")->required();
  eval->add_option("--split", split, "train, validation or test");
  eval->add_option("--fold", fold, "Fold index for k-fold splits");
  eval->add_option("--data", data, "Data path, overriding the one stored in the checkpoint");

  auto* inspect = app.add_subcommand("inspect-walk", "Dump classical and quantum walk marginals as CSV");
  inspect->add_option("--graph", source, "cycle:N, path:N, lattice:RxC, complete:N, star:L or file:PATH")->required();
  inspect->add_option("--coin", coin, "grover, hadamard or swap");
  inspect->add_option("--start", start, "Start node");
  inspect->add_option("--start-state", start_state, "uniform or symmetric (Hadamard-walk start, degree-2 node)");
  inspect->add_option("--steps", steps, "Walk length T");
  inspect->add_option("--out-dir", out_dir, "Write marginals.csv and diffusion.csv here instead of stdout");

  auto* import = app.add_subcommand("import-data", "Validate a dataset, print statistics, optionally write a normalized copy");
  import->add_option("--format", format, "tu, molecules or temperature")->required();
  import->add_option("--path", path, "Dataset directory or file")->required();
  import->add_option("--name", name, "TU dataset name (file prefix)");
  import->add_option("--knn", knn, "Neighbors for the temperature station graph");
  import->add_option("--out-dir", out_dir, "Write the normalized copy here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  try {
    if (*train) return cmd_train(config, seed, trials, out_dir, models);
    if (*eval) return cmd_eval(checkpoint, split, fold, data);
    if (*inspect) return cmd_inspect(source, coin, start_state, start, steps, out_dir);
    if (*import) {
      if (format == "tu" && name.empty()) throw ConfigError("--name is required for tu datasets");
      return cmd_import(format, path, name, knn, out_dir);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return exit_data;
  } catch (const TrainingError& e) {
    std::cerr << "training error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
