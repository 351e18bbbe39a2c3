#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/baselines.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/loss.hpp"
#include "qwalk/model.hpp"
#include "qwalk/optimizer.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

enum class Task { node_regression, graph_classification, graph_regression };
enum class DataFormat { temperature, tu, molecules, synthetic_shift };
enum class SplitScheme { thirds, kfold, stratified };

std::string to_string(Task t);
std::string to_string(DataFormat f);
std::string to_string(SplitScheme s);

/// Everything needed to reproduce a run. Learning rate, walk length (for
/// quantum walk models) and hop count (for DCNN) have no defaults.
struct ExperimentConfig {
  // [experiment]
  std::string name = "experiment";
  Task task = Task::node_regression;
  std::uint64_t seed = 0;
  std::size_t trials = 1;

  // [data]
  DataFormat format = DataFormat::synthetic_shift;
  std::string path;          // directory or file; relative paths resolve against the config file
  std::string dataset_name;  // TU prefix, e.g. MUTAG
  std::size_t knn = 8;
  std::size_t pad_to = 0;
  std::size_t max_instances = 0;  // 0 = all
  SplitScheme split = SplitScheme::thirds;
  std::size_t folds = 5;
  double train_fraction = 0.8;
  double validation_fraction = 0.1;
  std::size_t synthetic_nodes = 20;
  std::size_t synthetic_hop = 2;
  std::size_t synthetic_samples = 64;

  // [model]
  DiffusionKind model = DiffusionKind::quantum_walk;
  std::optional<std::size_t> steps;
  CoinPlacement coin_placement = CoinPlacement::temporal;
  CoinMode coin_mode = CoinMode::unconstrained;
  bool learn_amplitudes = false;
  bool learn_coins = true;
  bool complex_amplitudes = false;
  EdgeOrdering edge_ordering;
  std::optional<std::size_t> hops;
  std::size_t gcnn_features = 0;
  bool gcnn_bias = true;
  Activation diffusion_activation = Activation::identity;
  Readout readout = Readout::none;
  std::vector<std::size_t> hidden;
  Activation hidden_activation = Activation::relu;
  std::optional<std::size_t> outputs;  // unset: class count, target width, or no output layer
  std::optional<Activation> output_activation;
  bool rescale_output = false;
  double init_noise = 0.01;

  // [training]
  LossKind loss = LossKind::mse;
  OptimizerKind optimizer = OptimizerKind::adam;
  std::optional<double> learning_rate;
  std::size_t epochs = 128;
  std::size_t batch_size = 32;
  std::size_t patience = 8;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses INI text (`[section]`, `key = value`, `;` or `#` comments).
/// Unknown sections or keys and malformed values raise ConfigError naming
/// the field.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_string(const std::string& text);
/// Reads a file and resolves a relative data path against its directory.
ExperimentConfig load_config_file(const std::string& path);

/// Canonical text with every field written out.
std::string serialize_config(const ExperimentConfig& c);

/// Cross-field checks (required values, model/task compatibility) for the
/// given model kind. Throws ConfigError.
void validate(const ExperimentConfig& c, DiffusionKind model);
inline void validate(const ExperimentConfig& c) { validate(c, c.model); }

}  // namespace qwalk
