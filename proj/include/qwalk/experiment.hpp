#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/config.hpp"
#include "qwalk/datasets.hpp"
#include "qwalk/train.hpp"

namespace qwalk {

/// Instances as loaded, before any model-specific preparation. Node
/// regression instances share one graph pointer.
struct RawDataset {
  std::vector<GraphInstance> instances;
  std::vector<int> labels;      // classification only
  std::size_t classes = 0;      // classification only
  std::size_t fixed_nodes = 0;  // nonzero when every graph has this many nodes
  std::vector<std::string> notes;
};

RawDataset load_dataset(const ExperimentConfig& c);

/// Splits in the order they are run; one entry unless k-fold.
std::vector<Split> make_splits(const ExperimentConfig& c, const RawDataset& data);

/// Samples with graphs prepared for one model kind. Equal input graphs
/// share a PreparedGraph.
struct PreparedData {
  std::vector<Sample> samples;
  std::size_t slot_dim = 1;
  std::size_t in_features = 0;
  std::shared_ptr<const PreparedGraph> reference;  // shared graph of node tasks
};

PreparedData prepare_data(const ExperimentConfig& c, const RawDataset& data, DiffusionKind kind);

ModelSpec model_spec(const ExperimentConfig& c, const RawDataset& data, const PreparedData& prepared,
                     DiffusionKind kind);

std::vector<Sample> select(const std::vector<Sample>& samples, const std::vector<std::size_t>& idx);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::string out_dir;                // empty: no files written
  std::vector<DiffusionKind> models;  // empty: the config's model
  std::ostream* progress = nullptr;
};

struct FoldResult {
  std::size_t trial = 0;
  std::size_t fold = 0;
  Evaluation test;
  Evaluation validation;
  std::size_t best_epoch = 0;
  std::size_t epochs_run = 0;
};

struct ModelSummary {
  DiffusionKind model = DiffusionKind::quantum_walk;
  std::string metric;
  std::vector<double> trial_metrics;  // test metric per trial, averaged over folds
  std::vector<FoldResult> folds;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for one trial
};

std::vector<ModelSummary> run_experiment(const ExperimentConfig& c, const RunOptions& options);

/// `rmse 5.280 ± 0.080 over 5 trials`
std::string summary_line(const ModelSummary& s);
void write_comparison_table(std::ostream& os, const std::vector<ModelSummary>& rows);

enum class SplitPart { train, validation, test };
SplitPart parse_split_part(const std::string& s);

/// Rebuilds the model described by a checkpoint and evaluates it on one
/// part of the configured split. The data path in the checkpoint's config
/// can be overridden.
Evaluation evaluate_checkpoint(const std::string& checkpoint_path, SplitPart part, std::size_t fold,
                               const std::string& data_path_override = "");

}  // namespace qwalk
