#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "qwalk/loss.hpp"
#include "qwalk/model.hpp"
#include "qwalk/optimizer.hpp"

namespace qwalk {

/// One training example. Samples that share a PreparedGraph pointer are
/// pushed through the walk together.
struct Sample {
  std::shared_ptr<const PreparedGraph> graph;
  Matrix features;
  Matrix targets;  // node rows, a single graph row, or a label column
};

inline constexpr std::size_t max_epochs = 128;

struct TrainConfig {
  OptimizerConfig optimizer;
  LossKind loss = LossKind::mse;
  std::size_t epochs = max_epochs;
  std::size_t batch_size = 32;
  std::size_t patience = 8;  // 0 disables early stopping
  std::uint64_t seed = 0;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_metric = 0.0;
  double validation_metric = 0.0;
  double train_loss = 0.0;
  double validation_loss = 0.0;
  double wall_seconds = 0.0;
};

/// Epoch 0 is the untrained model.
struct TrainingLog {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  bool stopped_early = false;

  const EpochRecord& best() const { return epochs.at(best_epoch); }
  void write_csv(std::ostream& os) const;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Evaluation {
  double loss = 0.0;
  double metric = 0.0;
  std::size_t samples = 0;
};

/// Row mask used by the loss: the graph's node mask when the output has one
/// row per node, none otherwise.
std::span<const std::uint8_t> loss_mask(const Sample& s, const Matrix& prediction);

Evaluation evaluate(const ModelGraphNet& model, std::span<const Sample> samples, LossKind loss);

/// Minibatch training with early stopping on the validation metric. The best
/// parameters seen (including epoch 0) are restored before returning. With
/// no validation samples the training metric decides.
TrainingLog train(ModelGraphNet& model, std::span<const Sample> train_set, std::span<const Sample> validation_set,
                  const TrainConfig& config);

}  // namespace qwalk
