#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "qwalk/types.hpp"

namespace qwalk {

enum class LossKind { mse, mae, cross_entropy };

std::string to_string(LossKind k);
LossKind parse_loss_kind(const std::string& s);

/// Name of the reported metric: RMSE, MAE or accuracy.
std::string metric_name(LossKind k);
bool metric_higher_is_better(LossKind k);

/// Loss of one sample and its gradient with respect to the prediction.
/// Regression losses average over the unmasked entries. Cross-entropy takes
/// logits (one row per example) and a column of integer labels.
/// `row_mask` may be empty; masked rows get zero gradient.
struct SampleLoss {
  double loss = 0.0;
  Matrix grad;
};

SampleLoss sample_loss(LossKind k, const Matrix& prediction, const Matrix& target,
                       std::span<const std::uint8_t> row_mask = {});

/// Running totals for loss and metric over many samples.
class MetricAccumulator {
 public:
  explicit MetricAccumulator(LossKind k) : kind_(k) {}

  void add(const Matrix& prediction, const Matrix& target, std::span<const std::uint8_t> row_mask = {});

  /// Mean per-sample loss.
  double loss() const;
  double metric() const;
  std::size_t samples() const { return samples_; }

 private:
  LossKind kind_;
  std::size_t samples_ = 0;
  double loss_sum_ = 0.0;
  double abs_sum_ = 0.0;
  double sq_sum_ = 0.0;
  double entries_ = 0.0;
  double correct_ = 0.0;
};

}  // namespace qwalk
