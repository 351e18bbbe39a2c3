#pragma once

#include <string>
#include <vector>

#include "qwalk/parameters.hpp"

namespace qwalk {

enum class OptimizerKind { adam, sgd };

std::string to_string(OptimizerKind k);
OptimizerKind parse_optimizer_kind(const std::string& s);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::adam;
  double learning_rate = 0.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Updates trainable parameters from their gradient buffers. Frozen
/// parameters are never touched.
class Optimizer {
 public:
  Optimizer(OptimizerConfig config, const ParameterSet& params);

  void step(ParameterSet& params);
  const OptimizerConfig& config() const { return config_; }

 private:
  OptimizerConfig config_;
  std::size_t t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

}  // namespace qwalk
