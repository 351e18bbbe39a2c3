#pragma once

#include <span>
#include <string>

#include "qwalk/loss.hpp"
#include "qwalk/model.hpp"

namespace qwalk {

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::string worst_parameter;  // "name[index]"
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t checked = 0;
};

struct GradCheckOptions {
  double epsilon = 1e-6;
  /// Lower bound on the denominator of the relative error, so that
  /// gradients near zero are judged by absolute error.
  double floor = 1e-4;
  /// Five-point stencil instead of the two-point central difference.
  bool five_point = false;
};

/// Compares backward() against finite differences of the summed sample
/// losses for every trainable scalar. The relative error of a scalar is
/// |a - n| / max(|a|, |n|, floor).
GradCheckReport finite_difference_check(ModelGraphNet& model, const PreparedGraph& g, std::span<const Matrix> xs,
                                        std::span<const Matrix> targets, LossKind loss,
                                        const GradCheckOptions& options = {});

}  // namespace qwalk
