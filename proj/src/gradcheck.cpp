#include "qwalk/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace qwalk {

namespace {

std::span<const std::uint8_t> mask_for(const PreparedGraph& g, const Matrix& y) {
  if (static_cast<std::size_t>(y.rows()) == g.num_nodes() && y.rows() > 1) return g.node_mask;
  return {};
}

double total_loss(const ModelGraphNet& model, const PreparedGraph& g, std::span<const Matrix> xs,
                  std::span<const Matrix> targets, LossKind loss) {
  const std::vector<Matrix> ys = model.forward(g, xs);
  double sum = 0.0;
  for (std::size_t j = 0; j < ys.size(); ++j) sum += sample_loss(loss, ys[j], targets[j], mask_for(g, ys[j])).loss;
  return sum;
}

}  // namespace

GradCheckReport finite_difference_check(ModelGraphNet& model, const PreparedGraph& g, std::span<const Matrix> xs,
                                        std::span<const Matrix> targets, LossKind loss,
                                        const GradCheckOptions& options) {
  if (xs.size() != targets.size()) throw std::invalid_argument("one target per feature matrix");
  model.zero_grad();
  Tape tape;
  const std::vector<Matrix> ys = model.forward(g, xs, &tape);
  std::vector<Matrix> grads;
  for (std::size_t j = 0; j < ys.size(); ++j) grads.push_back(sample_loss(loss, ys[j], targets[j], mask_for(g, ys[j])).grad);
  model.backward(tape, grads);

  GradCheckReport report;
  for (Parameter& p : model.parameters()) {
    if (!p.trainable) continue;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double saved = p.value[i];
      const double h = options.epsilon;
      auto at = [&](double offset) {
        p.value[i] = saved + offset;
        return total_loss(model, g, xs, targets, loss);
      };
      double numeric = 0.0;
      if (options.five_point) {
        numeric = (at(-2 * h) - 8 * at(-h) + 8 * at(h) - at(2 * h)) / (12.0 * h);
      } else {
        numeric = (at(h) - at(-h)) / (2.0 * h);
      }
      p.value[i] = saved;
      const double analytic = p.grad[i];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), options.floor});
      const double rel = std::abs(analytic - numeric) / denom;
      ++report.checked;
      if (report.worst_parameter.empty() || rel > report.max_relative_error) {
        report.max_relative_error = rel;
        report.worst_parameter = p.name + "[" + std::to_string(i) + "]";
        report.analytic = analytic;
        report.numeric = numeric;
      }
    }
  }
  return report;
}

}  // namespace qwalk
