#include "qwalk/loss.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qwalk {

std::string to_string(LossKind k) {
  switch (k) {
    case LossKind::mse: return "mse";
    case LossKind::mae: return "mae";
    case LossKind::cross_entropy: return "cross-entropy";
  }
  return "?";
}

LossKind parse_loss_kind(const std::string& s) {
  if (s == "mse") return LossKind::mse;
  if (s == "mae") return LossKind::mae;
  if (s == "cross-entropy") return LossKind::cross_entropy;
  throw std::invalid_argument("unknown loss '" + s + "' (expected mse, mae or cross-entropy)");
}

std::string metric_name(LossKind k) {
  switch (k) {
    case LossKind::mse: return "rmse";
    case LossKind::mae: return "mae";
    case LossKind::cross_entropy: return "accuracy";
  }
  return "?";
}

bool metric_higher_is_better(LossKind k) { return k == LossKind::cross_entropy; }

namespace {

bool row_active(std::span<const std::uint8_t> mask, Eigen::Index r) {
  return mask.empty() || mask[static_cast<std::size_t>(r)] != 0;
}

std::size_t checked_label(double value, Eigen::Index classes) {
  const double rounded = std::round(value);
  if (rounded != value || rounded < 0 || rounded >= static_cast<double>(classes)) {
    throw std::invalid_argument("class label " + std::to_string(value) + " outside [0, " + std::to_string(classes) +
                                ")");
  }
  return static_cast<std::size_t>(rounded);
}

void check_shapes(LossKind k, const Matrix& y, const Matrix& t, std::span<const std::uint8_t> mask) {
  if (y.rows() != t.rows()) throw std::invalid_argument("prediction and target row counts differ");
  if (k == LossKind::cross_entropy) {
    if (t.cols() != 1) throw std::invalid_argument("cross-entropy targets are one label per row");
  } else if (y.cols() != t.cols()) {
    throw std::invalid_argument("prediction and target column counts differ");
  }
  if (!mask.empty() && mask.size() != static_cast<std::size_t>(y.rows())) {
    throw std::invalid_argument("row mask length != prediction rows");
  }
}

}  // namespace

SampleLoss sample_loss(LossKind k, const Matrix& y, const Matrix& t, std::span<const std::uint8_t> mask) {
  check_shapes(k, y, t, mask);
  SampleLoss out{0.0, Matrix::Zero(y.rows(), y.cols())};
  std::size_t rows = 0;
  for (Eigen::Index r = 0; r < y.rows(); ++r) rows += row_active(mask, r);
  if (rows == 0) return out;

  if (k == LossKind::cross_entropy) {
    for (Eigen::Index r = 0; r < y.rows(); ++r) {
      if (!row_active(mask, r)) continue;
      const std::size_t label = checked_label(t(r, 0), y.cols());
      const double m = y.row(r).maxCoeff();
      const Eigen::RowVectorXd e = (y.row(r).array() - m).exp();
      const double z = e.sum();
      out.loss += -(y(r, static_cast<Eigen::Index>(label)) - m - std::log(z));
      out.grad.row(r) = e / z;
      out.grad(r, static_cast<Eigen::Index>(label)) -= 1.0;
    }
    out.loss /= static_cast<double>(rows);
    out.grad /= static_cast<double>(rows);
    return out;
  }

  const double n = static_cast<double>(rows * static_cast<std::size_t>(y.cols()));
  for (Eigen::Index r = 0; r < y.rows(); ++r) {
    if (!row_active(mask, r)) continue;
    for (Eigen::Index c = 0; c < y.cols(); ++c) {
      const double e = y(r, c) - t(r, c);
      if (k == LossKind::mse) {
        out.loss += e * e;
        out.grad(r, c) = 2.0 * e / n;
      } else {
        out.loss += std::abs(e);
        out.grad(r, c) = (e > 0) - (e < 0);
        out.grad(r, c) /= n;
      }
    }
  }
  out.loss /= n;
  return out;
}

void MetricAccumulator::add(const Matrix& y, const Matrix& t, std::span<const std::uint8_t> mask) {
  loss_sum_ += sample_loss(kind_, y, t, mask).loss;
  ++samples_;
  for (Eigen::Index r = 0; r < y.rows(); ++r) {
    if (!row_active(mask, r)) continue;
    if (kind_ == LossKind::cross_entropy) {
      Eigen::Index best = 0;
      y.row(r).maxCoeff(&best);
      correct_ += static_cast<double>(best) == t(r, 0);
      entries_ += 1.0;
      continue;
    }
    for (Eigen::Index c = 0; c < y.cols(); ++c) {
      const double e = y(r, c) - t(r, c);
      sq_sum_ += e * e;
      abs_sum_ += std::abs(e);
      entries_ += 1.0;
    }
  }
}

double MetricAccumulator::loss() const {
  return samples_ == 0 ? std::numeric_limits<double>::quiet_NaN() : loss_sum_ / static_cast<double>(samples_);
}

double MetricAccumulator::metric() const {
  if (entries_ == 0.0) return std::numeric_limits<double>::quiet_NaN();
  switch (kind_) {
    case LossKind::mse: return std::sqrt(sq_sum_ / entries_);
    case LossKind::mae: return abs_sum_ / entries_;
    case LossKind::cross_entropy: return correct_ / entries_;
  }
  return 0.0;
}

}  // namespace qwalk
