#pragma once

#include <cstddef>
#include <vector>

#include "qwalk/types.hpp"

namespace qwalk {

/// Parameters of U = D * prod_{k=2..d} prod_{l=1..k-1} R_{kl}, where R_{kl}
/// is the identity except for the block
///
///     [R_kk R_kl]   [e^{i phi} cos(theta)  -e^{i phi} sin(theta)]
///     [R_lk R_ll] = [sin(theta)             cos(theta)          ]
///
/// and D = diag(e^{i psi_1}, ..., e^{i psi_d}). Rotations are stored with k
/// ascending and l ascending within each k, matching the product order, so
/// D acts last on a column vector.
struct UnitaryParams {
  std::size_t dim = 0;
  std::vector<double> thetas;
  std::vector<double> phis;
  std::vector<double> diag_phases;

  explicit UnitaryParams(std::size_t d = 0);

  static std::size_t rotation_count(std::size_t d) { return d * (d - 1) / 2; }
  /// Storage index of R_{kl} for 1 <= l < k <= d (1-based, as in the product).
  static std::size_t rotation_index(std::size_t k, std::size_t l) { return (k - 1) * (k - 2) / 2 + (l - 1); }
};

/// Builds the d x d matrix. Only the leading `active_dim` coordinates are
/// rotated (rotations touching k > active_dim are skipped and the trailing
/// diagonal is 1), which embeds a smaller unitary with identity padding.
/// The real instantiation requires every phi to be 0 and uses cos(psi) on
/// the diagonal, so phases must be 0 or pi.
template <class T>
MatrixT<T> unitary_from_params(const UnitaryParams& p, std::size_t active_dim);

template <class T>
MatrixT<T> unitary_from_params(const UnitaryParams& p) {
  return unitary_from_params<T>(p, p.dim);
}

struct UnitaryGradient {
  std::vector<double> thetas;
  std::vector<double> phis;
  std::vector<double> diag_phases;
};

/// Pulls an upstream gradient G = dL/dRe(U) + i dL/dIm(U) back onto the
/// angles. Inactive rotations get exactly zero. For the real instantiation
/// phi and phase gradients are reported as zero.
template <class T>
UnitaryGradient unitary_param_gradient(const UnitaryParams& p, std::size_t active_dim, const MatrixT<T>& upstream);

/// Finds real angles (phi = 0, phases in {0, pi}) reproducing a real
/// orthogonal matrix by Givens elimination. Throws if q is not orthogonal.
UnitaryParams decompose_orthogonal(const Matrix& q);

}  // namespace qwalk
