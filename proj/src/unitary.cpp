#include "qwalk/unitary.hpp"

#include <cmath>
#include <string>

namespace qwalk {

UnitaryParams::UnitaryParams(std::size_t d)
    : dim(d), thetas(rotation_count(d), 0.0), phis(rotation_count(d), 0.0), diag_phases(d, 0.0) {}

namespace {

void check_shape(const UnitaryParams& p, std::size_t active_dim) {
  const std::size_t m = UnitaryParams::rotation_count(p.dim);
  if (p.thetas.size() != m || p.phis.size() != m || p.diag_phases.size() != p.dim) {
    throw std::invalid_argument("unitary parameters have inconsistent sizes for dimension " + std::to_string(p.dim));
  }
  if (active_dim > p.dim) throw std::invalid_argument("active dimension exceeds unitary dimension");
}

template <class T>
T rotation_phase(double phi) {
  if constexpr (is_complex<T>::value) {
    return std::polar(1.0, phi);
  } else {
    if (phi != 0.0) throw std::invalid_argument("real unitary parametrization requires phi = 0");
    return 1.0;
  }
}

template <class T>
T diag_entry(double psi) {
  if constexpr (is_complex<T>::value) {
    return std::polar(1.0, psi);
  } else {
    return std::cos(psi);
  }
}

// M <- M * R_{KL} restricted to columns K and L.
template <class T>
void right_rotate(MatrixT<T>& m, std::size_t K, std::size_t L, const T& rkk, const T& rkl, const T& rlk,
                  const T& rll) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const T a = m(r, K);
    const T b = m(r, L);
    m(r, K) = a * rkk + b * rlk;
    m(r, L) = a * rkl + b * rll;
  }
}

// M <- R_{KL} * M restricted to rows K and L.
template <class T>
void left_rotate(MatrixT<T>& m, std::size_t K, std::size_t L, const T& rkk, const T& rkl, const T& rlk,
                 const T& rll) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const T a = m(K, c);
    const T b = m(L, c);
    m(K, c) = rkk * a + rkl * b;
    m(L, c) = rlk * a + rll * b;
  }
}

}  // namespace

template <class T>
MatrixT<T> unitary_from_params(const UnitaryParams& p, std::size_t active_dim) {
  check_shape(p, active_dim);
  const std::size_t d = p.dim;
  MatrixT<T> m = MatrixT<T>::Identity(d, d);
  for (std::size_t k = 2; k <= active_dim; ++k) {
    for (std::size_t l = 1; l < k; ++l) {
      const std::size_t j = UnitaryParams::rotation_index(k, l);
      const double c = std::cos(p.thetas[j]);
      const double s = std::sin(p.thetas[j]);
      const T e = rotation_phase<T>(p.phis[j]);
      right_rotate<T>(m, k - 1, l - 1, e * c, -e * s, T(s), T(c));
    }
  }
  for (std::size_t a = 0; a < active_dim; ++a) m.row(a) *= diag_entry<T>(p.diag_phases[a]);
  return m;
}

template <class T>
UnitaryGradient unitary_param_gradient(const UnitaryParams& p, std::size_t active_dim, const MatrixT<T>& upstream) {
  check_shape(p, active_dim);
  const std::size_t d = p.dim;
  const std::size_t m = UnitaryParams::rotation_count(d);
  UnitaryGradient grad{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0), std::vector<double>(d, 0.0)};

  struct Rot {
    std::size_t j, K, L;
    double c, s;
    T e;
  };
  std::vector<Rot> rots;
  for (std::size_t k = 2; k <= active_dim; ++k) {
    for (std::size_t l = 1; l < k; ++l) {
      const std::size_t j = UnitaryParams::rotation_index(k, l);
      rots.push_back({j, k - 1, l - 1, std::cos(p.thetas[j]), std::sin(p.thetas[j]), rotation_phase<T>(p.phis[j])});
    }
  }

  // suffix[r] = R_{r+1} ... R_last
  std::vector<MatrixT<T>> suffix(rots.size() + 1, MatrixT<T>::Identity(d, d));
  for (std::size_t r = rots.size(); r-- > 0;) {
    suffix[r] = suffix[r + 1];
    const Rot& q = rots[r];
    left_rotate<T>(suffix[r], q.K, q.L, q.e * q.c, -q.e * q.s, T(q.s), T(q.c));
  }
  // full rotation product, before D
  const MatrixT<T>& product = suffix[0];

  MatrixT<T> diag = MatrixT<T>::Identity(d, d);
  for (std::size_t a = 0; a < active_dim; ++a) diag(a, a) = diag_entry<T>(p.diag_phases[a]);

  // <G, left * R' * right> = sum_{cd} R'_{cd} (right * G^H * left)_{dc}
  const MatrixT<T> g_h = upstream.adjoint();
  MatrixT<T> prefix = diag;
  for (std::size_t r = 0; r < rots.size(); ++r) {
    const Rot& q = rots[r];
    const MatrixT<T> b = suffix[r + 1] * g_h * prefix;
    const std::size_t K = q.K, L = q.L;
    // d/dtheta
    const T dkk = -q.e * q.s, dkl = -q.e * q.c, dlk = T(q.c), dll = T(-q.s);
    const T dtheta = dkk * b(K, K) + dkl * b(L, K) + dlk * b(K, L) + dll * b(L, L);
    grad.thetas[q.j] = real_part(dtheta);
    if constexpr (is_complex<T>::value) {
      const Complex i(0.0, 1.0);
      const T pkk = i * q.e * q.c, pkl = -i * q.e * q.s;
      grad.phis[q.j] = real_part(pkk * b(K, K) + pkl * b(L, K));
    }
    right_rotate<T>(prefix, K, L, q.e * q.c, -q.e * q.s, T(q.s), T(q.c));
  }

  if constexpr (is_complex<T>::value) {
    const Complex i(0.0, 1.0);
    for (std::size_t a = 0; a < active_dim; ++a) {
      Complex acc = 0.0;
      for (std::size_t c = 0; c < d; ++c) acc += std::conj(upstream(a, c)) * i * diag(a, a) * product(a, c);
      grad.diag_phases[a] = acc.real();
    }
  }
  return grad;
}

UnitaryParams decompose_orthogonal(const Matrix& q) {
  if (q.rows() != q.cols()) throw std::invalid_argument("decompose_orthogonal needs a square matrix");
  const std::size_t d = static_cast<std::size_t>(q.rows());
  if ((q.transpose() * q - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("decompose_orthogonal: matrix is not orthogonal");
  }
  UnitaryParams p(d);
  Matrix a = q;
  // Right-multiplying by R^T zeroes row K left of the diagonal, last row first.
  for (std::size_t K = d; K-- > 1;) {
    for (std::size_t L = K; L-- > 0;) {
      const double theta = std::atan2(-a(K, L), a(K, K));
      p.thetas[UnitaryParams::rotation_index(K + 1, L + 1)] = theta;
      const double c = std::cos(theta), s = std::sin(theta);
      // R^T block: [[c, s], [-s, c]] on (K, L)
      right_rotate<double>(a, K, L, c, s, -s, c);
    }
  }
  for (std::size_t k = 0; k < d; ++k) p.diag_phases[k] = a(k, k) < 0 ? M_PI : 0.0;
  return p;
}

template MatrixT<double> unitary_from_params<double>(const UnitaryParams&, std::size_t);
template MatrixT<Complex> unitary_from_params<Complex>(const UnitaryParams&, std::size_t);
template UnitaryGradient unitary_param_gradient<double>(const UnitaryParams&, std::size_t, const MatrixT<double>&);
template UnitaryGradient unitary_param_gradient<Complex>(const UnitaryParams&, std::size_t, const MatrixT<Complex>&);

}  // namespace qwalk
