#include "qwalk/walk.hpp"

#include <cmath>

namespace qwalk {

template <class T>
double Superposition<T>::walker_norm_sq(std::size_t w) const {
  double acc = 0.0;
  for (const T& a : walker(w)) acc += abs2(a);
  return acc;
}

std::string to_string(CoinPlacement p) { return p == CoinPlacement::spatial ? "spatial" : "temporal"; }

std::string to_string(CoinMode m) {
  switch (m) {
    case CoinMode::fixed_grover: return "grover";
    case CoinMode::unitary: return "unitary";
    case CoinMode::unconstrained: return "unconstrained";
  }
  return "?";
}

CoinPlacement parse_coin_placement(const std::string& s) {
  if (s == "spatial") return CoinPlacement::spatial;
  if (s == "temporal") return CoinPlacement::temporal;
  throw std::invalid_argument("unknown coin placement '" + s + "'");
}

CoinMode parse_coin_mode(const std::string& s) {
  if (s == "grover") return CoinMode::fixed_grover;
  if (s == "unitary") return CoinMode::unitary;
  if (s == "unconstrained") return CoinMode::unconstrained;
  throw std::invalid_argument("unknown coin mode '" + s + "'");
}

template <class T>
const MatrixT<T>& CoinSet<T>::coin(std::size_t node, std::size_t step) const {
  if (placement == CoinPlacement::spatial) {
    if (node >= coins.size()) throw std::out_of_range("no spatial coin for node " + std::to_string(node));
    return coins[node];
  }
  if (step >= coins.size()) {
    throw std::out_of_range("step " + std::to_string(step) + " has no temporal coin (only " +
                            std::to_string(coins.size()) + ")");
  }
  return coins[step];
}

Matrix grover_coin(std::size_t d) {
  if (d == 0) throw std::invalid_argument("grover coin needs d >= 1");
  return Matrix::Constant(d, d, 2.0 / static_cast<double>(d)) - Matrix::Identity(d, d);
}

Matrix hadamard_coin() {
  Matrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  return h / std::sqrt(2.0);
}

template <class T>
MatrixT<T> embed_coin(const MatrixT<T>& inner, std::size_t d) {
  if (static_cast<std::size_t>(inner.rows()) > d) throw std::invalid_argument("coin larger than slot dimension");
  MatrixT<T> out = MatrixT<T>::Identity(d, d);
  out.topLeftCorner(inner.rows(), inner.cols()) = inner;
  return out;
}

CoinSet<double> spatial_grover_coins(const Graph& g, std::size_t slot_dim) {
  const std::size_t d = slot_dim == 0 ? g.slot_dim() : slot_dim;
  CoinSet<double> set{CoinPlacement::spatial, CoinMode::fixed_grover, {}};
  set.coins.reserve(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const std::size_t k = g.degree(v);
    set.coins.push_back(k == 0 ? Matrix::Identity(d, d) : embed_coin<double>(grover_coin(k), d));
  }
  return set;
}

template <class T>
CoinSet<T> temporal_coins(const MatrixT<T>& coin, std::size_t steps, CoinMode mode) {
  return CoinSet<T>{CoinPlacement::temporal, mode, std::vector<MatrixT<T>>(steps, coin)};
}

Superposition<double> init_uniform_superposition(const Graph& g, std::size_t slot_dim) {
  const std::size_t n = g.num_nodes();
  const std::size_t d = slot_dim == 0 ? g.slot_dim() : slot_dim;
  Superposition<double> s(n, n, d);
  for (NodeId w = 0; w < n; ++w) {
    const std::size_t deg = g.degree(w);
    if (deg == 0) {
      s(w, w, 0) = 1.0;
      continue;
    }
    const double amp = 1.0 / std::sqrt(static_cast<double>(deg));
    for (std::size_t i = 0; i < deg; ++i) s(w, w, i) = amp;
  }
  return s;
}

template <class T>
Superposition<T> to_scalar(const Superposition<double>& s) {
  Superposition<T> out(s.walkers(), s.nodes(), s.slots());
  auto src = s.data();
  auto dst = out.data();
  for (std::size_t k = 0; k < src.size(); ++k) dst[k] = T(src[k]);
  return out;
}

template <class T>
Superposition<T> apply_coin(const Superposition<T>& s, const CoinSet<T>& coins, std::size_t step) {
  const std::size_t d = s.slots();
  if (coins.dim() != d) {
    throw std::invalid_argument("coin dimension " + std::to_string(coins.dim()) + " does not match " +
                                std::to_string(d) + " slots");
  }
  if (coins.placement == CoinPlacement::temporal && step >= coins.coins.size()) {
    throw std::out_of_range("step " + std::to_string(step) + " beyond the " + std::to_string(coins.coins.size()) +
                            " temporal coins");
  }
  Superposition<T> out(s.walkers(), s.nodes(), d);
  for (std::size_t w = 0; w < s.walkers(); ++w) {
    for (std::size_t v = 0; v < s.nodes(); ++v) {
      const MatrixT<T>& c = coins.coin(v, step);
      for (std::size_t j = 0; j < d; ++j) {
        T acc = T(0);
        for (std::size_t k = 0; k < d; ++k) acc += s(w, v, k) * c(k, j);
        out(w, v, j) = acc;
      }
    }
  }
  return out;
}

template <class T>
Superposition<T> apply_shift(const Superposition<T>& s, const ShiftPermutation& shift) {
  if (shift.num_nodes() != s.nodes() || shift.slots() != s.slots()) {
    throw std::invalid_argument("shift domain does not match superposition shape");
  }
  Superposition<T> out(s.walkers(), s.nodes(), s.slots());
  for (std::size_t w = 0; w < s.walkers(); ++w) {
    auto src = s.walker(w);
    auto dst = out.walker(w);
    for (std::size_t k = 0; k < src.size(); ++k) dst[shift(k)] = src[k];
  }
  return out;
}

template <class T>
Superposition<T> walk(const Superposition<T>& s0, const CoinSet<T>& coins, const ShiftPermutation& shift,
                      std::size_t steps, std::size_t node_budget) {
  if (s0.nodes() > node_budget) {
    throw std::length_error("graph has " + std::to_string(s0.nodes()) + " nodes, above the walk budget of " +
                            std::to_string(node_budget));
  }
  Superposition<T> s = s0;
  for (std::size_t t = 0; t < steps; ++t) s = apply_shift(apply_coin(s, coins, t), shift);
  return s;
}

template <class T>
Matrix diffusion_matrix(const Superposition<T>& s) {
  Matrix p = Matrix::Zero(s.walkers(), s.nodes());
  for (std::size_t w = 0; w < s.walkers(); ++w)
    for (std::size_t v = 0; v < s.nodes(); ++v) {
      double acc = 0.0;
      for (std::size_t i = 0; i < s.slots(); ++i) acc += abs2(s(w, v, i));
      p(w, v) = acc;
    }
  return p;
}

Vector classical_walk_distribution(const Graph& g, const Vector& start, std::size_t steps) {
  if (static_cast<std::size_t>(start.size()) != g.num_nodes()) {
    throw std::invalid_argument("start distribution length does not match node count");
  }
  if (std::abs(start.sum() - 1.0) > 1e-9) throw std::invalid_argument("start distribution must sum to 1");
  if (steps == 0) return start;
  const Matrix w = transition_matrix(g);
  Eigen::RowVectorXd dist = start.transpose();
  for (std::size_t t = 0; t < steps; ++t) dist = dist * w;
  return dist.transpose();
}

template class Superposition<double>;
template class Superposition<Complex>;
template struct CoinSet<double>;
template struct CoinSet<Complex>;
template MatrixT<double> embed_coin<double>(const MatrixT<double>&, std::size_t);
template MatrixT<Complex> embed_coin<Complex>(const MatrixT<Complex>&, std::size_t);
template CoinSet<double> temporal_coins<double>(const MatrixT<double>&, std::size_t, CoinMode);
template CoinSet<Complex> temporal_coins<Complex>(const MatrixT<Complex>&, std::size_t, CoinMode);
template Superposition<double> to_scalar<double>(const Superposition<double>&);
template Superposition<Complex> to_scalar<Complex>(const Superposition<double>&);
template Superposition<double> apply_coin<double>(const Superposition<double>&, const CoinSet<double>&, std::size_t);
template Superposition<Complex> apply_coin<Complex>(const Superposition<Complex>&, const CoinSet<Complex>&,
                                                    std::size_t);
template Superposition<double> apply_shift<double>(const Superposition<double>&, const ShiftPermutation&);
template Superposition<Complex> apply_shift<Complex>(const Superposition<Complex>&, const ShiftPermutation&);
template Superposition<double> walk<double>(const Superposition<double>&, const CoinSet<double>&,
                                            const ShiftPermutation&, std::size_t, std::size_t);
template Superposition<Complex> walk<Complex>(const Superposition<Complex>&, const CoinSet<Complex>&,
                                              const ShiftPermutation&, std::size_t, std::size_t);
template Matrix diffusion_matrix<double>(const Superposition<double>&);
template Matrix diffusion_matrix<Complex>(const Superposition<Complex>&);

}  // namespace qwalk
