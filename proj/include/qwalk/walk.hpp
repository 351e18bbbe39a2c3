#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/types.hpp"

namespace qwalk {

/// Largest graph the dense walk engine accepts by default. A full walker set
/// stores N * N * d amplitudes per step.
inline constexpr std::size_t default_node_budget = 2000;

/// Amplitudes of W independent walkers over (node, slot), walker-major.
template <class T>
class Superposition {
 public:
  Superposition() = default;
  Superposition(std::size_t walkers, std::size_t nodes, std::size_t slots)
      : walkers_(walkers), nodes_(nodes), slots_(slots), amp_(walkers * nodes * slots, T(0)) {}

  std::size_t walkers() const { return walkers_; }
  std::size_t nodes() const { return nodes_; }
  std::size_t slots() const { return slots_; }

  T& operator()(std::size_t w, std::size_t v, std::size_t i) { return amp_[(w * nodes_ + v) * slots_ + i]; }
  const T& operator()(std::size_t w, std::size_t v, std::size_t i) const {
    return amp_[(w * nodes_ + v) * slots_ + i];
  }

  /// All amplitudes of one walker, indexed node * slots + slot.
  std::span<T> walker(std::size_t w) { return {amp_.data() + w * nodes_ * slots_, nodes_ * slots_}; }
  std::span<const T> walker(std::size_t w) const { return {amp_.data() + w * nodes_ * slots_, nodes_ * slots_}; }

  std::span<T> data() { return amp_; }
  std::span<const T> data() const { return amp_; }

  /// Sum of squared moduli of walker w's amplitudes.
  double walker_norm_sq(std::size_t w) const;

  friend bool operator==(const Superposition&, const Superposition&) = default;

 private:
  std::size_t walkers_ = 0;
  std::size_t nodes_ = 0;
  std::size_t slots_ = 0;
  std::vector<T> amp_;
};

enum class CoinPlacement { spatial, temporal };
enum class CoinMode { fixed_grover, unitary, unconstrained };

std::string to_string(CoinPlacement p);
std::string to_string(CoinMode m);
CoinPlacement parse_coin_placement(const std::string& s);
CoinMode parse_coin_mode(const std::string& s);

/// One d x d coin per node (spatial) or per step (temporal). Amplitude rows
/// are right-multiplied by the coin: out_j = sum_k in_k * C(k, j).
template <class T>
struct CoinSet {
  CoinPlacement placement = CoinPlacement::temporal;
  CoinMode mode = CoinMode::fixed_grover;
  std::vector<MatrixT<T>> coins;

  std::size_t dim() const { return coins.empty() ? 0 : static_cast<std::size_t>(coins.front().rows()); }
  /// Coin acting at `node` during step `step` (0-based).
  const MatrixT<T>& coin(std::size_t node, std::size_t step) const;
};

/// Grover diffusion (2/d) J - I.
Matrix grover_coin(std::size_t d);
/// (1/sqrt 2) [[1, 1], [1, -1]].
Matrix hadamard_coin();

/// Embeds `inner` (k x k) into a d x d identity.
template <class T>
MatrixT<T> embed_coin(const MatrixT<T>& inner, std::size_t d);

/// Spatial Grover coins: node v gets grover_coin(degree(v)) on its real
/// slots and identity on padding slots.
CoinSet<double> spatial_grover_coins(const Graph& g, std::size_t slot_dim = 0);
/// The same coin at every step.
template <class T>
CoinSet<T> temporal_coins(const MatrixT<T>& coin, std::size_t steps, CoinMode mode = CoinMode::fixed_grover);

/// One walker per node, with equal real amplitude 1/sqrt(deg) on the home
/// node's real-edge slots. An isolated node keeps its walker on slot 0.
Superposition<double> init_uniform_superposition(const Graph& g, std::size_t slot_dim = 0);

template <class T>
Superposition<T> to_scalar(const Superposition<double>& s);

template <class T>
Superposition<T> apply_coin(const Superposition<T>& s, const CoinSet<T>& coins, std::size_t step);

template <class T>
Superposition<T> apply_shift(const Superposition<T>& s, const ShiftPermutation& shift);

/// `steps` rounds of coin then shift. Throws when the graph exceeds
/// `node_budget` nodes.
template <class T>
Superposition<T> walk(const Superposition<T>& s0, const CoinSet<T>& coins, const ShiftPermutation& shift,
                      std::size_t steps, std::size_t node_budget = default_node_budget);

/// P(w, v) = sum_i |phi(w, v, i)|^2. No normalization.
template <class T>
Matrix diffusion_matrix(const Superposition<T>& s);

/// start * (D^-1 A)^steps.
Vector classical_walk_distribution(const Graph& g, const Vector& start, std::size_t steps);

}  // namespace qwalk
