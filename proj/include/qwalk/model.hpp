#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qwalk/baselines.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/parameters.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

enum class DiffusionKind { quantum_walk, dcnn, gcnn };
enum class Readout { none, sum, mean, flatten };

std::string to_string(DiffusionKind k);
std::string to_string(Readout r);
DiffusionKind parse_diffusion_kind(const std::string& s);
Readout parse_readout(const std::string& s);

/// A graph ready for the model: edges ordered, padded to the model's slot
/// dimension with self-loops, shift built, baseline operators cached.
struct PreparedGraph {
  Graph graph;
  ShiftPermutation shift;
  std::vector<std::uint8_t> node_mask;  // 1 = real node, 0 = batch padding
  Superposition<double> initial;        // uniform-spin start state
  Matrix transition;                    // DCNN only
  Matrix gcn;                           // GCNN only

  std::size_t num_nodes() const { return graph.num_nodes(); }
};

/// `node_mask` may be empty (all nodes real).
PreparedGraph prepare_graph(const Graph& raw, const EdgeOrdering& ordering, std::size_t slot_dim,
                            std::vector<std::uint8_t> node_mask, DiffusionKind kind);

struct WalkSpec {
  std::size_t steps = 0;
  CoinPlacement placement = CoinPlacement::temporal;
  CoinMode mode = CoinMode::fixed_grover;
  bool learn_amplitudes = false;
  bool learn_coins = true;
  bool complex_amplitudes = false;
};

struct ModelSpec {
  DiffusionKind diffusion = DiffusionKind::quantum_walk;
  WalkSpec walk;
  std::size_t dcnn_hops = 0;
  std::size_t gcnn_out_features = 0;  // 0: same as input
  bool gcnn_bias = true;
  Activation diffusion_activation = Activation::identity;

  Readout readout = Readout::none;
  std::vector<std::size_t> hidden;
  Activation hidden_activation = Activation::relu;
  /// Width of the final dense layer; 0 means the diffusion/readout output
  /// is the prediction.
  std::size_t outputs = 0;
  /// Softmax outputs are returned as logits; the loss applies the softmax.
  Activation output_activation = Activation::identity;
  /// Maps a sigmoid output onto [lo, hi] stored in `output.range`.
  bool rescale_output = false;

  // Data-dependent shape.
  std::size_t n_nodes = 0;  // required for learned amplitudes, spatial coins and flatten readout
  std::size_t slot_dim = 1;
  std::size_t in_features = 0;
  double init_noise = 0.01;  // unconstrained coins start at Grover + U(-noise, noise)
};

/// Intermediates of one forward pass over a group of feature matrices that
/// share a graph.
struct Tape {
  template <class T>
  struct WalkStates {
    std::vector<Superposition<T>> states;  // phi^(0) .. phi^(T)
    std::vector<MatrixT<T>> coins;
  };
  struct SampleRecord {
    Matrix input;
    Matrix diffused;  // P X (walk), P* X (dcnn) or A X (gcnn)
    Matrix pre, post;
    Matrix readout;
    std::vector<Matrix> dense_in, dense_pre, dense_post;
  };

  bool recorded = false;
  const PreparedGraph* graph = nullptr;
  std::variant<std::monostate, WalkStates<double>, WalkStates<Complex>> walk;
  Matrix diffusion;  // P
  std::vector<SampleRecord> samples;
};

/// Quantum-walk (or baseline) diffusion layer followed by an optional
/// readout and dense head, with hand-written reverse-mode gradients.
class ModelGraphNet {
 public:
  /// `reference` supplies node degrees for graph-bound parameters (learned
  /// amplitudes, spatial coins) and is required when either is configured.
  ModelGraphNet(ModelSpec spec, std::uint64_t seed, const PreparedGraph* reference = nullptr);

  const ModelSpec& spec() const { return spec_; }
  ParameterSet& parameters() { return params_; }
  const ParameterSet& parameters() const { return params_; }

  /// One output matrix per feature matrix; rows are nodes, or a single row
  /// after a graph readout.
  std::vector<Matrix> forward(const PreparedGraph& g, std::span<const Matrix> xs, Tape* tape = nullptr) const;
  Matrix forward(const PreparedGraph& g, const Matrix& x, Tape* tape = nullptr) const;

  /// Accumulates parameter gradients given dL/d(output) for each sample on
  /// the tape.
  void backward(const Tape& tape, std::span<const Matrix> grad_outputs);
  void backward(const Tape& tape, const Matrix& grad_output);

  void zero_grad() { params_.zero_grad(); }
  void set_output_range(double lo, double hi);

  /// Diffusion matrix P for a graph (quantum walk models only).
  Matrix diffusion_operator(const PreparedGraph& g) const;
  /// Coins as currently parametrized; spatial coins need the graph degrees.
  std::vector<ComplexMatrix> coin_matrices(const PreparedGraph& g) const;

  std::size_t output_width() const;

 private:
  struct Dense {
    std::size_t weights, bias;
    std::size_t in, out;
    Activation activation;
  };

  void build(std::uint64_t seed, const PreparedGraph* reference);
  void check_graph(const PreparedGraph& g, const Matrix& x) const;
  std::size_t coin_count() const;

  template <class T>
  Matrix walk_forward(const PreparedGraph& g, Tape::WalkStates<T>* states) const;
  template <class T>
  void walk_backward(const PreparedGraph& g, const Tape::WalkStates<T>& states, const Matrix& grad_p);
  template <class T>
  std::vector<MatrixT<T>> build_coins(const PreparedGraph& g) const;
  template <class T>
  Superposition<T> initial_state(const PreparedGraph& g) const;

  ModelSpec spec_;
  ParameterSet params_;
  static constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::size_t amp_re_ = none, amp_im_ = none;
  std::size_t coin_re_ = none, coin_im_ = none;
  std::size_t coin_theta_ = none, coin_phi_ = none, coin_phase_ = none;
  std::size_t diffusion_w_ = none, diffusion_b_ = none;
  std::size_t range_ = none;
  std::vector<Dense> dense_;
  std::size_t diffusion_width_ = 0;  // columns after the diffusion layer
  std::size_t readout_width_ = 0;
};

}  // namespace qwalk
