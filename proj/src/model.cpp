#include "qwalk/model.hpp"

#include <cmath>
#include <random>

#include "qwalk/unitary.hpp"

namespace qwalk {

std::string to_string(DiffusionKind k) {
  switch (k) {
    case DiffusionKind::quantum_walk: return "qwnn";
    case DiffusionKind::dcnn: return "dcnn";
    case DiffusionKind::gcnn: return "gcnn";
  }
  return "?";
}

std::string to_string(Readout r) {
  switch (r) {
    case Readout::none: return "none";
    case Readout::sum: return "sum";
    case Readout::mean: return "mean";
    case Readout::flatten: return "flatten";
  }
  return "?";
}

DiffusionKind parse_diffusion_kind(const std::string& s) {
  if (s == "qwnn") return DiffusionKind::quantum_walk;
  if (s == "dcnn") return DiffusionKind::dcnn;
  if (s == "gcnn") return DiffusionKind::gcnn;
  throw std::invalid_argument("unknown model '" + s + "'");
}

Readout parse_readout(const std::string& s) {
  if (s == "none") return Readout::none;
  if (s == "sum") return Readout::sum;
  if (s == "mean") return Readout::mean;
  if (s == "flatten") return Readout::flatten;
  throw std::invalid_argument("unknown readout '" + s + "'");
}

PreparedGraph prepare_graph(const Graph& raw, const EdgeOrdering& ordering, std::size_t slot_dim,
                            std::vector<std::uint8_t> node_mask, DiffusionKind kind) {
  PreparedGraph out;
  const std::size_t d = slot_dim == 0 ? std::max<std::size_t>(1, raw.max_degree()) : slot_dim;
  if (d < raw.max_degree()) {
    throw std::invalid_argument("slot dimension " + std::to_string(d) + " is below the graph's max degree " +
                                std::to_string(raw.max_degree()));
  }
  if (node_mask.empty()) node_mask.assign(raw.num_nodes(), 1);
  if (node_mask.size() != raw.num_nodes()) throw std::invalid_argument("node mask length != node count");
  out.node_mask = std::move(node_mask);
  if (kind == DiffusionKind::quantum_walk) {
    out.graph = regularize_with_self_loops(order_edges(raw, ordering), d);
    out.shift = build_shift(out.graph, d);
    out.initial = init_uniform_superposition(out.graph, d);
  } else {
    out.graph = raw;
  }
  if (kind == DiffusionKind::dcnn) out.transition = masked_transition_matrix(out.graph, out.node_mask);
  if (kind == DiffusionKind::gcnn) out.gcn = gcn_operator(out.graph);
  return out;
}

namespace {

void glorot(std::vector<double>& w, std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& x : w) x = dist(rng);
}

Eigen::Map<const Matrix> as_matrix(const Parameter& p, std::size_t rows, std::size_t cols) {
  return {p.value.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)};
}

Eigen::Map<const Eigen::RowVectorXd> as_row(const Parameter& p) {
  return {p.value.data(), static_cast<Eigen::Index>(p.size())};
}

Eigen::Map<Eigen::RowVectorXd> grad_row(Parameter& p) { return {p.grad.data(), static_cast<Eigen::Index>(p.size())}; }

Eigen::Map<Matrix> grad_matrix(Parameter& p, std::size_t rows, std::size_t cols) {
  return {p.grad.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)};
}

std::size_t active_rows(const std::vector<std::uint8_t>& mask) {
  std::size_t n = 0;
  for (auto m : mask) n += m != 0;
  return n;
}

}  // namespace

ModelGraphNet::ModelGraphNet(ModelSpec spec, std::uint64_t seed, const PreparedGraph* reference)
    : spec_(std::move(spec)) {
  build(seed, reference);
}

std::size_t ModelGraphNet::coin_count() const {
  return spec_.walk.placement == CoinPlacement::spatial ? spec_.n_nodes : spec_.walk.steps;
}

void ModelGraphNet::build(std::uint64_t seed, const PreparedGraph* reference) {
  const ModelSpec& s = spec_;
  if (s.in_features == 0) throw std::invalid_argument("model needs at least one input feature");
  if (s.slot_dim == 0) throw std::invalid_argument("slot dimension must be >= 1");
  const bool bound_to_graph = s.diffusion == DiffusionKind::quantum_walk &&
                              (s.walk.learn_amplitudes || s.walk.placement == CoinPlacement::spatial);
  if ((bound_to_graph || s.readout == Readout::flatten) && s.n_nodes == 0) {
    throw std::invalid_argument("learned amplitudes, spatial coins and flatten readout need a fixed node count");
  }
  if (bound_to_graph) {
    if (!reference) throw std::invalid_argument("graph-bound walk parameters need a reference graph");
    if (reference->num_nodes() != s.n_nodes) throw std::invalid_argument("reference graph size != n_nodes");
  }
  if ((s.output_activation == Activation::softmax || s.rescale_output) && s.outputs == 0) {
    throw std::invalid_argument("softmax or rescaled outputs need a final dense layer");
  }
  if (s.rescale_output && s.output_activation != Activation::sigmoid) {
    throw std::invalid_argument("output rescaling applies to a sigmoid output");
  }
  if (s.hidden_activation == Activation::softmax || s.diffusion_activation == Activation::softmax) {
    throw std::invalid_argument("softmax is only valid on the output layer");
  }

  std::mt19937_64 rng(seed);
  const std::size_t f = s.in_features;
  const std::size_t d = s.slot_dim;

  switch (s.diffusion) {
    case DiffusionKind::quantum_walk: {
      const WalkSpec& w = s.walk;
      const std::size_t n = s.n_nodes;
      if (w.learn_amplitudes) {
        amp_re_ = params_.add("walk.amplitudes.re", {n, n, d}, true);
        const auto& init = reference->initial;
        if (init.slots() != d) throw std::invalid_argument("reference graph slot dimension mismatch");
        std::copy(init.data().begin(), init.data().end(), params_[amp_re_].value.begin());
        if (w.complex_amplitudes) amp_im_ = params_.add("walk.amplitudes.im", {n, n, d}, true);
      }
      const std::size_t k = coin_count();
      auto node_degree = [&](std::size_t c) {
        return w.placement == CoinPlacement::spatial ? reference->graph.degree(static_cast<NodeId>(c)) : d;
      };
      if (w.mode == CoinMode::unconstrained) {
        coin_re_ = params_.add("walk.coins.re", {k, d, d}, w.learn_coins);
        std::uniform_real_distribution<double> noise(-s.init_noise, s.init_noise);
        auto& vals = params_[coin_re_].value;
        for (std::size_t c = 0; c < k; ++c) {
          const std::size_t active = node_degree(c);
          Matrix coin = active == 0 ? Matrix::Identity(d, d) : embed_coin<double>(grover_coin(active), d);
          for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) {
              double x = coin(a, b);
              if (a < active && b < active) x += noise(rng);
              vals[(c * d + a) * d + b] = x;
            }
        }
        if (w.complex_amplitudes) coin_im_ = params_.add("walk.coins.im", {k, d, d}, w.learn_coins);
      } else if (w.mode == CoinMode::unitary) {
        const std::size_t m = UnitaryParams::rotation_count(d);
        coin_theta_ = params_.add("walk.coins.theta", {k, m}, w.learn_coins);
        coin_phi_ = params_.add("walk.coins.phi", {k, m}, w.learn_coins && w.complex_amplitudes);
        coin_phase_ = params_.add("walk.coins.phase", {k, d}, w.learn_coins && w.complex_amplitudes);
        for (std::size_t c = 0; c < k; ++c) {
          const std::size_t active = node_degree(c);
          if (active == 0) continue;
          const UnitaryParams p = decompose_orthogonal(grover_coin(active));
          std::copy(p.thetas.begin(), p.thetas.end(), params_[coin_theta_].value.begin() + c * m);
          std::copy(p.diag_phases.begin(), p.diag_phases.end(), params_[coin_phase_].value.begin() + c * d);
        }
      }
      diffusion_b_ = params_.add("walk.bias", {f}, true);
      diffusion_width_ = f;
      break;
    }
    case DiffusionKind::dcnn: {
      const std::size_t hops = s.dcnn_hops;
      diffusion_w_ = params_.add("dcnn.weights", {hops + 1, f}, true);
      glorot(params_[diffusion_w_].value, hops + 1, f, rng);
      diffusion_width_ = (hops + 1) * f;
      break;
    }
    case DiffusionKind::gcnn: {
      const std::size_t out = s.gcnn_out_features == 0 ? f : s.gcnn_out_features;
      diffusion_w_ = params_.add("gcnn.weights", {f, out}, true);
      glorot(params_[diffusion_w_].value, f, out, rng);
      if (s.gcnn_bias) diffusion_b_ = params_.add("gcnn.bias", {out}, true);
      diffusion_width_ = out;
      break;
    }
  }

  readout_width_ = s.readout == Readout::flatten ? s.n_nodes * diffusion_width_ : diffusion_width_;

  std::size_t in = readout_width_;
  auto add_dense = [&](std::size_t out, Activation act) {
    const std::size_t idx = dense_.size();
    Dense layer{params_.add("dense" + std::to_string(idx) + ".weights", {in, out}, true),
                params_.add("dense" + std::to_string(idx) + ".bias", {out}, true), in, out, act};
    glorot(params_[layer.weights].value, in, out, rng);
    dense_.push_back(layer);
    in = out;
  };
  for (std::size_t h : s.hidden) {
    if (h == 0) throw std::invalid_argument("hidden layer width must be positive");
    add_dense(h, s.hidden_activation);
  }
  if (s.outputs > 0) add_dense(s.outputs, s.output_activation);

  if (s.rescale_output) {
    range_ = params_.add("output.range", {2}, false);
    params_[range_].value = {0.0, 1.0};
  }
}

std::size_t ModelGraphNet::output_width() const { return dense_.empty() ? readout_width_ : dense_.back().out; }

void ModelGraphNet::set_output_range(double lo, double hi) {
  if (range_ == none) throw std::logic_error("model has no output rescaling");
  params_[range_].value = {lo, hi};
}

void ModelGraphNet::check_graph(const PreparedGraph& g, const Matrix& x) const {
  const std::size_t n = g.num_nodes();
  if (static_cast<std::size_t>(x.rows()) != n) {
    throw std::invalid_argument("feature matrix has " + std::to_string(x.rows()) + " rows for a graph of " +
                                std::to_string(n) + " nodes");
  }
  if (static_cast<std::size_t>(x.cols()) != spec_.in_features) {
    throw std::invalid_argument("feature matrix has " + std::to_string(x.cols()) + " columns, model expects " +
                                std::to_string(spec_.in_features));
  }
  if (g.node_mask.size() != n) throw std::invalid_argument("prepared graph has no node mask");
  const bool fixed_size = spec_.readout == Readout::flatten ||
                          (spec_.diffusion == DiffusionKind::quantum_walk &&
                           (spec_.walk.learn_amplitudes || spec_.walk.placement == CoinPlacement::spatial));
  if (fixed_size && n != spec_.n_nodes) {
    throw std::invalid_argument("model is bound to " + std::to_string(spec_.n_nodes) + " nodes, graph has " +
                                std::to_string(n));
  }
  if (spec_.diffusion == DiffusionKind::quantum_walk && g.shift.slots() != spec_.slot_dim) {
    throw std::invalid_argument("graph prepared with " + std::to_string(g.shift.slots()) +
                                " slots, model expects " + std::to_string(spec_.slot_dim));
  }
  if (spec_.diffusion == DiffusionKind::dcnn && static_cast<std::size_t>(g.transition.rows()) != n) {
    throw std::invalid_argument("graph was not prepared for a DCNN layer");
  }
  if (spec_.diffusion == DiffusionKind::gcnn && static_cast<std::size_t>(g.gcn.rows()) != n) {
    throw std::invalid_argument("graph was not prepared for a GCNN layer");
  }
}

template <class T>
Superposition<T> ModelGraphNet::initial_state(const PreparedGraph& g) const {
  if (amp_re_ == none) return to_scalar<T>(g.initial);
  const std::size_t n = spec_.n_nodes, d = spec_.slot_dim;
  Superposition<T> s(n, n, d);
  const auto& re = params_[amp_re_].value;
  auto out = s.data();
  for (std::size_t k = 0; k < out.size(); ++k) {
    if constexpr (is_complex<T>::value) {
      out[k] = T(re[k], amp_im_ == none ? 0.0 : params_[amp_im_].value[k]);
    } else {
      out[k] = re[k];
    }
  }
  return s;
}

template <class T>
std::vector<MatrixT<T>> ModelGraphNet::build_coins(const PreparedGraph& g) const {
  const WalkSpec& w = spec_.walk;
  const std::size_t d = spec_.slot_dim;
  const std::size_t k = w.placement == CoinPlacement::spatial ? g.num_nodes() : w.steps;
  auto active_of = [&](std::size_t c) {
    return w.placement == CoinPlacement::spatial ? g.graph.degree(static_cast<NodeId>(c)) : d;
  };
  std::vector<MatrixT<T>> coins;
  coins.reserve(k);
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t active = active_of(c);
    MatrixT<T> coin = MatrixT<T>::Identity(d, d);
    switch (w.mode) {
      case CoinMode::fixed_grover:
        if (active > 0) coin.topLeftCorner(active, active) = grover_coin(active).cast<T>();
        break;
      case CoinMode::unconstrained: {
        const auto& re = params_[coin_re_].value;
        for (std::size_t a = 0; a < active; ++a)
          for (std::size_t b = 0; b < active; ++b) {
            const std::size_t idx = (c * d + a) * d + b;
            if constexpr (is_complex<T>::value) {
              coin(a, b) = T(re[idx], coin_im_ == none ? 0.0 : params_[coin_im_].value[idx]);
            } else {
              coin(a, b) = re[idx];
            }
          }
        break;
      }
      case CoinMode::unitary: {
        const std::size_t m = UnitaryParams::rotation_count(d);
        UnitaryParams p(d);
        const auto& th = params_[coin_theta_].value;
        const auto& ph = params_[coin_phi_].value;
        const auto& ps = params_[coin_phase_].value;
        std::copy(th.begin() + c * m, th.begin() + (c + 1) * m, p.thetas.begin());
        std::copy(ps.begin() + c * d, ps.begin() + (c + 1) * d, p.diag_phases.begin());
        if constexpr (is_complex<T>::value) std::copy(ph.begin() + c * m, ph.begin() + (c + 1) * m, p.phis.begin());
        coin = unitary_from_params<T>(p, active);
        break;
      }
    }
    coins.push_back(std::move(coin));
  }
  return coins;
}

template <class T>
Matrix ModelGraphNet::walk_forward(const PreparedGraph& g, Tape::WalkStates<T>* states) const {
  if (g.num_nodes() > default_node_budget) {
    throw std::length_error("graph has " + std::to_string(g.num_nodes()) + " nodes, above the walk budget of " +
                            std::to_string(default_node_budget));
  }
  CoinSet<T> coins{spec_.walk.placement, spec_.walk.mode, build_coins<T>(g)};
  Superposition<T> phi = initial_state<T>(g);
  if (states) states->states.push_back(phi);
  for (std::size_t t = 0; t < spec_.walk.steps; ++t) {
    phi = apply_shift(apply_coin(phi, coins, t), g.shift);
    if (states) states->states.push_back(phi);
  }
  if (states) states->coins = std::move(coins.coins);
  return diffusion_matrix(phi);
}

template <class T>
void ModelGraphNet::walk_backward(const PreparedGraph& g, const Tape::WalkStates<T>& states, const Matrix& grad_p) {
  const WalkSpec& w = spec_.walk;
  const bool coins_trainable = (coin_re_ != none && params_[coin_re_].trainable) ||
                               (coin_theta_ != none && params_[coin_theta_].trainable);
  const bool amps_trainable = amp_re_ != none && params_[amp_re_].trainable;
  if (!coins_trainable && !amps_trainable) return;

  const std::size_t d = spec_.slot_dim;
  const Superposition<T>& last = states.states.back();
  const std::size_t nw = last.walkers(), nn = last.nodes();

  Superposition<T> grad(nw, nn, d);
  for (std::size_t a = 0; a < nw; ++a)
    for (std::size_t v = 0; v < nn; ++v) {
      const double gp = 2.0 * grad_p(a, v);
      for (std::size_t i = 0; i < d; ++i) grad(a, v, i) = gp * last(a, v, i);
    }

  std::vector<MatrixT<T>> grad_coins(states.coins.size(), MatrixT<T>::Zero(d, d));
  std::vector<T> g_in(d);
  for (std::size_t t = w.steps; t-- > 0;) {
    const Superposition<T> g_mixed = apply_shift(grad, g.shift);
    const Superposition<T>& before = states.states[t];
    for (std::size_t a = 0; a < nw; ++a) {
      for (std::size_t v = 0; v < nn; ++v) {
        const std::size_t ci = w.placement == CoinPlacement::spatial ? v : t;
        const MatrixT<T>& c = states.coins[ci];
        const T* go = &g_mixed(a, v, 0);
        const T* in = &before(a, v, 0);
        if (coins_trainable) {
          MatrixT<T>& gc = grad_coins[ci];
          for (std::size_t k = 0; k < d; ++k) {
            const T ink = conj(in[k]);
            if (ink == T(0)) continue;
            for (std::size_t j = 0; j < d; ++j) gc(k, j) += ink * go[j];
          }
        }
        for (std::size_t k = 0; k < d; ++k) {
          T acc = T(0);
          for (std::size_t j = 0; j < d; ++j) acc += go[j] * conj(c(k, j));
          g_in[k] = acc;
        }
        for (std::size_t k = 0; k < d; ++k) grad(a, v, k) = g_in[k];
      }
    }
  }

  if (amps_trainable) {
    auto& gre = params_[amp_re_].grad;
    auto src = grad.data();
    for (std::size_t k = 0; k < src.size(); ++k) gre[k] += real_part(src[k]);
    if (amp_im_ != none && params_[amp_im_].trainable) {
      auto& gim = params_[amp_im_].grad;
      for (std::size_t k = 0; k < src.size(); ++k) gim[k] += imag_part(src[k]);
    }
  }
  if (!coins_trainable) return;

  auto active_of = [&](std::size_t c) {
    return w.placement == CoinPlacement::spatial ? g.graph.degree(static_cast<NodeId>(c)) : d;
  };
  if (w.mode == CoinMode::unconstrained) {
    auto& gre = params_[coin_re_].grad;
    double* gim = coin_im_ != none && params_[coin_im_].trainable ? params_[coin_im_].grad.data() : nullptr;
    for (std::size_t c = 0; c < grad_coins.size(); ++c) {
      const std::size_t active = active_of(c);
      for (std::size_t a = 0; a < active; ++a)
        for (std::size_t b = 0; b < active; ++b) {
          const std::size_t idx = (c * d + a) * d + b;
          gre[idx] += real_part(grad_coins[c](a, b));
          if (gim) gim[idx] += imag_part(grad_coins[c](a, b));
        }
    }
  } else if (w.mode == CoinMode::unitary) {
    const std::size_t m = UnitaryParams::rotation_count(d);
    Parameter& th = params_[coin_theta_];
    Parameter& ph = params_[coin_phi_];
    Parameter& ps = params_[coin_phase_];
    for (std::size_t c = 0; c < grad_coins.size(); ++c) {
      UnitaryParams p(d);
      std::copy(th.value.begin() + c * m, th.value.begin() + (c + 1) * m, p.thetas.begin());
      std::copy(ps.value.begin() + c * d, ps.value.begin() + (c + 1) * d, p.diag_phases.begin());
      if constexpr (is_complex<T>::value) {
        std::copy(ph.value.begin() + c * m, ph.value.begin() + (c + 1) * m, p.phis.begin());
      }
      const UnitaryGradient ug = unitary_param_gradient<T>(p, active_of(c), grad_coins[c]);
      for (std::size_t j = 0; j < m; ++j) th.grad[c * m + j] += ug.thetas[j];
      if (ph.trainable)
        for (std::size_t j = 0; j < m; ++j) ph.grad[c * m + j] += ug.phis[j];
      if (ps.trainable)
        for (std::size_t j = 0; j < d; ++j) ps.grad[c * d + j] += ug.diag_phases[j];
    }
  }
}

Matrix ModelGraphNet::diffusion_operator(const PreparedGraph& g) const {
  if (spec_.diffusion != DiffusionKind::quantum_walk) throw std::logic_error("not a quantum walk model");
  if (spec_.walk.complex_amplitudes) return walk_forward<Complex>(g, nullptr);
  return walk_forward<double>(g, nullptr);
}

std::vector<ComplexMatrix> ModelGraphNet::coin_matrices(const PreparedGraph& g) const {
  if (spec_.diffusion != DiffusionKind::quantum_walk) throw std::logic_error("not a quantum walk model");
  return build_coins<Complex>(g);
}

Matrix ModelGraphNet::forward(const PreparedGraph& g, const Matrix& x, Tape* tape) const {
  return forward(g, std::span<const Matrix>(&x, 1), tape).front();
}

std::vector<Matrix> ModelGraphNet::forward(const PreparedGraph& g, std::span<const Matrix> xs, Tape* tape) const {
  for (const Matrix& x : xs) check_graph(g, x);
  if (tape) {
    *tape = Tape{};
    tape->graph = &g;
  }

  Matrix p;
  if (spec_.diffusion == DiffusionKind::quantum_walk) {
    const bool keep_states = tape != nullptr;
    if (spec_.walk.complex_amplitudes) {
      Tape::WalkStates<Complex> states;
      p = walk_forward<Complex>(g, keep_states ? &states : nullptr);
      if (tape) tape->walk = std::move(states);
    } else {
      Tape::WalkStates<double> states;
      p = walk_forward<double>(g, keep_states ? &states : nullptr);
      if (tape) tape->walk = std::move(states);
    }
    if (tape) tape->diffusion = p;
  }

  const std::size_t n = g.num_nodes();
  const std::size_t active = active_rows(g.node_mask);
  std::vector<Matrix> outputs;
  outputs.reserve(xs.size());
  for (const Matrix& x : xs) {
    Tape::SampleRecord rec;
    switch (spec_.diffusion) {
      case DiffusionKind::quantum_walk: {
        rec.diffused = p * x;
        rec.pre = rec.diffused;
        rec.pre.rowwise() += as_row(params_[diffusion_b_]);
        break;
      }
      case DiffusionKind::dcnn: {
        rec.diffused = diffusion_stack(g.transition, x, spec_.dcnn_hops);
        const Eigen::Map<const Eigen::RowVectorXd> w(params_[diffusion_w_].value.data(), rec.diffused.cols());
        rec.pre = rec.diffused.array().rowwise() * w.array();
        break;
      }
      case DiffusionKind::gcnn: {
        rec.diffused = g.gcn * x;
        rec.pre = rec.diffused * as_matrix(params_[diffusion_w_], spec_.in_features, diffusion_width_);
        if (diffusion_b_ != none) rec.pre.rowwise() += as_row(params_[diffusion_b_]);
        break;
      }
    }
    rec.post = activate(spec_.diffusion_activation, rec.pre);

    switch (spec_.readout) {
      case Readout::none: rec.readout = rec.post; break;
      case Readout::sum:
      case Readout::mean: {
        Matrix r = Matrix::Zero(1, rec.post.cols());
        for (std::size_t v = 0; v < n; ++v)
          if (g.node_mask[v]) r += rec.post.row(v);
        if (spec_.readout == Readout::mean && active > 0) r /= static_cast<double>(active);
        rec.readout = r;
        break;
      }
      case Readout::flatten: {
        Matrix r = rec.post;
        for (std::size_t v = 0; v < n; ++v)
          if (!g.node_mask[v]) r.row(v).setZero();
        rec.readout = Eigen::Map<const Matrix>(r.data(), 1, r.size());
        break;
      }
    }

    Matrix cur = rec.readout;
    for (const Dense& layer : dense_) {
      rec.dense_in.push_back(cur);
      Matrix z = cur * as_matrix(params_[layer.weights], layer.in, layer.out);
      z.rowwise() += as_row(params_[layer.bias]);
      Matrix y = layer.activation == Activation::softmax ? z : activate(layer.activation, z);
      rec.dense_pre.push_back(z);
      rec.dense_post.push_back(y);
      cur = std::move(y);
    }
    if (range_ != none) {
      const auto& r = params_[range_].value;
      cur = (r[0] + (r[1] - r[0]) * cur.array()).matrix();
    }
    outputs.push_back(cur);
    if (tape) {
      rec.input = x;
      tape->samples.push_back(std::move(rec));
    }
  }
  if (tape) tape->recorded = true;
  return outputs;
}

void ModelGraphNet::backward(const Tape& tape, const Matrix& grad_output) {
  backward(tape, std::span<const Matrix>(&grad_output, 1));
}

void ModelGraphNet::backward(const Tape& tape, std::span<const Matrix> grad_outputs) {
  if (!tape.recorded || !tape.graph) throw std::logic_error("backward called before a recorded forward pass");
  if (grad_outputs.size() != tape.samples.size()) {
    throw std::invalid_argument("backward needs one output gradient per recorded sample");
  }
  const PreparedGraph& g = *tape.graph;
  const std::size_t n = g.num_nodes();
  const std::size_t active = active_rows(g.node_mask);
  Matrix grad_p;
  if (spec_.diffusion == DiffusionKind::quantum_walk) grad_p = Matrix::Zero(n, n);

  for (std::size_t s = 0; s < tape.samples.size(); ++s) {
    const Tape::SampleRecord& rec = tape.samples[s];
    Matrix grad = grad_outputs[s];
    if (range_ != none) {
      const auto& r = params_[range_].value;
      grad *= (r[1] - r[0]);
    }
    for (std::size_t li = dense_.size(); li-- > 0;) {
      const Dense& layer = dense_[li];
      const Matrix gz = layer.activation == Activation::softmax
                            ? grad
                            : activation_backward(layer.activation, rec.dense_pre[li], rec.dense_post[li], grad);
      grad_matrix(params_[layer.weights], layer.in, layer.out) += rec.dense_in[li].transpose() * gz;
      grad_row(params_[layer.bias]) += gz.colwise().sum();
      grad = gz * as_matrix(params_[layer.weights], layer.in, layer.out).transpose();
    }

    Matrix grad_post(n, rec.post.cols());
    switch (spec_.readout) {
      case Readout::none: grad_post = grad; break;
      case Readout::sum:
      case Readout::mean: {
        const double scale = spec_.readout == Readout::mean && active > 0 ? 1.0 / static_cast<double>(active) : 1.0;
        for (std::size_t v = 0; v < n; ++v) {
          if (g.node_mask[v]) grad_post.row(v) = grad.row(0) * scale;
          else grad_post.row(v).setZero();
        }
        break;
      }
      case Readout::flatten: {
        grad_post = Eigen::Map<const Matrix>(grad.data(), static_cast<Eigen::Index>(n), rec.post.cols());
        for (std::size_t v = 0; v < n; ++v)
          if (!g.node_mask[v]) grad_post.row(v).setZero();
        break;
      }
    }

    const Matrix grad_pre = activation_backward(spec_.diffusion_activation, rec.pre, rec.post, grad_post);
    switch (spec_.diffusion) {
      case DiffusionKind::quantum_walk:
        grad_row(params_[diffusion_b_]) += grad_pre.colwise().sum();
        grad_p += grad_pre * rec.input.transpose();
        break;
      case DiffusionKind::dcnn: {
        const Eigen::RowVectorXd gw = rec.diffused.cwiseProduct(grad_pre).colwise().sum();
        auto& pw = params_[diffusion_w_].grad;
        for (Eigen::Index k = 0; k < gw.size(); ++k) pw[static_cast<std::size_t>(k)] += gw[k];
        break;
      }
      case DiffusionKind::gcnn:
        grad_matrix(params_[diffusion_w_], spec_.in_features, diffusion_width_) += rec.diffused.transpose() * grad_pre;
        if (diffusion_b_ != none) grad_row(params_[diffusion_b_]) += grad_pre.colwise().sum();
        break;
    }
  }

  if (spec_.diffusion == DiffusionKind::quantum_walk) {
    if (const auto* states = std::get_if<Tape::WalkStates<double>>(&tape.walk)) {
      walk_backward<double>(g, *states, grad_p);
    } else if (const auto* cstates = std::get_if<Tape::WalkStates<Complex>>(&tape.walk)) {
      walk_backward<Complex>(g, *cstates, grad_p);
    }
  }
}

}  // namespace qwalk
