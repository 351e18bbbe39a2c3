#include "qwalk/inspect.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "qwalk/walk.hpp"

namespace qwalk {

InspectCoin parse_inspect_coin(const std::string& s) {
  if (s == "grover") return InspectCoin::grover;
  if (s == "hadamard") return InspectCoin::hadamard;
  if (s == "swap") return InspectCoin::swap;
  throw ConfigError("coin must be grover, hadamard or swap (got '" + s + "')");
}

StartState parse_start_state(const std::string& s) {
  if (s == "uniform") return StartState::uniform;
  if (s == "symmetric") return StartState::symmetric;
  throw ConfigError("start state must be uniform or symmetric (got '" + s + "')");
}

namespace {

std::size_t parse_size(const std::string& s, const std::string& source) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw ConfigError("bad graph size in '" + source + "'");
  return v;
}

}  // namespace

Graph parse_graph_source(const std::string& source) {
  const auto colon = source.find(':');
  if (colon == std::string::npos) throw ConfigError("graph source '" + source + "' needs a kind:argument form");
  const std::string kind = source.substr(0, colon), arg = source.substr(colon + 1);
  if (kind == "file") return read_edge_list_file(arg);
  if (kind == "lattice") {
    const auto x = arg.find('x');
    if (x == std::string::npos) throw ConfigError("lattice source must be lattice:RxC");
    return lattice_graph(parse_size(arg.substr(0, x), source), parse_size(arg.substr(x + 1), source));
  }
  const std::size_t n = parse_size(arg, source);
  try {
    if (kind == "cycle") return cycle_graph(n);
    if (kind == "path") return path_graph(n);
    if (kind == "complete") return complete_graph(n);
    if (kind == "star") return star_graph(n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source + ": " + e.what());
  }
  throw ConfigError("unknown graph kind '" + kind + "'");
}

namespace {

template <class T>
WalkTrace run_trace(const Graph& raw, const Graph& g, const CoinSet<double>& real_coins, const ShiftPermutation& shift,
                    Superposition<T> s, std::size_t start, std::size_t steps) {
  CoinSet<T> coins{real_coins.placement, real_coins.mode, {}};
  for (const Matrix& c : real_coins.coins) coins.coins.push_back(c.cast<T>());
  WalkTrace out;
  Vector p0 = Vector::Zero(static_cast<Eigen::Index>(g.num_nodes()));
  p0[static_cast<Eigen::Index>(start)] = 1.0;
  for (std::size_t t = 0;; ++t) {
    out.quantum.push_back(diffusion_matrix(s).row(static_cast<Eigen::Index>(start)).transpose());
    out.classical.push_back(classical_walk_distribution(raw, p0, t));
    if (t == steps) break;
    s = apply_shift(apply_coin(s, coins, t), shift);
  }
  out.diffusion = diffusion_matrix(s);
  return out;
}

}  // namespace

WalkTrace trace_walk(const Graph& raw, InspectCoin coin, std::size_t start, std::size_t steps, StartState state) {
  const std::size_t n = raw.num_nodes();
  if (start >= n) throw ConfigError("start node " + std::to_string(start) + " outside a " + std::to_string(n) + "-node graph");
  CoinSet<double> coins;
  std::size_t d = std::max<std::size_t>(1, raw.max_degree());
  if (coin == InspectCoin::grover) {
    coins = spatial_grover_coins(raw, d);
  } else {
    if (raw.max_degree() > 2) throw ConfigError("hadamard and swap coins need max degree <= 2");
    d = 2;
    Matrix c = coin == InspectCoin::hadamard ? hadamard_coin() : Matrix{{0.0, 1.0}, {1.0, 0.0}};
    coins = temporal_coins<double>(c, std::max<std::size_t>(steps, 1));
  }
  const Graph g = regularize_with_self_loops(raw, d);
  const ShiftPermutation shift = build_shift(g, d);
  const Superposition<double> uniform = init_uniform_superposition(g, d);
  if (state == StartState::uniform) return run_trace(raw, g, coins, shift, uniform, start, steps);

  if (raw.degree(static_cast<NodeId>(start)) != 2) throw ConfigError("symmetric start needs a degree-2 start node");
  // only the start walker is symmetric; the others keep the uniform state
  Superposition<Complex> s = to_scalar<Complex>(uniform);
  s(start, start, 0) = Complex(1.0 / std::sqrt(2.0), 0.0);
  s(start, start, 1) = Complex(0.0, 1.0 / std::sqrt(2.0));
  return run_trace(raw, g, coins, shift, std::move(s), start, steps);
}

void write_marginals_csv(std::ostream& os, const WalkTrace& t) {
  os << "step,node,classical,quantum\n";
  os.precision(17);
  for (std::size_t k = 0; k < t.quantum.size(); ++k) {
    for (Eigen::Index v = 0; v < t.quantum[k].size(); ++v) {
      os << k << ',' << v << ',' << t.classical[k][v] << ',' << t.quantum[k][v] << '\n';
    }
  }
}

void write_diffusion_csv(std::ostream& os, const Matrix& p) {
  os << "walker,node,value\n";
  os.precision(17);
  for (Eigen::Index w = 0; w < p.rows(); ++w)
    for (Eigen::Index v = 0; v < p.cols(); ++v) os << w << ',' << v << ',' << p(w, v) << '\n';
}

double cycle_position_std(const Vector& p, std::size_t origin) {
  const long n = static_cast<long>(p.size());
  double m1 = 0.0, m2 = 0.0, mass = 0.0;
  for (long v = 0; v < n; ++v) {
    long x = ((v - static_cast<long>(origin)) % n + n) % n;
    if (x > n / 2) x -= n;
    m1 += p[v] * static_cast<double>(x);
    m2 += p[v] * static_cast<double>(x * x);
    mass += p[v];
  }
  m1 /= mass;
  return std::sqrt(std::max(0.0, m2 / mass - m1 * m1));
}

double total_variation(const Vector& a, const Vector& b) { return 0.5 * (a - b).cwiseAbs().sum(); }

}  // namespace qwalk
