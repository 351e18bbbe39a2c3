#include "qwalk/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <unordered_set>

namespace qwalk {

namespace {

std::uint64_t edge_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

Graph Graph::from_edges(std::size_t n_nodes, std::span<const Edge> edges) {
  Graph g;
  g.slots_.resize(n_nodes);
  g.degree_.assign(n_nodes, 0);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges.size() * 2);
  for (const Edge& e : edges) {
    if (e.u >= n_nodes || e.v >= n_nodes) {
      throw std::invalid_argument("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                  ") references a node outside [0, " + std::to_string(n_nodes) + ")");
    }
    if (e.u == e.v) {
      throw std::invalid_argument("self-loop at node " + std::to_string(e.u) + " in input edge list");
    }
    if (!seen.insert(edge_key(e.u, e.v)).second) {
      throw std::invalid_argument("duplicate edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
    }
    auto& su = g.slots_[e.u];
    auto& sv = g.slots_[e.v];
    su.push_back({e.v, static_cast<std::uint32_t>(sv.size())});
    sv.push_back({e.u, static_cast<std::uint32_t>(su.size() - 1)});
  }
  g.finalize();
  return g;
}

Graph Graph::from_neighbor_lists(const std::vector<std::vector<NodeId>>& lists) {
  const std::size_t n = lists.size();
  Graph g;
  g.slots_.resize(n);
  g.degree_.assign(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    std::unordered_set<NodeId> local;
    for (NodeId u : lists[v]) {
      if (u >= n) throw std::invalid_argument("neighbor " + std::to_string(u) + " of node " + std::to_string(v) + " out of range");
      if (u == v) throw std::invalid_argument("self-loop at node " + std::to_string(v) + " in neighbor lists");
      if (!local.insert(u).second) {
        throw std::invalid_argument("node " + std::to_string(u) + " listed twice as neighbor of " + std::to_string(v));
      }
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (NodeId u : lists[v]) {
      const auto& back_list = lists[u];
      auto it = std::find(back_list.begin(), back_list.end(), static_cast<NodeId>(v));
      if (it == back_list.end()) {
        throw std::invalid_argument("asymmetric neighbor lists: " + std::to_string(u) + " lists no edge back to " +
                                    std::to_string(v));
      }
      g.slots_[v].push_back({u, static_cast<std::uint32_t>(it - back_list.begin())});
    }
  }
  g.finalize();
  return g;
}

void Graph::finalize() {
  std::size_t half_edges = 0;
  max_degree_ = 0;
  for (std::size_t v = 0; v < slots_.size(); ++v) {
    std::uint32_t real = 0;
    for (const Slot& s : slots_[v]) {
      if (s.target != v) ++real;
    }
    degree_[v] = real;
    half_edges += real;
    max_degree_ = std::max<std::size_t>(max_degree_, real);
  }
  n_edges_ = half_edges / 2;
}

std::size_t Graph::slot_dim() const {
  std::size_t d = 1;
  for (const auto& s : slots_) d = std::max(d, s.size());
  return d;
}

std::vector<NodeId> Graph::neighbors(NodeId v) const {
  std::vector<NodeId> out;
  const auto& s = slots_.at(v);
  out.reserve(degree_[v]);
  for (std::size_t i = 0; i < degree_[v]; ++i) out.push_back(s[i].target);
  return out;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(n_edges_);
  for (NodeId v = 0; v < slots_.size(); ++v) {
    for (std::size_t i = 0; i < degree_[v]; ++i) {
      NodeId u = slots_[v][i].target;
      if (v < u) out.push_back({v, u});
    }
  }
  std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  return out;
}

std::vector<std::size_t> Graph::components() const {
  const std::size_t n = num_nodes();
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> comp(n, unset);
  std::vector<NodeId> stack;
  std::size_t next = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] != unset) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (std::size_t i = 0; i < degree_[v]; ++i) {
        NodeId u = slots_[v][i].target;
        if (comp[u] == unset) {
          comp[u] = next;
          stack.push_back(u);
        }
      }
    }
    ++next;
  }
  return comp;
}

bool Graph::connected() const {
  auto comp = components();
  return std::all_of(comp.begin(), comp.end(), [](std::size_t c) { return c == 0; });
}

Graph regularize_with_self_loops(const Graph& g, std::size_t slot_dim) {
  if (slot_dim == 0) slot_dim = g.max_degree();
  Graph out = g;
  for (NodeId v = 0; v < out.num_nodes(); ++v) {
    auto& s = out.slots_[v];
    if (s.size() > slot_dim) {
      throw std::invalid_argument("node " + std::to_string(v) + " already has " + std::to_string(s.size()) +
                                  " slots, more than the requested " + std::to_string(slot_dim));
    }
    while (s.size() < slot_dim) s.push_back({v, static_cast<std::uint32_t>(s.size())});
  }
  return out;
}

ShiftPermutation::ShiftPermutation(std::size_t n_nodes, std::size_t slots, std::vector<std::uint32_t> image)
    : n_nodes_(n_nodes), slots_(slots), image_(std::move(image)) {
  if (image_.size() != n_nodes_ * slots_) throw std::invalid_argument("shift image has wrong size");
  for (std::size_t k = 0; k < image_.size(); ++k) {
    if (image_[k] >= image_.size() || image_[image_[k]] != k) {
      throw std::invalid_argument("shift permutation is not an involution at index " + std::to_string(k));
    }
  }
}

SlotRef ShiftPermutation::operator()(SlotRef s) const {
  std::size_t img = image_.at(s.node * slots_ + s.slot);
  return {static_cast<NodeId>(img / slots_), static_cast<std::uint32_t>(img % slots_)};
}

std::vector<std::pair<SlotRef, SlotRef>> ShiftPermutation::pairs() const {
  std::vector<std::pair<SlotRef, SlotRef>> out;
  for (std::size_t k = 0; k < image_.size(); ++k) {
    if (image_[k] > k) {
      out.push_back({{static_cast<NodeId>(k / slots_), static_cast<std::uint32_t>(k % slots_)},
                     {static_cast<NodeId>(image_[k] / slots_), static_cast<std::uint32_t>(image_[k] % slots_)}});
    }
  }
  return out;
}

ShiftPermutation build_shift(const Graph& g, std::size_t slot_dim) {
  const std::size_t d = slot_dim == 0 ? g.slot_dim() : slot_dim;
  if (d < g.slot_dim()) throw std::invalid_argument("slot_dim smaller than the graph's slot count");
  const std::size_t n = g.num_nodes();
  std::vector<std::uint32_t> image(n * d);
  std::iota(image.begin(), image.end(), 0u);
  for (NodeId v = 0; v < n; ++v) {
    auto slots = g.slots(v);
    for (std::size_t i = 0; i < slots.size(); ++i) {
      image[v * d + i] = static_cast<std::uint32_t>(slots[i].target * d + slots[i].back);
    }
  }
  return ShiftPermutation(n, d, std::move(image));
}

std::vector<double> betweenness_centrality(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<double> score(n, 0.0);
  std::vector<std::vector<NodeId>> preds(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<long> dist(n);
  std::vector<NodeId> order;
  order.reserve(n);
  for (NodeId s = 0; s < n; ++s) {
    for (auto& p : preds) p.clear();
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1L);
    order.clear();
    sigma[s] = 1.0;
    dist[s] = 0;
    std::queue<NodeId> queue;
    queue.push(s);
    while (!queue.empty()) {
      NodeId v = queue.front();
      queue.pop();
      order.push_back(v);
      for (NodeId w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      NodeId w = *it;
      for (NodeId v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) score[w] += delta[w];
    }
  }
  // every unordered pair was visited from both endpoints
  for (double& x : score) x *= 0.5;
  return score;
}

Matrix transition_matrix(const Graph& g) {
  const std::size_t n = g.num_nodes();
  Matrix w = Matrix::Zero(n, n);
  for (NodeId v = 0; v < n; ++v) {
    const std::size_t deg = g.degree(v);
    if (deg == 0) throw std::invalid_argument("node " + std::to_string(v) + " is isolated; transition row undefined");
    for (NodeId u : g.neighbors(v)) w(v, u) = 1.0 / static_cast<double>(deg);
  }
  return w;
}

Matrix random_walk_similarity(const Graph& g, int walk_power) {
  if (walk_power < 1) throw std::invalid_argument("similarity walk power must be >= 1");
  const Matrix w = transition_matrix(g);
  Matrix wk = w;
  for (int k = 1; k < walk_power; ++k) wk = wk * w;
  return wk * wk.transpose();
}

EdgeOrdering EdgeOrdering::similarity(int k) {
  if (k < 1) throw std::invalid_argument("similarity ordering needs walk power >= 1");
  return {Kind::similarity, k};
}

std::string to_string(EdgeOrdering::Kind kind) {
  switch (kind) {
    case EdgeOrdering::Kind::as_given: return "as-given";
    case EdgeOrdering::Kind::centrality: return "centrality";
    case EdgeOrdering::Kind::similarity: return "similarity";
  }
  return "?";
}

EdgeOrdering::Kind parse_edge_ordering(const std::string& name) {
  if (name == "as-given") return EdgeOrdering::Kind::as_given;
  if (name == "centrality") return EdgeOrdering::Kind::centrality;
  if (name == "similarity") return EdgeOrdering::Kind::similarity;
  throw std::invalid_argument("unknown edge ordering '" + name + "'");
}

namespace {

bool score_tied(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

Graph rebuild_with_order(const Graph& g, const std::vector<std::vector<NodeId>>& lists) {
  Graph ordered = Graph::from_neighbor_lists(lists);
  std::size_t pad = 0;
  bool any_loops = false;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    pad = std::max(pad, g.slot_count(v));
    any_loops = any_loops || g.self_loops(v) > 0;
  }
  return any_loops ? regularize_with_self_loops(ordered, pad) : ordered;
}

}  // namespace

Graph order_edges(const Graph& g, const EdgeOrdering& ordering) {
  if (ordering.kind == EdgeOrdering::Kind::as_given) return g;
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<NodeId>> lists(n);
  if (ordering.kind == EdgeOrdering::Kind::centrality) {
    const auto score = betweenness_centrality(g);
    for (NodeId v = 0; v < n; ++v) {
      lists[v] = g.neighbors(v);
      std::sort(lists[v].begin(), lists[v].end(), [&](NodeId a, NodeId b) {
        if (!score_tied(score[a], score[b])) return score[a] > score[b];
        return a < b;
      });
    }
  } else {
    if (ordering.walk_power < 1) throw std::invalid_argument("similarity ordering needs walk power >= 1");
    // isolated nodes have no edges to order; give them a harmless row
    bool has_isolated = false;
    for (NodeId v = 0; v < n; ++v) has_isolated = has_isolated || g.degree(v) == 0;
    Matrix sim;
    if (has_isolated) {
      std::vector<NodeId> keep;
      std::vector<long> remap(n, -1);
      for (NodeId v = 0; v < n; ++v) {
        if (g.degree(v) > 0) {
          remap[v] = static_cast<long>(keep.size());
          keep.push_back(v);
        }
      }
      std::vector<Edge> sub;
      for (const Edge& e : g.edges()) sub.push_back({static_cast<NodeId>(remap[e.u]), static_cast<NodeId>(remap[e.v])});
      Matrix small = random_walk_similarity(Graph::from_edges(keep.size(), sub), ordering.walk_power);
      sim = Matrix::Zero(n, n);
      for (std::size_t a = 0; a < keep.size(); ++a)
        for (std::size_t b = 0; b < keep.size(); ++b) sim(keep[a], keep[b]) = small(a, b);
    } else {
      sim = random_walk_similarity(g, ordering.walk_power);
    }
    for (NodeId v = 0; v < n; ++v) {
      lists[v] = g.neighbors(v);
      std::sort(lists[v].begin(), lists[v].end(), [&](NodeId a, NodeId b) {
        if (!score_tied(sim(v, a), sim(v, b))) return sim(v, a) > sim(v, b);
        return a < b;
      });
    }
  }
  return rebuild_with_order(g, lists);
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least 3 nodes");
  std::vector<std::vector<NodeId>> lists(n);
  for (std::size_t v = 0; v < n; ++v) {
    lists[v] = {static_cast<NodeId>((v + 1) % n), static_cast<NodeId>((v + n - 1) % n)};
  }
  return Graph::from_neighbor_lists(lists);
}

Graph path_graph(std::size_t n) {
  std::vector<std::vector<NodeId>> lists(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (v + 1 < n) lists[v].push_back(static_cast<NodeId>(v + 1));
    if (v > 0) lists[v].push_back(static_cast<NodeId>(v - 1));
  }
  return Graph::from_neighbor_lists(lists);
}

Graph lattice_graph(std::size_t rows, std::size_t cols) {
  std::vector<std::vector<NodeId>> lists(rows * cols);
  auto id = [cols](std::size_t r, std::size_t c) { return static_cast<NodeId>(r * cols + c); };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      auto& l = lists[id(r, c)];
      if (c + 1 < cols) l.push_back(id(r, c + 1));
      if (r + 1 < rows) l.push_back(id(r + 1, c));
      if (c > 0) l.push_back(id(r, c - 1));
      if (r > 0) l.push_back(id(r - 1, c));
    }
  }
  return Graph::from_neighbor_lists(lists);
}

Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v});
  return Graph::from_edges(n, edges);
}

Graph star_graph(std::size_t leaves) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v <= leaves; ++v) edges.push_back({0, v});
  return Graph::from_edges(leaves + 1, edges);
}

Graph read_edge_list(std::istream& in, std::size_t n_nodes) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  std::size_t max_id = 0;
  bool any = false;
  std::size_t declared = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("# nodes ", 0) == 0) declared = std::stoul(line.substr(8));
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    long long u = 0, v = 0;
    if (!(ss >> u)) continue;
    if (!(ss >> v) || u < 0 || v < 0) {
      throw DataError("edge list line " + std::to_string(line_no) + ": expected two non-negative node ids");
    }
    std::string rest;
    if (ss >> rest) throw DataError("edge list line " + std::to_string(line_no) + ": trailing content '" + rest + "'");
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
    max_id = std::max<std::size_t>(max_id, static_cast<std::size_t>(std::max(u, v)));
    any = true;
  }
  const std::size_t n = n_nodes != 0 ? n_nodes : std::max(declared, any ? max_id + 1 : 0);
  try {
    return Graph::from_edges(n, edges);
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("edge list: ") + e.what());
  }
}

Graph read_edge_list_file(const std::string& path, std::size_t n_nodes) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge list '" + path + "'");
  return read_edge_list(in, n_nodes);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# nodes " << g.num_nodes() << "\n";
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

}  // namespace qwalk
