#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/types.hpp"

namespace qwalk {

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// One spin direction of a node. `back` is the slot index at `target` that
/// points back here; for padding self-loops target is the node itself and
/// back is the slot's own index.
struct Slot {
  NodeId target = 0;
  std::uint32_t back = 0;
  friend bool operator==(const Slot&, const Slot&) = default;
};

/// Undirected simple graph whose per-node neighbor order is meaningful: the
/// i-th slot of a node is its i-th spin direction. Real edges occupy slots
/// 0..degree(v)-1, padding self-loops (if any) follow.
class Graph {
 public:
  Graph() = default;

  /// Neighbors appear in the order edges are listed. Rejects out-of-range
  /// ids, self-loops and duplicate edges.
  static Graph from_edges(std::size_t n_nodes, std::span<const Edge> edges);

  /// Builds a graph from explicit ordered neighbor lists; every list entry
  /// must be mirrored in the neighbor's list.
  static Graph from_neighbor_lists(const std::vector<std::vector<NodeId>>& lists);

  std::size_t num_nodes() const { return slots_.size(); }
  std::size_t num_edges() const { return n_edges_; }

  /// Largest number of real edges at any node.
  std::size_t max_degree() const { return max_degree_; }
  std::size_t degree(NodeId v) const { return degree_.at(v); }
  std::size_t self_loops(NodeId v) const { return slots_.at(v).size() - degree_.at(v); }
  std::size_t slot_count(NodeId v) const { return slots_.at(v).size(); }

  /// Width of the coin space: the largest slot count, at least 1.
  std::size_t slot_dim() const;

  std::span<const Slot> slots(NodeId v) const { return slots_.at(v); }
  /// Real neighbors of v in slot order.
  std::vector<NodeId> neighbors(NodeId v) const;
  /// Unordered real edges, u < v, sorted.
  std::vector<Edge> edges() const;

  /// Component id per node, numbered by smallest member.
  std::vector<std::size_t> components() const;
  bool connected() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  friend Graph regularize_with_self_loops(const Graph& g, std::size_t slot_dim);
  void finalize();

  std::vector<std::vector<Slot>> slots_;
  std::vector<std::uint32_t> degree_;
  std::size_t n_edges_ = 0;
  std::size_t max_degree_ = 0;
};

/// Pads every node with self-loop slots up to `slot_dim` (0 means the max
/// degree). Existing slot order is preserved and self-loops come last.
Graph regularize_with_self_loops(const Graph& g, std::size_t slot_dim = 0);

/// A (node, slot) coordinate.
struct SlotRef {
  NodeId node = 0;
  std::uint32_t slot = 0;
  friend bool operator==(const SlotRef&, const SlotRef&) = default;
};

/// Involution over the n_nodes x slots amplitude grid that swaps the two
/// endpoint slots of every edge. Unpaired slots are fixed points.
class ShiftPermutation {
 public:
  ShiftPermutation() = default;
  ShiftPermutation(std::size_t n_nodes, std::size_t slots, std::vector<std::uint32_t> image);

  std::size_t num_nodes() const { return n_nodes_; }
  std::size_t slots() const { return slots_; }
  std::size_t size() const { return image_.size(); }

  /// Flat index (node * slots + slot) of the image of a flat index.
  std::size_t operator()(std::size_t flat) const { return image_[flat]; }
  SlotRef operator()(SlotRef s) const;

  /// Each swapped pair once, in increasing order of its first member.
  std::vector<std::pair<SlotRef, SlotRef>> pairs() const;

  friend bool operator==(const ShiftPermutation&, const ShiftPermutation&) = default;

 private:
  std::size_t n_nodes_ = 0;
  std::size_t slots_ = 0;
  std::vector<std::uint32_t> image_;
};

/// `slot_dim` of 0 means g.slot_dim(); otherwise it must be at least that.
ShiftPermutation build_shift(const Graph& g, std::size_t slot_dim = 0);

/// Betweenness centrality over unordered endpoint pairs {j, k}, exact
/// (Brandes accumulation). Pairs in different components contribute 0.
std::vector<double> betweenness_centrality(const Graph& g);

/// Row-stochastic classical transition matrix D^-1 A over real edges.
/// Throws std::invalid_argument on isolated nodes.
Matrix transition_matrix(const Graph& g);

/// S(i, j) = <row i of W^k, row j of W^k> with W = D^-1 A.
Matrix random_walk_similarity(const Graph& g, int walk_power);

struct EdgeOrdering {
  enum class Kind { as_given, centrality, similarity };
  Kind kind = Kind::as_given;
  int walk_power = 1;  // similarity only

  static EdgeOrdering as_given() { return {}; }
  static EdgeOrdering centrality() { return {Kind::centrality, 1}; }
  static EdgeOrdering similarity(int k);

  friend bool operator==(const EdgeOrdering&, const EdgeOrdering&) = default;
};

std::string to_string(EdgeOrdering::Kind kind);
EdgeOrdering::Kind parse_edge_ordering(const std::string& name);

/// Reorders every node's real neighbors by descending score (centrality of
/// the neighbor, or similarity to it); scores within 1e-9 relative count as
/// ties and are broken by ascending node id. Self-loop padding stays last.
Graph order_edges(const Graph& g, const EdgeOrdering& ordering);

// Generators. Cycles and paths list the "next" node first so that always
// taking slot 0 tours the graph; lattices use right, down, left, up.
Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph lattice_graph(std::size_t rows, std::size_t cols);
Graph complete_graph(std::size_t n);
Graph star_graph(std::size_t leaves);

/// Edge-list text: one `u v` pair per line, 0-indexed, `#` comments. The
/// node count is the largest id + 1 unless `n_nodes` is given or a
/// `# nodes N` header line says more. Writing emits that header and the
/// sorted edge set, so slot order is not preserved.
Graph read_edge_list(std::istream& in, std::size_t n_nodes = 0);
Graph read_edge_list_file(const std::string& path, std::size_t n_nodes = 0);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace qwalk
