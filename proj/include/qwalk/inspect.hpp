#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/types.hpp"

namespace qwalk {

enum class InspectCoin { grover, hadamard, swap };
/// uniform: real 1/sqrt(deg) on the start node's edge slots. symmetric:
/// (|0> + i|1>)/sqrt 2 on a 2-slot node, the unbiased Hadamard-walk start.
enum class StartState { uniform, symmetric };

InspectCoin parse_inspect_coin(const std::string& s);
StartState parse_start_state(const std::string& s);

/// "cycle:N", "path:N", "lattice:RxC", "complete:N", "star:L" or "file:PATH".
Graph parse_graph_source(const std::string& source);

/// Node distributions of the walker started at `start`, steps 0..T.
struct WalkTrace {
  std::vector<Vector> classical;
  std::vector<Vector> quantum;
  Matrix diffusion;  // all walkers after T steps
};

/// Grover coins are spatial (sized per node degree); Hadamard and swap need
/// max degree <= 2 and act on the padded 2-slot space.
WalkTrace trace_walk(const Graph& g, InspectCoin coin, std::size_t start, std::size_t steps,
                     StartState state = StartState::uniform);

/// Columns step,node,classical,quantum.
void write_marginals_csv(std::ostream& os, const WalkTrace& t);
/// Columns walker,node,value.
void write_diffusion_csv(std::ostream& os, const Matrix& p);

/// Probability-weighted standard deviation of positions on a cycle of n
/// nodes, measured as signed offsets from `origin` in (-n/2, n/2].
double cycle_position_std(const Vector& p, std::size_t origin);
double total_variation(const Vector& a, const Vector& b);

}  // namespace qwalk
