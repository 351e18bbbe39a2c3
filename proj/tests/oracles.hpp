#pragma once

// Brute-force reference computations shared by unit and acceptance tests.
// They deliberately avoid the library's own algorithms.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "qwalk/graph.hpp"

namespace oracle {

using qwalk::Edge;
using qwalk::Graph;
using qwalk::NodeId;

using Adjacency = std::vector<std::vector<int>>;

inline Adjacency adjacency(const Graph& g) {
  const std::size_t n = g.num_nodes();
  Adjacency a(n, std::vector<int>(n, 0));
  for (const Edge& e : g.edges()) a[e.u][e.v] = a[e.v][e.u] = 1;
  return a;
}

inline std::vector<std::vector<int>> distances(const Adjacency& a) {
  const std::size_t n = a.size();
  const int inf = 1 << 20;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (a[i][j]) d[i][j] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

/// Enumerates every shortest path explicitly and counts interior visits.
inline std::vector<double> betweenness(const Graph& g) {
  const Adjacency a = adjacency(g);
  const auto d = distances(a);
  const std::size_t n = a.size();
  std::vector<double> score(n, 0.0);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = s + 1; t < n; ++t) {
      if (d[s][t] >= (1 << 20)) continue;
      std::vector<std::vector<int>> paths;
      std::vector<int> cur{static_cast<int>(s)};
      std::function<void()> extend = [&] {
        const int v = cur.back();
        if (static_cast<std::size_t>(v) == t) {
          paths.push_back(cur);
          return;
        }
        if (static_cast<int>(cur.size()) - 1 >= d[s][t]) return;
        for (std::size_t u = 0; u < n; ++u) {
          if (!a[v][u] || std::find(cur.begin(), cur.end(), static_cast<int>(u)) != cur.end()) continue;
          cur.push_back(static_cast<int>(u));
          extend();
          cur.pop_back();
        }
      };
      extend();
      for (std::size_t i = 0; i < n; ++i) {
        if (i == s || i == t) continue;
        double through = 0;
        for (const auto& p : paths) through += std::find(p.begin() + 1, p.end() - 1, static_cast<int>(i)) != p.end() - 1;
        score[i] += through / static_cast<double>(paths.size());
      }
    }
  return score;
}

/// k-step classical walk distributions by summing over every walk of length
/// k, then inner products of those distributions.
inline std::vector<std::vector<double>> similarity(const Graph& g, int k) {
  const Adjacency a = adjacency(g);
  const std::size_t n = a.size();
  std::vector<int> deg(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) deg[i] += a[i][j];
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t s = 0; s < n; ++s) {
    std::function<void(std::size_t, int, double)> go = [&](std::size_t v, int left, double p) {
      if (left == 0) {
        dist[s][v] += p;
        return;
      }
      for (std::size_t u = 0; u < n; ++u)
        if (a[v][u]) go(u, left - 1, p / deg[v]);
    };
    go(s, k, 1.0);
  }
  std::vector<std::vector<double>> sim(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t v = 0; v < n; ++v) sim[i][j] += dist[i][v] * dist[j][v];
  return sim;
}

/// Neighbors sorted by descending score, near-equal scores by ascending id.
inline std::vector<NodeId> rank(std::vector<NodeId> nbrs, const std::function<double(NodeId)>& score) {
  std::sort(nbrs.begin(), nbrs.end());
  std::stable_sort(nbrs.begin(), nbrs.end(), [&](NodeId x, NodeId y) {
    const double a = score(x), b = score(y);
    if (std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)})) return false;
    return a > b;
  });
  return nbrs;
}

/// Every connected simple graph on n labelled nodes.
inline std::vector<Graph> all_connected_graphs(std::size_t n) {
  std::vector<Edge> pairs;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) pairs.push_back({u, v});
  std::vector<Graph> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << pairs.size()); ++mask) {
    std::vector<Edge> es;
    for (std::size_t b = 0; b < pairs.size(); ++b)
      if (mask >> b & 1) es.push_back(pairs[b]);
    Graph g = Graph::from_edges(n, es);
    if (g.connected()) out.push_back(std::move(g));
  }
  return out;
}

inline Graph random_connected_graph(std::size_t n, std::mt19937_64& rng, double extra = 0.25) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) edges.push_back({static_cast<NodeId>(rng() % v), v});
  std::bernoulli_distribution coin(extra);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) {
      bool present = false;
      for (const Edge& e : edges) present |= (e.u == u && e.v == v) || (e.u == v && e.v == u);
      if (!present && coin(rng)) edges.push_back({u, v});
    }
  std::shuffle(edges.begin(), edges.end(), rng);
  return Graph::from_edges(n, edges);
}

/// Dense walk operator U = S (C (x) I) on the flat (node, slot) space,
/// assembled entry by entry from the graph's neighbor lists. `coin_at(v)`
/// gives the d x d coin at node v; amplitudes are row vectors, so one step
/// is phi' = phi U.
using CMat = std::vector<std::vector<std::complex<double>>>;

inline CMat dense_step_operator(const Graph& g, std::size_t d, const std::function<CMat(NodeId)>& coin_at) {
  const std::size_t n = g.num_nodes(), m = n * d;
  CMat coin_block(m, std::vector<std::complex<double>>(m, 0.0));
  for (NodeId v = 0; v < n; ++v) {
    const CMat c = coin_at(v);
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t j = 0; j < d; ++j) coin_block[v * d + k][v * d + j] = c[k][j];
  }
  CMat shift(m, std::vector<std::complex<double>>(m, 0.0));
  for (NodeId v = 0; v < n; ++v) {
    const auto nb = g.neighbors(v);
    for (std::size_t i = 0; i < d; ++i) {
      std::size_t dest = v * d + i;
      if (i < nb.size()) {
        const NodeId u = nb[i];
        const auto back = g.neighbors(u);
        const std::size_t j = static_cast<std::size_t>(std::find(back.begin(), back.end(), v) - back.begin());
        dest = u * d + j;
      }
      shift[v * d + i][dest] = 1.0;
    }
  }
  CMat u(m, std::vector<std::complex<double>>(m, 0.0));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c) u[a][c] += coin_block[a][b] * shift[b][c];
  return u;
}

/// Node probabilities of a single walker after `steps` applications of U.
inline std::vector<double> dense_walk(const CMat& u, std::vector<std::complex<double>> phi, std::size_t d,
                                      std::size_t steps) {
  const std::size_t m = phi.size();
  for (std::size_t t = 0; t < steps; ++t) {
    std::vector<std::complex<double>> next(m, 0.0);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) next[b] += phi[a] * u[a][b];
    phi = std::move(next);
  }
  std::vector<double> p(m / d, 0.0);
  for (std::size_t a = 0; a < m; ++a) p[a / d] += std::norm(phi[a]);
  return p;
}

}  // namespace oracle
