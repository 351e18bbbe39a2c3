#include "qwalk/datasets.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace qwalk {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(where + ": expected a number, got '" + s + "'");
  }
}

long parse_integer(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(where + ": expected an integer, got '" + s + "'");
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open '" + path + "'");
  return f;
}

// Union-find for connectivity repair.
struct Components {
  std::vector<std::size_t> parent;
  std::size_t count;
  explicit Components(std::size_t n) : parent(n), count(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) {
      parent[std::max(a, b)] = std::min(a, b);
      --count;
    }
  }
};

}  // namespace

double haversine_km(const GeoPoint& a, const GeoPoint& b) {
  constexpr double radius = 6371.0;
  constexpr double rad = M_PI / 180.0;
  const double dlat = (b.lat - a.lat) * rad;
  const double dlon = (b.lon - a.lon) * rad;
  const double h = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(a.lat * rad) * std::cos(b.lat * rad) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * radius * std::asin(std::min(1.0, std::sqrt(h)));
}

GeoGraph knn_geo_graph(std::span<const GeoPoint> points, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k-NN graph needs k >= 1");
  const std::size_t n = points.size();
  Matrix dist(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dist(i, j) = haversine_km(points[i], points[j]);

  auto closer = [&](std::size_t from) {
    return [&, from](std::size_t a, std::size_t b) {
      return dist(from, a) != dist(from, b) ? dist(from, a) < dist(from, b) : a < b;
    };
  };
  std::vector<std::set<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) others.push_back(j);
    const std::size_t take = std::min(k, others.size());
    std::partial_sort(others.begin(), others.begin() + static_cast<long>(take), others.end(), closer(i));
    for (std::size_t r = 0; r < take; ++r) {
      adj[i].insert(others[r]);
      adj[others[r]].insert(i);
    }
  }
  std::vector<std::vector<NodeId>> lists(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> nb(adj[i].begin(), adj[i].end());
    std::sort(nb.begin(), nb.end(), closer(i));
    lists[i].assign(nb.begin(), nb.end());
  }
  GeoGraph out{Graph::from_neighbor_lists(lists), 0};
  const auto comp = out.graph.components();
  out.components = std::set<std::size_t>(comp.begin(), comp.end()).size();
  return out;
}

long long day_number(const std::string& iso) {
  int y = 0;
  unsigned m = 0, d = 0;
  char a = 0, b = 0;
  std::istringstream ss(iso);
  if (!(ss >> y >> a >> m >> b >> d) || a != '-' || b != '-' || !ss.eof()) {
    throw DataError("bad date '" + iso + "' (expected yyyy-mm-dd)");
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) throw DataError("invalid calendar date '" + iso + "'");
  return std::chrono::sys_days(ymd).time_since_epoch().count();
}

TemperatureData read_temperature(std::istream& stations, std::istream& observations) {
  TemperatureData out;
  std::map<std::string, std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(stations, line) || split_csv(line) != std::vector<std::string>{"station_id", "lon", "lat"}) {
    throw DataError("stations file: header must be 'station_id,lon,lat'");
  }
  while (std::getline(stations, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    const std::string where = "stations line " + std::to_string(line_no + 1);
    if (f.size() != 3) throw DataError(where + ": expected 3 fields");
    if (!index.emplace(f[0], out.stations.size()).second) throw DataError(where + ": duplicate station '" + f[0] + "'");
    out.stations.push_back({f[0], {parse_number(f[1], where), parse_number(f[2], where)}});
  }
  if (out.stations.empty()) throw DataError("stations file lists no stations");

  if (!std::getline(observations, line) ||
      split_csv(line) != std::vector<std::string>{"date", "station_id", "tmax"}) {
    throw DataError("observations file: header must be 'date,station_id,tmax'");
  }
  std::map<std::string, std::vector<double>> days;
  std::map<std::string, std::vector<bool>> seen;
  line_no = 1;
  while (std::getline(observations, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    const std::string where = "observations line " + std::to_string(line_no);
    if (f.size() != 3) throw DataError(where + ": expected 3 fields");
    day_number(f[0]);
    const auto it = index.find(f[1]);
    if (it == index.end()) throw DataError(where + ": unknown station '" + f[1] + "'");
    auto& row = days[f[0]];
    auto& mark = seen[f[0]];
    if (row.empty()) {
      row.assign(out.stations.size(), 0.0);
      mark.assign(out.stations.size(), false);
    }
    if (mark[it->second]) throw DataError(where + ": second reading for station '" + f[1] + "' on " + f[0]);
    row[it->second] = parse_number(f[2], where);
    mark[it->second] = true;
  }
  std::vector<std::string> complete;
  for (const auto& [date, mark] : seen) {
    if (std::all_of(mark.begin(), mark.end(), [](bool b) { return b; })) complete.push_back(date);
    else ++out.dropped_days;
  }
  std::sort(complete.begin(), complete.end(),
            [](const std::string& a, const std::string& b) { return day_number(a) < day_number(b); });
  out.dates = complete;
  out.tmax.resize(static_cast<Eigen::Index>(complete.size()), static_cast<Eigen::Index>(out.stations.size()));
  for (std::size_t r = 0; r < complete.size(); ++r) {
    const auto& row = days[complete[r]];
    for (std::size_t s = 0; s < row.size(); ++s) out.tmax(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = row[s];
  }
  return out;
}

TemperatureData read_temperature_dir(const std::string& dir) {
  auto st = open_input(dir + "/stations.csv");
  auto ob = open_input(dir + "/observations.csv");
  return read_temperature(st, ob);
}

std::vector<DayPair> temperature_pairs(const TemperatureData& data) {
  std::vector<DayPair> out;
  for (std::size_t r = 0; r + 1 < data.dates.size(); ++r) {
    if (day_number(data.dates[r + 1]) != day_number(data.dates[r]) + 1) continue;
    out.push_back({r, data.tmax.row(static_cast<Eigen::Index>(r)).transpose(),
                   data.tmax.row(static_cast<Eigen::Index>(r + 1)).transpose()});
  }
  return out;
}

GraphInstance pad_instance(const GraphInstance& g, std::size_t target_n) {
  const std::size_t n = g.num_nodes();
  if (target_n < n) {
    throw std::invalid_argument("cannot pad a " + std::to_string(n) + "-node graph to " + std::to_string(target_n));
  }
  if (target_n == n) return g;
  std::vector<std::vector<NodeId>> lists(target_n);
  for (NodeId v = 0; v < n; ++v) lists[v] = g.graph->neighbors(v);
  GraphInstance out = g;
  out.graph = std::make_shared<const Graph>(Graph::from_neighbor_lists(lists));
  out.features = Matrix::Zero(static_cast<Eigen::Index>(target_n), g.features.cols());
  out.features.topRows(static_cast<Eigen::Index>(n)) = g.features;
  out.node_mask.assign(target_n, 0);
  for (std::size_t v = 0; v < n; ++v) out.node_mask[v] = g.node_mask.empty() ? 1 : g.node_mask[v];
  return out;
}

std::vector<GraphInstance> pad_batch(std::span<const GraphInstance> instances, std::size_t target_n) {
  std::vector<GraphInstance> out;
  out.reserve(instances.size());
  for (const auto& g : instances) out.push_back(pad_instance(g, target_n));
  return out;
}

TuStatistics statistics(const TuDataset& d) {
  TuStatistics s;
  s.graphs = d.graphs.size();
  std::size_t total = 0;
  for (const auto& g : d.graphs) {
    total += g.num_nodes();
    s.max_nodes = std::max(s.max_nodes, g.num_nodes());
    s.max_degree = std::max(s.max_degree, g.graph->max_degree());
  }
  s.average_nodes = s.graphs ? static_cast<double>(total) / static_cast<double>(s.graphs) : 0.0;
  s.node_classes = d.node_classes();
  s.graph_classes = d.graph_classes();
  return s;
}

namespace {

std::vector<long> read_column(const std::string& path) {
  auto in = open_input(path);
  std::vector<long> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    out.push_back(parse_integer(t, path + ":" + std::to_string(line_no)));
  }
  return out;
}

// Dense remap of label values; warns when the values are not 0..k-1 or 1..k.
std::vector<long> label_values(const std::vector<long>& raw, const std::string& what,
                               std::vector<std::string>& warnings) {
  std::set<long> distinct(raw.begin(), raw.end());
  std::vector<long> values(distinct.begin(), distinct.end());
  if (!values.empty()) {
    const bool contiguous = values.back() - values.front() + 1 == static_cast<long>(values.size());
    if (!contiguous) warnings.push_back(what + " values are not contiguous; remapped densely");
  }
  return values;
}

std::size_t dense_index(const std::vector<long>& values, long v) {
  return static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), v) - values.begin());
}

}  // namespace

TuDataset read_tu_dataset(const std::string& dir, const std::string& name) {
  const std::string base = dir + "/" + name;
  TuDataset out;
  out.name = name;
  const std::vector<long> indicator = read_column(base + "_graph_indicator.txt");
  const std::vector<long> node_labels = read_column(base + "_node_labels.txt");
  const std::vector<long> graph_labels = read_column(base + "_graph_labels.txt");
  const std::size_t n_nodes = indicator.size();
  const std::size_t n_graphs = graph_labels.size();
  if (node_labels.size() != n_nodes) {
    throw DataError(name + ": " + std::to_string(node_labels.size()) + " node labels for " +
                    std::to_string(n_nodes) + " nodes");
  }
  std::vector<std::size_t> local(n_nodes), first(n_graphs + 1, 0), counts(n_graphs, 0);
  for (std::size_t v = 0; v < n_nodes; ++v) {
    const long gid = indicator[v];
    if (gid < 1 || static_cast<std::size_t>(gid) > n_graphs) {
      throw DataError(name + ": node " + std::to_string(v + 1) + " belongs to unknown graph " + std::to_string(gid));
    }
    if (v > 0 && gid < indicator[v - 1]) throw DataError(name + ": graph indicator is not sorted");
    local[v] = counts[static_cast<std::size_t>(gid - 1)]++;
  }
  for (std::size_t g = 0; g < n_graphs; ++g) {
    if (counts[g] == 0) throw DataError(name + ": graph " + std::to_string(g + 1) + " has no nodes");
    first[g + 1] = first[g] + counts[g];
  }

  std::vector<std::vector<NodeId>> lists(n_nodes);
  std::set<std::pair<std::size_t, std::size_t>> directed;
  std::size_t duplicates = 0, loops = 0;
  {
    auto in = open_input(base + "_A.txt");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      const auto f = split_csv(line);
      const std::string where = name + "_A.txt:" + std::to_string(line_no);
      if (f.size() != 2) throw DataError(where + ": expected 'u, v'");
      const long u = parse_integer(f[0], where), v = parse_integer(f[1], where);
      if (u < 1 || v < 1 || static_cast<std::size_t>(u) > n_nodes || static_cast<std::size_t>(v) > n_nodes) {
        throw DataError(where + ": dangling node id");
      }
      const std::size_t a = static_cast<std::size_t>(u - 1), b = static_cast<std::size_t>(v - 1);
      if (indicator[a] != indicator[b]) throw DataError(where + ": edge joins two different graphs");
      if (a == b) {
        ++loops;
        continue;
      }
      if (!directed.emplace(a, b).second) {
        ++duplicates;
        continue;
      }
      lists[a].push_back(static_cast<NodeId>(local[b]));
    }
  }
  std::size_t mirrored = 0;
  for (const auto& [a, b] : directed) {
    if (!directed.count({b, a})) {
      lists[b].push_back(static_cast<NodeId>(local[a]));
      ++mirrored;
    }
  }
  if (loops) out.warnings.push_back(std::to_string(loops) + " self-loop lines ignored");
  if (duplicates) out.warnings.push_back(std::to_string(duplicates) + " duplicate adjacency lines ignored");
  if (mirrored) out.warnings.push_back(std::to_string(mirrored) + " edges listed in one direction only; mirrored");

  out.node_label_values = label_values(node_labels, "node label", out.warnings);
  out.graph_label_values = label_values(graph_labels, "graph label", out.warnings);
  const auto f = static_cast<Eigen::Index>(out.node_label_values.size());
  for (std::size_t g = 0; g < n_graphs; ++g) {
    std::vector<std::vector<NodeId>> graph_lists(lists.begin() + static_cast<long>(first[g]),
                                                 lists.begin() + static_cast<long>(first[g + 1]));
    GraphInstance inst;
    inst.graph = std::make_shared<const Graph>(Graph::from_neighbor_lists(graph_lists));
    inst.features = Matrix::Zero(static_cast<Eigen::Index>(counts[g]), f);
    for (std::size_t v = first[g]; v < first[g + 1]; ++v) {
      inst.features(static_cast<Eigen::Index>(v - first[g]),
                    static_cast<Eigen::Index>(dense_index(out.node_label_values, node_labels[v]))) = 1.0;
    }
    inst.label = static_cast<int>(dense_index(out.graph_label_values, graph_labels[g]));
    inst.targets = Matrix::Constant(1, 1, inst.label);
    inst.node_mask.assign(counts[g], 1);
    out.graphs.push_back(std::move(inst));
  }
  return out;
}

void write_tu_dataset(const std::string& dir, const TuDataset& d) {
  std::filesystem::create_directories(dir);
  const std::string base = dir + "/" + d.name;
  std::ofstream a(base + "_A.txt"), ind(base + "_graph_indicator.txt"), nl(base + "_node_labels.txt"),
      gl(base + "_graph_labels.txt");
  if (!a || !ind || !nl || !gl) throw DataError("cannot write TU files under '" + dir + "'");
  std::size_t offset = 0;
  for (std::size_t g = 0; g < d.graphs.size(); ++g) {
    const GraphInstance& inst = d.graphs[g];
    for (NodeId v = 0; v < inst.num_nodes(); ++v) {
      for (NodeId u : inst.graph->neighbors(v)) a << offset + v + 1 << ", " << offset + u + 1 << '\n';
      ind << g + 1 << '\n';
      Eigen::Index col = 0;
      inst.features.row(v).maxCoeff(&col);
      nl << d.node_label_values.at(static_cast<std::size_t>(col)) << '\n';
    }
    gl << d.graph_label_values.at(static_cast<std::size_t>(inst.label)) << '\n';
    offset += inst.num_nodes();
  }
}

Matrix coulomb_matrix(std::span<const int> z, const Matrix& r) {
  const std::size_t m = z.size();
  if (static_cast<std::size_t>(r.rows()) != m || r.cols() != 3) throw DataError("positions must be M x 3");
  Matrix c(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) {
        c(i, i) = 0.5 * std::pow(static_cast<double>(z[i]), 2.4);
        continue;
      }
      const double dist = (r.row(i) - r.row(j)).norm();
      if (dist == 0.0) throw DataError("atoms " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      c(i, j) = static_cast<double>(z[i] * z[j]) / dist;
    }
  return c;
}

std::vector<MoleculeRecord> read_molecules(std::istream& in) {
  std::vector<std::string> tokens_lines;
  std::vector<std::size_t> line_numbers;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (trim(line).empty()) continue;
    tokens_lines.push_back(trim(line));
    line_numbers.push_back(line_no);
  }
  std::vector<MoleculeRecord> out;
  std::size_t k = 0;
  auto where = [&](std::size_t i) { return "molecule file line " + std::to_string(line_numbers[i]); };
  while (k < tokens_lines.size()) {
    const long m = parse_integer(tokens_lines[k], where(k));
    if (m < 1) throw DataError(where(k) + ": atom count must be positive");
    if (k + static_cast<std::size_t>(m) + 1 >= tokens_lines.size()) {
      throw DataError(where(k) + ": molecule block is truncated");
    }
    MoleculeRecord rec;
    rec.positions.resize(m, 3);
    for (long a = 0; a < m; ++a) {
      const std::size_t li = k + 1 + static_cast<std::size_t>(a);
      std::istringstream ss(tokens_lines[li]);
      int z = 0;
      double x = 0, y = 0, w = 0;
      std::string extra;
      if (!(ss >> z >> x >> y >> w) || (ss >> extra) || z < 1) throw DataError(where(li) + ": expected 'Z x y z'");
      rec.charges.push_back(z);
      rec.positions.row(a) << x, y, w;
    }
    const std::size_t el = k + 1 + static_cast<std::size_t>(m);
    rec.energy = parse_number(tokens_lines[el], where(el));
    rec.coulomb = coulomb_matrix(rec.charges, rec.positions);
    out.push_back(std::move(rec));
    k = el + 1;
  }
  return out;
}

std::vector<MoleculeRecord> read_molecules_file(const std::string& path) {
  auto in = open_input(path);
  return read_molecules(in);
}

void write_molecules(std::ostream& out, std::span<const MoleculeRecord> molecules) {
  out << std::setprecision(17);
  for (const auto& m : molecules) {
    if (m.positions.rows() != static_cast<Eigen::Index>(m.atoms())) throw DataError("molecule has no positions");
    out << m.atoms() << '\n';
    for (std::size_t a = 0; a < m.atoms(); ++a) {
      const auto i = static_cast<Eigen::Index>(a);
      out << m.charges[a] << ' ' << m.positions(i, 0) << ' ' << m.positions(i, 1) << ' ' << m.positions(i, 2) << '\n';
    }
    out << m.energy << '\n';
  }
}

std::vector<int> two_means_1d(std::span<const double> values) {
  std::vector<int> assign(values.size(), 0);
  if (values.empty()) return assign;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  double c0 = *lo, c1 = *hi;
  if (c0 == c1) return assign;
  for (int iter = 0; iter < 1000; ++iter) {
    bool changed = false;
    double s0 = 0, s1 = 0;
    std::size_t n0 = 0, n1 = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const int a = std::abs(values[i] - c1) < std::abs(values[i] - c0) ? 1 : 0;
      changed = changed || a != assign[i];
      assign[i] = a;
      (a ? s1 : s0) += values[i];
      ++(a ? n1 : n0);
    }
    if (n0) c0 = s0 / static_cast<double>(n0);
    if (n1) c1 = s1 / static_cast<double>(n1);
    if (!changed && iter > 0) break;
  }
  return assign;
}

MoleculeGraph coulomb_to_graph(const MoleculeRecord& m) {
  const std::size_t n = m.atoms();
  if (n < 2) throw std::invalid_argument("molecule graph needs at least two atoms");
  if (static_cast<std::size_t>(m.coulomb.rows()) != n || static_cast<std::size_t>(m.coulomb.cols()) != n) {
    throw DataError("Coulomb matrix is not M x M");
  }
  struct Pair {
    std::size_t i, j;
    double d;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = m.coulomb(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (c == 0.0) throw DataError("zero Coulomb entry for atoms " + std::to_string(i) + ", " + std::to_string(j));
      pairs.push_back({i, j, static_cast<double>(m.charges[i] * m.charges[j]) / c});
    }
  std::vector<double> dist;
  for (const auto& p : pairs) dist.push_back(p.d);
  const std::vector<int> cluster = two_means_1d(dist);

  MoleculeGraph out;
  std::vector<Edge> edges;
  std::vector<Pair> excluded;
  Components comp(n);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (cluster[k] == 0) {
      edges.push_back({static_cast<NodeId>(pairs[k].i), static_cast<NodeId>(pairs[k].j)});
      comp.join(pairs[k].i, pairs[k].j);
    } else {
      excluded.push_back(pairs[k]);
    }
  }
  std::stable_sort(excluded.begin(), excluded.end(), [](const Pair& a, const Pair& b) { return a.d < b.d; });
  for (const Pair& p : excluded) {
    if (comp.count == 1) break;
    edges.push_back({static_cast<NodeId>(p.i), static_cast<NodeId>(p.j)});
    comp.join(p.i, p.j);
    ++out.repair_edges;
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
  out.graph = Graph::from_edges(n, edges);
  return out;
}

MoleculeDataset molecule_graphs(std::span<const MoleculeRecord> molecules) {
  MoleculeDataset out;
  std::set<int> elements;
  for (const auto& m : molecules) elements.insert(m.charges.begin(), m.charges.end());
  out.elements.assign(elements.begin(), elements.end());
  for (const auto& m : molecules) {
    MoleculeGraph mg = coulomb_to_graph(m);
    out.repaired += mg.repair_edges > 0;
    GraphInstance inst;
    inst.graph = std::make_shared<const Graph>(std::move(mg.graph));
    inst.features = Matrix::Zero(static_cast<Eigen::Index>(m.atoms()), static_cast<Eigen::Index>(out.elements.size()));
    for (std::size_t a = 0; a < m.atoms(); ++a) {
      const auto col = std::lower_bound(out.elements.begin(), out.elements.end(), m.charges[a]) - out.elements.begin();
      inst.features(static_cast<Eigen::Index>(a), col) = 1.0;
    }
    inst.targets = Matrix::Constant(1, 1, m.energy);
    inst.node_mask.assign(m.atoms(), 1);
    out.graphs.push_back(std::move(inst));
  }
  return out;
}

Split split_thirds(std::size_t n) {
  const std::size_t base = n / 3, rem = n % 3;
  const std::size_t a = base + (rem >= 1), b = base + (rem >= 2);
  Split s;
  for (std::size_t i = 0; i < n; ++i) (i < a ? s.train : i < a + b ? s.validation : s.test).push_back(i);
  return s;
}

std::vector<Split> kfold_splits(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("k-fold needs at least 2 folds");
  if (k > n) throw std::invalid_argument(std::to_string(k) + " folds for " + std::to_string(n) + " instances");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k);
    folds[f].assign(order.begin() + static_cast<long>(pos), order.begin() + static_cast<long>(pos + size));
    std::sort(folds[f].begin(), folds[f].end());
    pos += size;
  }
  std::vector<Split> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    out[i].test = folds[i];
    out[i].validation = folds[(i + 1) % k];
    for (std::size_t f = 0; f < k; ++f)
      if (f != i && f != (i + 1) % k) out[i].train.insert(out[i].train.end(), folds[f].begin(), folds[f].end());
    std::sort(out[i].train.begin(), out[i].train.end());
  }
  return out;
}

Split stratified_split(std::span<const int> labels, double train_fraction, double validation_fraction,
                       std::uint64_t seed) {
  if (train_fraction < 0 || validation_fraction < 0 || train_fraction + validation_fraction > 1.0) {
    throw std::invalid_argument("split fractions must be non-negative and sum to at most 1");
  }
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  std::mt19937_64 rng(seed);
  Split s;
  for (auto& [label, members] : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    const double c = static_cast<double>(members.size());
    const auto tr = static_cast<std::size_t>(std::llround(train_fraction * c));
    const auto va = std::min(members.size() - tr, static_cast<std::size_t>(std::llround(validation_fraction * c)));
    s.train.insert(s.train.end(), members.begin(), members.begin() + static_cast<long>(tr));
    s.validation.insert(s.validation.end(), members.begin() + static_cast<long>(tr),
                        members.begin() + static_cast<long>(tr + va));
    s.test.insert(s.test.end(), members.begin() + static_cast<long>(tr + va), members.end());
  }
  for (auto* part : {&s.train, &s.validation, &s.test}) std::sort(part->begin(), part->end());
  return s;
}

ShiftTask synthetic_shift_task(std::size_t n, std::size_t hop, std::size_t samples, std::uint64_t seed) {
  ShiftTask t{cycle_graph(n), {}, {}};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  for (std::size_t s = 0; s < samples; ++s) {
    Matrix x(n, 1), y(n, 1);
    for (std::size_t v = 0; v < n; ++v) x(static_cast<Eigen::Index>(v), 0) = nd(rng);
    for (std::size_t v = 0; v < n; ++v) y(static_cast<Eigen::Index>(v), 0) = x(static_cast<Eigen::Index>((v + hop) % n), 0);
    t.x.push_back(std::move(x));
    t.y.push_back(std::move(y));
  }
  return t;
}

}  // namespace qwalk
