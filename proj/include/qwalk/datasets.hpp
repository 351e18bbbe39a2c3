#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/types.hpp"

namespace qwalk {

// ---- geographic k-NN graph ----

struct GeoPoint {
  double lon = 0.0;  // degrees
  double lat = 0.0;
};

/// Great-circle distance in kilometres on a sphere of radius 6371 km.
double haversine_km(const GeoPoint& a, const GeoPoint& b);

struct GeoGraph {
  Graph graph;
  std::size_t components = 0;
  bool connected() const { return components <= 1; }
};

/// Each point selects its k nearest others (equal distances resolved by
/// lower index); an edge joins u and v if either selects the other.
/// Neighbor lists are ordered by distance, then index.
GeoGraph knn_geo_graph(std::span<const GeoPoint> points, std::size_t k);

// ---- daily temperatures ----

struct Station {
  std::string id;
  GeoPoint location;
};

struct TemperatureData {
  std::vector<Station> stations;
  std::vector<std::string> dates;  // ISO yyyy-mm-dd, ascending, complete days only
  Matrix tmax;                     // days x stations
  std::size_t dropped_days = 0;    // days missing at least one station
};

/// `stations`: header `station_id,lon,lat`. `observations`: header
/// `date,station_id,tmax`. Days without a reading for every station are
/// dropped; unknown station ids are a DataError.
TemperatureData read_temperature(std::istream& stations, std::istream& observations);
TemperatureData read_temperature_dir(const std::string& dir);

/// Day index in the proleptic Gregorian calendar for an ISO date.
long long day_number(const std::string& iso_date);

struct DayPair {
  std::size_t today = 0;  // row of tmax; tomorrow is the next calendar day
  Matrix x;               // stations x 1
  Matrix y;               // stations x 1
};

/// Pairs of consecutive calendar days, in date order.
std::vector<DayPair> temperature_pairs(const TemperatureData& data);

// ---- graph instances ----

/// One graph with node features and a target. Padding nodes (mask 0) carry
/// no edges and no features.
struct GraphInstance {
  std::shared_ptr<const Graph> graph;
  Matrix features;
  Matrix targets;  // graph-level row, or a 1 x 1 class label
  int label = -1;  // class id for classification, -1 otherwise
  std::vector<std::uint8_t> node_mask;

  std::size_t num_nodes() const { return graph->num_nodes(); }
};

/// Appends isolated, masked, zero-feature nodes up to `target_n`.
GraphInstance pad_instance(const GraphInstance& g, std::size_t target_n);
std::vector<GraphInstance> pad_batch(std::span<const GraphInstance> instances, std::size_t target_n);

// ---- TU graph classification ----

struct TuDataset {
  std::string name;
  std::vector<GraphInstance> graphs;
  std::vector<long> node_label_values;   // original value of each one-hot column
  std::vector<long> graph_label_values;  // original value of each class id
  std::vector<std::string> warnings;

  std::size_t node_classes() const { return node_label_values.size(); }
  std::size_t graph_classes() const { return graph_label_values.size(); }
};

struct TuStatistics {
  std::size_t graphs = 0;
  double average_nodes = 0.0;
  std::size_t max_nodes = 0;
  std::size_t max_degree = 0;
  std::size_t node_classes = 0;
  std::size_t graph_classes = 0;
};

TuStatistics statistics(const TuDataset& d);

/// Reads `<dir>/<name>_A.txt`, `_graph_indicator.txt`, `_node_labels.txt`
/// and `_graph_labels.txt` (1-indexed). Neighbor order follows the order
/// of adjacency lines. Non-contiguous label values are remapped densely and
/// reported in `warnings`.
TuDataset read_tu_dataset(const std::string& dir, const std::string& name);
void write_tu_dataset(const std::string& dir, const TuDataset& d);

// ---- molecules ----

struct MoleculeRecord {
  std::vector<int> charges;  // Z_i
  Matrix positions;          // M x 3, or empty when only the Coulomb matrix is known
  Matrix coulomb;            // M x M
  double energy = 0.0;       // kcal/mol

  std::size_t atoms() const { return charges.size(); }
};

/// C_ii = 0.5 Z_i^2.4, C_ij = Z_i Z_j / |R_i - R_j|.
Matrix coulomb_matrix(std::span<const int> charges, const Matrix& positions);

/// Per molecule: `M`, then M lines `Z x y z`, then the energy. Blank lines
/// and `#` comments are ignored.
std::vector<MoleculeRecord> read_molecules(std::istream& in);
std::vector<MoleculeRecord> read_molecules_file(const std::string& path);
void write_molecules(std::ostream& out, std::span<const MoleculeRecord> molecules);

/// Lloyd iterations on 1-D data starting from centroids (min, max). Returns
/// 0 for the low cluster, 1 for the high one; ties go low.
std::vector<int> two_means_1d(std::span<const double> values);

struct MoleculeGraph {
  Graph graph;
  std::size_t repair_edges = 0;  // edges added to reach connectivity
};

/// Recovers d_ij = Z_i Z_j / C_ij, splits the pair distances with 2-means,
/// keeps the short cluster as bonds, then adds excluded pairs by ascending
/// distance until connected.
MoleculeGraph coulomb_to_graph(const MoleculeRecord& m);

struct MoleculeDataset {
  std::vector<GraphInstance> graphs;  // unpadded, one-hot element features
  std::vector<int> elements;          // Z of each feature column
  std::size_t repaired = 0;           // molecules that needed extra edges
};

MoleculeDataset molecule_graphs(std::span<const MoleculeRecord> molecules);

// ---- splits ----

struct Split {
  std::vector<std::size_t> train, validation, test;
};

/// First, middle and last third in order (remainder goes to the earlier
/// parts).
Split split_thirds(std::size_t n);

/// k seeded folds. Split i tests on fold i, validates on fold i+1 mod k
/// and trains on the rest.
std::vector<Split> kfold_splits(std::size_t n, std::size_t k, std::uint64_t seed);

/// Shuffles each class separately and deals it into train, validation and
/// test by the given fractions, so every part keeps the class ratios to
/// within one instance per class.
Split stratified_split(std::span<const int> labels, double train_fraction, double validation_fraction,
                       std::uint64_t seed);

// ---- synthetic node regression ----

struct ShiftTask {
  Graph graph;  // cycle, neighbor 0 is v+1
  std::vector<Matrix> x, y;
};

/// Random features on an n-cycle with target y_v = x_{(v + hop) mod n}.
ShiftTask synthetic_shift_task(std::size_t n, std::size_t hop, std::size_t samples, std::uint64_t seed);

}  // namespace qwalk
