#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <utility>
#include <vector>

#include "peri/mesh.hpp"

namespace peri {

inline constexpr std::uint32_t kNoVertex = std::numeric_limits<std::uint32_t>::max();
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Arc {
  std::uint32_t to;
  double length;
};

/// Undirected weighted graph over mesh vertices. Adjacency lists are sorted
/// by target and symmetric with bit-identical weights in both directions.
class MeshGraph {
 public:
  /// Throws TopologyError if the adjacency is asymmetric, has self loops,
  /// out-of-range targets or non-positive lengths.
  explicit MeshGraph(std::vector<std::vector<Arc>> adjacency);

  std::size_t num_vertices() const { return adjacency_.size(); }
  const std::vector<Arc>& arcs(std::uint32_t v) const { return adjacency_[v]; }
  const std::vector<std::vector<Arc>>& adjacency() const { return adjacency_; }

 private:
  std::vector<std::vector<Arc>> adjacency_;
};

/// One arc per mesh edge and direction, weighted by Euclidean edge length.
MeshGraph build_graph(const Mesh& mesh);

struct ShortestPaths {
  std::uint32_t source = kNoVertex;
  std::vector<double> distances;           ///< kInfinity beyond the cutoff
  std::vector<std::uint32_t> predecessors; ///< kNoVertex for source/unsettled
};

/// Single-source Dijkstra with a binary heap and lazy deletion. Stops as soon
/// as the smallest tentative distance reaches `cutoff`; every vertex not
/// settled below the cutoff is reported at infinity without predecessor.
ShortestPaths dijkstra_truncated(const MeshGraph& graph, std::uint32_t source,
                                 double cutoff = kInfinity);

/// Vertex sequence source -> target recovered from the predecessor array.
/// Throws UnreachableError when target has infinite distance.
std::vector<std::uint32_t> shortest_path(const ShortestPaths& paths, std::uint32_t target);

struct Neighbor {
  std::uint32_t index;
  double distance;
};

/// Horizon neighbourhoods: for each vertex every other vertex at graph
/// distance strictly below the horizon, sorted by index.
class GeodesicTable {
 public:
  GeodesicTable() = default;

  /// Builds the table from unordered pairs (i != j, 0 < d < horizon), each
  /// given once; entries are mirrored so both directions hold the same bits.
  static GeodesicTable from_pairs(std::size_t num_vertices, double horizon,
                                  const std::vector<std::pair<std::array<std::uint32_t, 2>, double>>& pairs);

  /// Takes per-vertex lists as-is after checking sortedness, bounds and symmetry.
  static GeodesicTable from_neighbors(double horizon, std::vector<std::vector<Neighbor>> neighbors);

  std::size_t num_vertices() const { return neighbors_.size(); }
  double horizon() const { return horizon_; }
  const std::vector<Neighbor>& neighbors(std::size_t i) const { return neighbors_[i]; }
  const std::vector<std::vector<Neighbor>>& all_neighbors() const { return neighbors_; }
  std::size_t num_pairs() const;  ///< unordered pairs

  /// Vertices whose neighbourhood is empty (horizon below mesh resolution).
  const std::vector<std::uint32_t>& isolated_vertices() const { return isolated_; }

  bool operator==(const GeodesicTable& o) const;

 private:
  double horizon_ = 0.0;
  std::vector<std::vector<Neighbor>> neighbors_;
  std::vector<std::uint32_t> isolated_;

  void collect_isolated();
};

/// Truncated Dijkstra from every vertex. Each unordered pair is taken from
/// the run of its lower-index endpoint and mirrored. `threads` > 1 splits the
/// sources across worker threads; the result does not depend on it.
GeodesicTable build_geodesic_table(const MeshGraph& graph, double horizon, unsigned threads = 1);

/// Binary cache of a table keyed by mesh hash and horizon.
void save_geodesic_table(const GeodesicTable& table, std::uint64_t mesh_key,
                         const std::filesystem::path& path);
/// Throws Error if the file is malformed or was built for another mesh/horizon.
GeodesicTable load_geodesic_table(const std::filesystem::path& path, std::uint64_t mesh_key,
                                  double horizon);

}  // namespace peri
