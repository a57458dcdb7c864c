#include "peri/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <string>
#include <thread>

#include "peri/errors.hpp"

namespace peri {

MeshGraph::MeshGraph(std::vector<std::vector<Arc>> adjacency) : adjacency_(std::move(adjacency)) {
  const std::size_t nv = adjacency_.size();
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end(), [](const Arc& a, const Arc& b) { return a.to < b.to; });
  }
  for (std::size_t v = 0; v < nv; ++v) {
    const auto& list = adjacency_[v];
    for (std::size_t k = 0; k < list.size(); ++k) {
      const Arc& arc = list[k];
      if (arc.to >= nv) throw TopologyError("graph arc from " + std::to_string(v) + " leaves the vertex range");
      if (arc.to == v) throw TopologyError("graph has a self loop at " + std::to_string(v));
      if (!(arc.length > 0.0) || !std::isfinite(arc.length)) {
        throw TopologyError("graph arc " + std::to_string(v) + "->" + std::to_string(arc.to) +
                            " has non-positive length");
      }
      if (k > 0 && list[k - 1].to == arc.to) {
        throw TopologyError("duplicate graph arc " + std::to_string(v) + "->" + std::to_string(arc.to));
      }
      const auto& back = adjacency_[arc.to];
      auto it = std::lower_bound(back.begin(), back.end(), static_cast<std::uint32_t>(v),
                                 [](const Arc& a, std::uint32_t t) { return a.to < t; });
      if (it == back.end() || it->to != v || it->length != arc.length) {
        throw TopologyError("graph is not symmetric at arc " + std::to_string(v) + "->" +
                            std::to_string(arc.to));
      }
    }
  }
}

MeshGraph build_graph(const Mesh& mesh) {
  const std::size_t nv = mesh.num_vertices();
  std::vector<std::vector<Arc>> adjacency(nv);
  for (const auto& e : mesh.edges) {
    if (e[0] >= nv || e[1] >= nv) throw TopologyError("mesh edge references vertex out of range");
    const double len = norm(mesh.positions[e[1]] - mesh.positions[e[0]]);
    adjacency[e[0]].push_back({e[1], len});
    adjacency[e[1]].push_back({e[0], len});
  }
  return MeshGraph(std::move(adjacency));
}

namespace {

// Reusable Dijkstra state. Only the touched entries are reset between
// sources so the all-sources sweep costs O(neighbourhood) per source.
class DijkstraWorkspace {
 public:
  explicit DijkstraWorkspace(std::size_t nv)
      : dist_(nv, kInfinity), pred_(nv, kNoVertex), settled_(nv, 0) {}

  // Runs from `source`; calls visit(v, d) for every vertex settled below the
  // cutoff (including the source at 0) in settlement order.
  template <class Visit>
  void run(const MeshGraph& graph, std::uint32_t source, double cutoff, Visit&& visit) {
    reset();
    using Entry = std::pair<double, std::uint32_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    touch(source);
    dist_[source] = 0.0;
    queue.push({0.0, source});
    while (!queue.empty()) {
      const auto [d, u] = queue.top();
      queue.pop();
      if (settled_[u] || d > dist_[u]) continue;  // stale entry
      if (d >= cutoff) break;
      settled_[u] = 1;
      visit(u, d);
      for (const Arc& arc : graph.arcs(u)) {
        if (settled_[arc.to]) continue;
        const double tentative = d + arc.length;
        if (tentative < dist_[arc.to]) {
          touch(arc.to);
          dist_[arc.to] = tentative;
          pred_[arc.to] = u;
          queue.push({tentative, arc.to});
        }
      }
    }
  }

  double distance(std::uint32_t v) const { return dist_[v]; }
  std::uint32_t predecessor(std::uint32_t v) const { return pred_[v]; }
  bool settled(std::uint32_t v) const { return settled_[v] != 0; }

 private:
  std::vector<double> dist_;
  std::vector<std::uint32_t> pred_;
  std::vector<char> settled_;
  std::vector<std::uint32_t> touched_;

  void touch(std::uint32_t v) {
    if (dist_[v] == kInfinity) touched_.push_back(v);
  }
  void reset() {
    for (auto v : touched_) {
      dist_[v] = kInfinity;
      pred_[v] = kNoVertex;
      settled_[v] = 0;
    }
    touched_.clear();
  }
};

}  // namespace

ShortestPaths dijkstra_truncated(const MeshGraph& graph, std::uint32_t source, double cutoff) {
  const std::size_t nv = graph.num_vertices();
  if (source >= nv) throw DomainError("dijkstra source " + std::to_string(source) + " out of range");
  if (!(cutoff > 0.0)) throw DomainError("dijkstra cutoff must be positive");

  DijkstraWorkspace ws(nv);
  ShortestPaths out;
  out.source = source;
  out.distances.assign(nv, kInfinity);
  out.predecessors.assign(nv, kNoVertex);
  ws.run(graph, source, cutoff, [&](std::uint32_t v, double d) {
    out.distances[v] = d;
    out.predecessors[v] = ws.predecessor(v);
  });
  return out;
}

std::vector<std::uint32_t> shortest_path(const ShortestPaths& paths, std::uint32_t target) {
  if (target >= paths.distances.size()) throw DomainError("path target out of range");
  if (paths.distances[target] == kInfinity) {
    throw UnreachableError("vertex " + std::to_string(target) + " was not reached from " +
                           std::to_string(paths.source));
  }
  std::vector<std::uint32_t> path;
  for (std::uint32_t v = target; v != kNoVertex; v = paths.predecessors[v]) {
    path.push_back(v);
    if (path.size() > paths.distances.size()) throw Error("predecessor array contains a cycle");
  }
  std::reverse(path.begin(), path.end());
  return path;
}

GeodesicTable GeodesicTable::from_pairs(
    std::size_t num_vertices, double horizon,
    const std::vector<std::pair<std::array<std::uint32_t, 2>, double>>& pairs) {
  std::vector<std::vector<Neighbor>> lists(num_vertices);
  for (const auto& [ij, d] : pairs) {
    const auto [i, j] = ij;
    if (i >= num_vertices || j >= num_vertices || i == j) {
      throw DomainError("geodesic pair (" + std::to_string(i) + ", " + std::to_string(j) + ") is invalid");
    }
    lists[i].push_back({j, d});
    lists[j].push_back({i, d});
  }
  for (auto& l : lists) {
    std::sort(l.begin(), l.end(), [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
  }
  return from_neighbors(horizon, std::move(lists));
}

GeodesicTable GeodesicTable::from_neighbors(double horizon,
                                            std::vector<std::vector<Neighbor>> neighbors) {
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  const std::size_t nv = neighbors.size();
  for (std::size_t i = 0; i < nv; ++i) {
    const auto& list = neighbors[i];
    for (std::size_t k = 0; k < list.size(); ++k) {
      const auto& n = list[k];
      if (n.index >= nv || n.index == i) throw DomainError("geodesic table entry out of range at " + std::to_string(i));
      if (k > 0 && !(list[k - 1].index < n.index)) {
        throw DomainError("geodesic neighbours of " + std::to_string(i) + " not strictly sorted");
      }
      if (!(n.distance > 0.0 && n.distance < horizon)) {
        throw DomainError("geodesic distance outside (0, horizon) at " + std::to_string(i));
      }
      const auto& back = neighbors[n.index];
      auto it = std::lower_bound(back.begin(), back.end(), static_cast<std::uint32_t>(i),
                                 [](const Neighbor& a, std::uint32_t t) { return a.index < t; });
      if (it == back.end() || it->index != i || it->distance != n.distance) {
        throw DomainError("geodesic table is not symmetric at (" + std::to_string(i) + ", " +
                          std::to_string(n.index) + ")");
      }
    }
  }
  GeodesicTable t;
  t.horizon_ = horizon;
  t.neighbors_ = std::move(neighbors);
  t.collect_isolated();
  return t;
}

void GeodesicTable::collect_isolated() {
  isolated_.clear();
  for (std::size_t i = 0; i < neighbors_.size(); ++i) {
    if (neighbors_[i].empty()) isolated_.push_back(static_cast<std::uint32_t>(i));
  }
}

std::size_t GeodesicTable::num_pairs() const {
  std::size_t n = 0;
  for (const auto& l : neighbors_) n += l.size();
  return n / 2;
}

bool GeodesicTable::operator==(const GeodesicTable& o) const {
  if (horizon_ != o.horizon_ || neighbors_.size() != o.neighbors_.size()) return false;
  for (std::size_t i = 0; i < neighbors_.size(); ++i) {
    const auto& a = neighbors_[i];
    const auto& b = o.neighbors_[i];
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k].index != b[k].index || a[k].distance != b[k].distance) return false;
    }
  }
  return true;
}

GeodesicTable build_geodesic_table(const MeshGraph& graph, double horizon, unsigned threads) {
  if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
  const std::size_t nv = graph.num_vertices();
  // upper[i] holds the pairs (i, j) with j > i, found from source i.
  std::vector<std::vector<Neighbor>> upper(nv);

  auto work = [&](std::size_t first, std::size_t stride) {
    DijkstraWorkspace ws(nv);
    for (std::size_t s = first; s < nv; s += stride) {
      const auto src = static_cast<std::uint32_t>(s);
      auto& out = upper[s];
      ws.run(graph, src, horizon, [&](std::uint32_t v, double d) {
        if (v > src) out.push_back({v, d});
      });
      std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(nv, 1))));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }

  std::vector<std::vector<Neighbor>> lists(nv);
  // Ascending source order: for vertex j, lower-index partners arrive sorted,
  // then its own upper list is appended (also sorted, all indices > j).
  for (std::size_t i = 0; i < nv; ++i) {
    for (const auto& n : upper[i]) lists[n.index].push_back({static_cast<std::uint32_t>(i), n.distance});
    lists[i].insert(lists[i].end(), upper[i].begin(), upper[i].end());
  }
  return GeodesicTable::from_neighbors(horizon, std::move(lists));
}

}  // namespace peri
