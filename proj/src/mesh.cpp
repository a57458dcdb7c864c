#include "peri/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "peri/errors.hpp"

namespace peri {

double Mesh::total_area() const {
  double sum = 0.0;
  for (double a : vertex_areas) sum += a;
  return sum;
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * norm(cross(b - a, c - a));
}

std::vector<Edge> extract_edges(std::span<const Triangle> triangles, std::size_t num_vertices) {
  std::vector<Edge> half;
  half.reserve(3 * triangles.size());
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    for (int k = 0; k < 3; ++k) {
      const std::uint32_t a = tri[k];
      const std::uint32_t b = tri[(k + 1) % 3];
      if (a >= num_vertices || b >= num_vertices) {
        throw TopologyError("triangle " + std::to_string(t) + " references vertex out of range");
      }
      if (a == b) {
        throw TopologyError("triangle " + std::to_string(t) + " repeats a vertex");
      }
      half.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  std::sort(half.begin(), half.end());

  std::vector<Edge> edges;
  edges.reserve(half.size() / 2);
  for (std::size_t i = 0; i < half.size();) {
    std::size_t j = i;
    while (j < half.size() && half[j] == half[i]) ++j;
    if (j - i != 2) {
      throw TopologyError("edge (" + std::to_string(half[i][0]) + ", " +
                          std::to_string(half[i][1]) + ") is shared by " + std::to_string(j - i) +
                          " triangles; a closed manifold needs exactly 2");
    }
    edges.push_back(half[i]);
    i = j;
  }
  return edges;
}

std::vector<double> area_weights(std::span<const Vec3> positions,
                                 std::span<const Triangle> triangles) {
  std::vector<double> areas(positions.size(), 0.0);
  for (const auto& tri : triangles) {
    const double third =
        triangle_area(positions[tri[0]], positions[tri[1]], positions[tri[2]]) / 3.0;
    for (auto v : tri) areas[v] += third;
  }
  return areas;
}

Mesh make_mesh(std::vector<Vec3> positions, std::vector<Triangle> triangles) {
  if (positions.empty() || triangles.empty()) {
    throw TopologyError("mesh needs at least one vertex and one triangle");
  }
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!is_finite(positions[i])) {
      throw ParseError("vertex " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
  Mesh mesh;
  mesh.edges = extract_edges(triangles, positions.size());
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    const double area = triangle_area(positions[tri[0]], positions[tri[1]], positions[tri[2]]);
    if (!(area >= kMinTriangleArea)) {
      throw DegenerateTriangleError("triangle " + std::to_string(t) + " has area " +
                                    std::to_string(area));
    }
  }
  mesh.vertex_areas = area_weights(positions, triangles);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (mesh.vertex_areas[i] == 0.0) {
      throw TopologyError("vertex " + std::to_string(i) + " is not used by any triangle");
    }
  }
  mesh.positions = std::move(positions);
  mesh.triangles = std::move(triangles);
  return mesh;
}

namespace {

Vec3 on_sphere(const Vec3& p, double radius) { return p * (radius / norm(p)); }

}  // namespace

Mesh generate_icosphere(int subdivisions, double radius) {
  if (subdivisions < 0 || subdivisions > 7) {
    throw DomainError("icosphere subdivisions must lie in [0, 7], got " +
                      std::to_string(subdivisions));
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw DomainError("icosphere radius must be positive");
  }

  // Poles on the z axis, two staggered rings of five at z = +-1/sqrt(5).
  std::vector<Vec3> pos;
  pos.reserve(12);
  const double pi = std::acos(-1.0);
  const double zr = 1.0 / std::sqrt(5.0);
  const double rr = 2.0 / std::sqrt(5.0);
  pos.push_back({0.0, 0.0, 1.0});
  for (int k = 0; k < 5; ++k) {
    const double phi = 2.0 * pi * k / 5.0;
    pos.push_back({rr * std::cos(phi), rr * std::sin(phi), zr});
  }
  for (int k = 0; k < 5; ++k) {
    const double phi = 2.0 * pi * k / 5.0 + pi / 5.0;
    pos.push_back({rr * std::cos(phi), rr * std::sin(phi), -zr});
  }
  pos.push_back({0.0, 0.0, -1.0});
  for (auto& p : pos) p = p * radius;

  std::vector<Triangle> tris;
  tris.reserve(20);
  for (std::uint32_t k = 0; k < 5; ++k) {
    const std::uint32_t u0 = 1 + k, u1 = 1 + (k + 1) % 5;
    const std::uint32_t l0 = 6 + k, l1 = 6 + (k + 1) % 5;
    tris.push_back({0, u0, u1});
    tris.push_back({u0, l0, u1});
    tris.push_back({u1, l0, l1});
    tris.push_back({11, l1, l0});
  }

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoint;
    auto mid = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const auto idx = static_cast<std::uint32_t>(pos.size());
      pos.push_back(on_sphere((pos[a] + pos[b]) * 0.5, radius));
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<Triangle> next;
    next.reserve(4 * tris.size());
    for (const auto& t : tris) {
      const auto ab = mid(t[0], t[1]);
      const auto bc = mid(t[1], t[2]);
      const auto ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
  return make_mesh(std::move(pos), std::move(tris));
}

double deformed_area(const Mesh& mesh, std::span<const Vec3> displacement) {
  if (displacement.size() != mesh.num_vertices()) {
    throw DomainError("displacement field has " + std::to_string(displacement.size()) +
                      " entries, mesh has " + std::to_string(mesh.num_vertices()) + " vertices");
  }
  double total = 0.0;
  for (const auto& t : mesh.triangles) {
    const double a = triangle_area(mesh.positions[t[0]] + displacement[t[0]],
                                   mesh.positions[t[1]] + displacement[t[1]],
                                   mesh.positions[t[2]] + displacement[t[2]]);
    total += a;
  }
  return total;
}

}  // namespace peri
