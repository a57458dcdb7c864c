#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "peri/vec3.hpp"

namespace peri {

using Triangle = std::array<std::uint32_t, 3>;
/// Unordered vertex pair stored with first < second.
using Edge = std::array<std::uint32_t, 2>;

/// Closed triangulated surface together with its lumped vertex areas.
///
/// Invariants (checked by make_mesh):
///  - every index is in [0, num_vertices())
///  - every edge is shared by exactly two triangles
///  - every triangle has area >= kMinTriangleArea
///  - vertex_areas partition the total surface area
struct Mesh {
  std::vector<Vec3> positions;
  std::vector<Triangle> triangles;
  std::vector<Edge> edges;
  std::vector<double> vertex_areas;

  std::size_t num_vertices() const { return positions.size(); }
  std::size_t num_triangles() const { return triangles.size(); }
  std::size_t num_edges() const { return edges.size(); }
  long euler_characteristic() const {
    return static_cast<long>(num_vertices()) - static_cast<long>(num_edges()) +
           static_cast<long>(num_triangles());
  }
  double total_area() const;
};

inline constexpr double kMinTriangleArea = 1e-14;

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

/// Unique undirected edges of a triangle list, sorted lexicographically.
/// Throws TopologyError unless every edge is used by exactly two triangles.
std::vector<Edge> extract_edges(std::span<const Triangle> triangles, std::size_t num_vertices);

/// Barycentric lumping: each vertex receives one third of every incident
/// triangle's area.
std::vector<double> area_weights(std::span<const Vec3> positions,
                                 std::span<const Triangle> triangles);
inline std::vector<double> area_weights(const Mesh& mesh) {
  return area_weights(mesh.positions, mesh.triangles);
}

/// Validates connectivity and geometry, derives edges and vertex areas.
Mesh make_mesh(std::vector<Vec3> positions, std::vector<Triangle> triangles);

/// Subdivided icosahedron projected onto a sphere. The base icosahedron has
/// two vertices on the z axis at (0, 0, +-radius).
Mesh generate_icosphere(int subdivisions, double radius);

/// Total area of the surface with every vertex moved by displacement[i].
/// Collapsed triangles contribute zero.
double deformed_area(const Mesh& mesh, std::span<const Vec3> displacement);

/// ASCII OFF reader (triangles only).
Mesh load_off(const std::filesystem::path& path);
Mesh parse_off(std::string_view text);
void write_off(const Mesh& mesh, const std::filesystem::path& path);

/// Point arrays attached to a snapshot. Any span may be empty to omit it.
struct SnapshotFields {
  std::span<const Vec3> displacement;
  std::span<const Vec3> velocity;
  std::span<const double> e_kin_density;
  std::span<const double> e_pot_density;
};

/// Legacy ASCII VTK unstructured grid of the deformed surface
/// (points = positions + displacement, triangle cells of type 5).
void write_vtk(const Mesh& mesh, const SnapshotFields& fields, const std::filesystem::path& path);

/// FNV-1a hash over vertex coordinates and triangle indices.
std::uint64_t mesh_hash(const Mesh& mesh);

}  // namespace peri
