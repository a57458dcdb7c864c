#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "peri/errors.hpp"
#include "peri/mesh.hpp"

namespace peri {

namespace {

// Splits into non-empty, non-comment lines ('#' starts a comment).
std::vector<std::string> content_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

[[noreturn]] void fail(std::size_t item, const std::string& msg) {
  throw ParseError("OFF item " + std::to_string(item) + ": " + msg);
}

}  // namespace

Mesh parse_off(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError("OFF: empty input");

  std::istringstream head(lines[0]);
  std::string magic;
  head >> magic;
  if (magic != "OFF") throw ParseError("OFF: missing 'OFF' header, found '" + magic + "'");

  // Counts may share the header line ("OFF 4 4 6") or follow on the next one.
  std::size_t cursor = 1;
  long nv = -1, nf = -1, ne = -1;
  if (!(head >> nv >> nf)) {
    if (lines.size() < 2) throw ParseError("OFF: missing counts line");
    std::istringstream counts(lines[1]);
    if (!(counts >> nv >> nf)) throw ParseError("OFF: malformed counts line '" + lines[1] + "'");
    counts >> ne;
    cursor = 2;
  }
  if (nv <= 0 || nf <= 0) throw ParseError("OFF: vertex and face counts must be positive");
  if (lines.size() < cursor + static_cast<std::size_t>(nv + nf)) {
    throw ParseError("OFF: expected " + std::to_string(nv) + " vertices and " +
                     std::to_string(nf) + " faces, file is truncated");
  }

  std::vector<Vec3> positions(static_cast<std::size_t>(nv));
  for (long i = 0; i < nv; ++i, ++cursor) {
    std::istringstream in(lines[cursor]);
    Vec3& p = positions[static_cast<std::size_t>(i)];
    if (!(in >> p.x >> p.y >> p.z)) fail(cursor, "malformed vertex line '" + lines[cursor] + "'");
  }
  std::vector<Triangle> triangles(static_cast<std::size_t>(nf));
  for (long f = 0; f < nf; ++f, ++cursor) {
    std::istringstream in(lines[cursor]);
    long count = 0;
    long idx[3];
    if (!(in >> count)) fail(cursor, "malformed face line '" + lines[cursor] + "'");
    if (count != 3) fail(cursor, "only triangular faces are supported, got " + std::to_string(count));
    if (!(in >> idx[0] >> idx[1] >> idx[2])) {
      fail(cursor, "malformed face line '" + lines[cursor] + "'");
    }
    for (int k = 0; k < 3; ++k) {
      if (idx[k] < 0 || idx[k] >= nv) fail(cursor, "face index out of range");
      triangles[static_cast<std::size_t>(f)][k] = static_cast<std::uint32_t>(idx[k]);
    }
  }
  return make_mesh(std::move(positions), std::move(triangles));
}

Mesh load_off(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open OFF file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_off(buf.str());
}

void write_off(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  char line[128];
  out << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_triangles() << ' ' << mesh.num_edges()
      << '\n';
  for (const auto& p : mesh.positions) {
    std::snprintf(line, sizeof line, "%.17g %.17g %.17g\n", p.x, p.y, p.z);
    out << line;
  }
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void write_vtk(const Mesh& mesh, const SnapshotFields& fields, const std::filesystem::path& path) {
  const std::size_t nv = mesh.num_vertices();
  auto check = [&](std::size_t n, const char* name) {
    if (n != 0 && n != nv) throw DomainError(std::string("snapshot field '") + name + "' has wrong length");
  };
  check(fields.displacement.size(), "u");
  check(fields.velocity.size(), "v");
  check(fields.e_kin_density.size(), "e_kin_density");
  check(fields.e_pot_density.size(), "e_pot_density");

  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  char line[160];
  out << "# vtk DataFile Version 3.0\nperidynamic surface snapshot\nASCII\n"
      << "DATASET UNSTRUCTURED_GRID\nPOINTS " << nv << " double\n";
  for (std::size_t i = 0; i < nv; ++i) {
    Vec3 p = mesh.positions[i];
    if (!fields.displacement.empty()) p += fields.displacement[i];
    std::snprintf(line, sizeof line, "%.17g %.17g %.17g\n", p.x, p.y, p.z);
    out << line;
  }
  out << "CELLS " << mesh.num_triangles() << ' ' << 4 * mesh.num_triangles() << '\n';
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << mesh.num_triangles() << '\n';
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) out << "5\n";

  out << "POINT_DATA " << nv << '\n';
  auto vectors = [&](std::span<const Vec3> f, const char* name) {
    if (f.empty()) return;
    out << "VECTORS " << name << " double\n";
    for (const auto& v : f) {
      std::snprintf(line, sizeof line, "%.17g %.17g %.17g\n", v.x, v.y, v.z);
      out << line;
    }
  };
  auto scalars = [&](std::span<const double> f, const char* name) {
    if (f.empty()) return;
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double s : f) {
      std::snprintf(line, sizeof line, "%.17g\n", s);
      out << line;
    }
  };
  vectors(fields.displacement, "u");
  vectors(fields.velocity, "v");
  scalars(fields.e_kin_density, "e_kin_density");
  scalars(fields.e_pot_density, "e_pot_density");
}

std::uint64_t mesh_hash(const Mesh& mesh) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::uint64_t counts[2] = {mesh.num_vertices(), mesh.num_triangles()};
  mix(counts, sizeof counts);
  for (const auto& p : mesh.positions) {
    const double c[3] = {p.x, p.y, p.z};
    mix(c, sizeof c);
  }
  for (const auto& t : mesh.triangles) mix(t.data(), sizeof(std::uint32_t) * 3);
  return h;
}

}  // namespace peri
