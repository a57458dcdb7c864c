#include <cstring>
#include <fstream>

#include "peri/errors.hpp"
#include "peri/geodesic.hpp"

// Layout (native little-endian):
//   char[8]  "PERIGEO1"
//   u64      mesh key
//   f64      horizon
//   u64      vertex count
//   per vertex: u64 count, then count x (u32 index, f64 distance)

namespace peri {

namespace {

constexpr char kMagic[8] = {'P', 'E', 'R', 'I', 'G', 'E', 'O', '1'};

template <class T>
void put(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::ifstream& in, const std::filesystem::path& path) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw ParseError("geodesic cache " + path.string() + " is truncated");
  }
  return value;
}

}  // namespace

void save_geodesic_table(const GeodesicTable& table, std::uint64_t mesh_key,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write geodesic cache " + path.string());
  out.write(kMagic, sizeof kMagic);
  put(out, mesh_key);
  put(out, table.horizon());
  put(out, static_cast<std::uint64_t>(table.num_vertices()));
  for (const auto& list : table.all_neighbors()) {
    put(out, static_cast<std::uint64_t>(list.size()));
    for (const auto& n : list) {
      put(out, n.index);
      put(out, n.distance);
    }
  }
  if (!out) throw Error("failed writing geodesic cache " + path.string());
}

GeodesicTable load_geodesic_table(const std::filesystem::path& path, std::uint64_t mesh_key,
                                  double horizon) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open geodesic cache " + path.string());
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw ParseError(path.string() + " is not a geodesic cache file");
  }
  const auto key = get<std::uint64_t>(in, path);
  const auto stored_horizon = get<double>(in, path);
  if (key != mesh_key) throw Error("geodesic cache " + path.string() + " was built for a different mesh");
  if (stored_horizon != horizon) {
    throw Error("geodesic cache " + path.string() + " was built for horizon " +
                std::to_string(stored_horizon));
  }
  const auto nv = get<std::uint64_t>(in, path);
  std::vector<std::vector<Neighbor>> lists(nv);
  for (auto& list : lists) {
    const auto count = get<std::uint64_t>(in, path);
    if (count >= nv) throw ParseError("geodesic cache " + path.string() + " has a corrupt count");
    list.resize(count);
    for (auto& n : list) {
      n.index = get<std::uint32_t>(in, path);
      n.distance = get<double>(in, path);
    }
  }
  return GeodesicTable::from_neighbors(horizon, std::move(lists));
}

}  // namespace peri
