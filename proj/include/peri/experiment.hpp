#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "peri/config.hpp"
#include "peri/diagnostics.hpp"
#include "peri/mesh.hpp"

namespace peri {

/// Portable uniform double in [0, 1) from the top 53 bits of a 64-bit
/// Mersenne twister draw. std::uniform_real_distribution is avoided because
/// its output differs between standard libraries.
double uniform01(std::mt19937_64& rng);

/// Independent velocities uniform over the solid ball of radius `magnitude`
/// (rejection sampling from the enclosing cube), drawn in vertex order.
VectorField init_random_velocity(const Mesh& mesh, double magnitude, std::uint64_t seed);

struct UniaxialLoad {
  VectorField body_force;
  std::size_t north_count = 0;
  std::size_t south_count = 0;
};

/// Constant load +-magnitude e_z on the vertices within `tolerance` of the
/// poles (0, 0, +-R), R the largest vertex distance from the origin. A vertex
/// equally close to both poles is left unloaded.
/// Throws ConfigError if either pole selects no vertex.
UniaxialLoad init_uniaxial_load(const Mesh& mesh, double magnitude, double tolerance);

enum class Termination { completed, non_convergence, nan_detected };
std::string_view to_string(Termination t);

struct RunResult {
  std::vector<EnergyRecord> records;
  std::vector<std::filesystem::path> snapshots;
  Termination termination = Termination::completed;
  long final_step = 0;     ///< last completed step, or the failing step
  std::string message;     ///< error text when not completed
  std::size_t num_vertices = 0;
  std::size_t num_bonds = 0;  ///< unordered neighbour pairs
  int max_iterations = 0;
  int min_iterations = 0;
  std::size_t loaded_north = 0;  ///< uniaxial runs only
  std::size_t loaded_south = 0;
};

/// Builds mesh, neighbour table, operator and initial data, then integrates
/// to t_end. Writes energy.csv, snapshots and manifest.txt under out_dir
/// unless it is empty. Integration failures end the run with the matching
/// Termination instead of throwing.
RunResult run(const ExperimentConfig& config);

Mesh build_mesh(const ExperimentConfig& config);

}  // namespace peri
