#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "peri/integrator.hpp"
#include "peri/kernel.hpp"
#include "peri/vec3.hpp"

namespace peri {

enum class ExperimentKind { random_velocity, uniaxial_load, custom };

std::string_view to_string(ExperimentKind kind);

/// Everything needed to reproduce one run. Built from a flat `key = value`
/// file; see README for the key list and defaults.
struct ExperimentConfig {
  // Geometry: an OFF file, or an icosphere when mesh_path is empty.
  std::filesystem::path mesh_path;
  int icosphere_level = 3;
  double icosphere_radius = 1.0;

  KernelParams params;
  IntegratorConfig integrator;

  ExperimentKind kind = ExperimentKind::random_velocity;
  std::optional<double> t_end;  ///< defaults per kind, see resolved_t_end()

  double v0_magnitude = 0.1;
  double load_magnitude = 0.001;
  double load_axis_tolerance = 0.05;
  std::uint64_t seed = 1;

  // Uniform fields for the custom experiment.
  Vec3 initial_displacement{};
  Vec3 initial_velocity{};
  Vec3 body_force{};

  std::filesystem::path out_dir = "out";  ///< empty: keep results in memory only
  int snapshot_every = 250;                ///< steps between VTK snapshots, 0 = none
  int record_every = 1;                    ///< steps between energy records
  unsigned threads = 1;
  std::filesystem::path geodesic_cache;    ///< reused when it matches, written otherwise

  double resolved_t_end() const;
  long num_steps() const;
  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Applies one `key = value` assignment. Throws ConfigError on unknown keys
/// or malformed values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Parses the text of a config file. Keys `experiment`, `p` and `alpha` are
/// required; everything else has a default.
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig parse_config(const std::filesystem::path& path);

/// Resolved configuration in the same `key = value` format.
std::string to_config_text(const ExperimentConfig& config);

}  // namespace peri
