#include "peri/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>

#include "peri/errors.hpp"
#include "peri/geodesic.hpp"
#include "peri/integrator.hpp"

namespace peri {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

VectorField init_random_velocity(const Mesh& mesh, double magnitude, std::uint64_t seed) {
  if (!(magnitude >= 0.0)) throw DomainError("velocity magnitude must be non-negative");
  std::mt19937_64 rng(seed);
  VectorField v(mesh.num_vertices());
  for (auto& vi : v) {
    Vec3 s;
    do {
      s = {2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0};
    } while (norm2(s) > 1.0);
    vi = s * magnitude;
  }
  return v;
}

UniaxialLoad init_uniaxial_load(const Mesh& mesh, double magnitude, double tolerance) {
  if (!(magnitude >= 0.0)) throw ConfigError("load magnitude must be non-negative");
  if (!(tolerance > 0.0)) throw ConfigError("load axis tolerance must be positive");
  double radius = 0.0;
  for (const auto& p : mesh.positions) radius = std::max(radius, norm(p));
  const Vec3 north{0.0, 0.0, radius};
  const Vec3 south{0.0, 0.0, -radius};

  UniaxialLoad load;
  load.body_force.assign(mesh.num_vertices(), Vec3{});
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
    const double dn = norm(mesh.positions[i] - north);
    const double ds = norm(mesh.positions[i] - south);
    if (dn <= tolerance && dn < ds) {
      load.body_force[i] = {0.0, 0.0, magnitude};
      ++load.north_count;
    } else if (ds <= tolerance && ds < dn) {
      load.body_force[i] = {0.0, 0.0, -magnitude};
      ++load.south_count;
    }
  }
  if (load.north_count == 0 || load.south_count == 0) {
    throw ConfigError("uniaxial load selects no vertex within " + std::to_string(tolerance) +
                      " of " + (load.north_count == 0 ? "the north" : "the south") + " pole");
  }
  return load;
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::non_convergence: return "non_convergence";
    case Termination::nan_detected: return "nan_detected";
  }
  return "unknown";
}

Mesh build_mesh(const ExperimentConfig& config) {
  if (!config.mesh_path.empty()) return load_off(config.mesh_path);
  return generate_icosphere(config.icosphere_level, config.icosphere_radius);
}

namespace {

GeodesicTable neighbour_table(const ExperimentConfig& config, const Mesh& mesh) {
  const double horizon = config.params.horizon;
  const auto key = mesh_hash(mesh);
  if (!config.geodesic_cache.empty() && std::filesystem::exists(config.geodesic_cache)) {
    try {
      return load_geodesic_table(config.geodesic_cache, key, horizon);
    } catch (const Error& e) {
      std::cerr << "warning: ignoring geodesic cache: " << e.what() << '\n';
    }
  }
  GeodesicTable table = build_geodesic_table(build_graph(mesh), horizon, config.threads);
  if (!config.geodesic_cache.empty()) save_geodesic_table(table, key, config.geodesic_cache);
  return table;
}

std::string snapshot_name(long step) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "snapshot_%06ld.vtk", step);
  return buf;
}

}  // namespace

RunResult run(const ExperimentConfig& config) {
  config.validate();
  const Mesh mesh = build_mesh(config);
  const std::size_t nv = mesh.num_vertices();
  const GeodesicTable table = neighbour_table(config, mesh);
  if (!table.isolated_vertices().empty()) {
    std::cerr << "warning: " << table.isolated_vertices().size()
              << " vertices have no neighbour within delta = " << config.params.horizon << '\n';
  }
  const PeridynamicOperator op(table, mesh.vertex_areas, config.params);

  RunResult result;
  State state;
  state.u.assign(nv, Vec3{});
  state.v.assign(nv, Vec3{});
  VectorField body(nv);
  switch (config.kind) {
    case ExperimentKind::random_velocity:
      state.v = init_random_velocity(mesh, config.v0_magnitude, config.seed);
      break;
    case ExperimentKind::uniaxial_load:
    {
      auto load = init_uniaxial_load(mesh, config.load_magnitude, config.load_axis_tolerance);
      result.loaded_north = load.north_count;
      result.loaded_south = load.south_count;
      body = std::move(load.body_force);
      break;
    }
    case ExperimentKind::custom:
      state.u.assign(nv, config.initial_displacement);
      state.v.assign(nv, config.initial_velocity);
      body.assign(nv, config.body_force);
      break;
  }

  const AccelerationFn forces = [&](std::span<const Vec3> u, double, std::span<Vec3> a) {
    op.acceleration(u, body, a);
  };

  result.num_vertices = nv;
  result.num_bonds = table.num_pairs();
  result.min_iterations = std::numeric_limits<int>::max();

  const bool write_files = !config.out_dir.empty();
  std::optional<EnergyCsvWriter> csv;
  if (write_files) {
    std::filesystem::create_directories(config.out_dir);
    csv.emplace(config.out_dir / "energy.csv");
  }

  const double rho_bar = bound_density(config.params.rho);
  const double b_norm = weighted_l2(body, mesh.vertex_areas);
  const double s0 = deformed_area(mesh, VectorField(nv));

  auto measure = [&](const State& s, const StepReport& report, double bound) {
    EnergyRecord r;
    r.t = s.t;
    r.e_kin = kinetic_energy(s.v, mesh.vertex_areas, config.params.rho);
    r.e_pot = op.potential_energy(s.u);
    r.e_total = r.e_kin + r.e_pot;
    r.dissipation_bound = bound;
    r.delta_s = (deformed_area(mesh, s.u) - s0) / s0;
    r.iterations = report.iterations;
    r.residual = report.final_residual;
    return r;
  };
  auto snapshot = [&](const State& s, long n) {
    if (!write_files || config.snapshot_every == 0 || n % config.snapshot_every != 0) return;
    const DensityField dens = energy_densities(s.u, s.v, op);
    const auto path = config.out_dir / snapshot_name(n);
    write_vtk(mesh, {s.u, s.v, dens.e_kin_density, dens.e_pot_density}, path);
    result.snapshots.push_back(path);
  };
  auto fail = [&](Termination why, long n, const std::string& msg) {
    result.termination = why;
    result.final_step = n;
    result.message = msg;
  };

  const long steps = config.num_steps();
  const double dt = config.integrator.dt;
  try {
    state.a = initial_acceleration(state.u, 0.0, forces);
  } catch (const NonFiniteError& e) {
    fail(Termination::nan_detected, 0, e.what());
  }

  if (result.termination == Termination::completed) {
    EnergyRecord first = measure(state, StepReport{}, 0.0);
    DissipationBound bound(first.e_total, rho_bar, 0.0, b_norm);
    first.dissipation_bound = bound.value();
    result.records.push_back(first);
    if (csv) csv->write(first);
    snapshot(state, 0);

    for (long n = 1; n <= steps; ++n) {
      StepReport report;
      try {
        auto [next, rep] = step(state, forces, mesh.vertex_areas, config.integrator);
        state = std::move(next);
        report = rep;
      } catch (const NonConvergenceError& e) {
        fail(Termination::non_convergence, n, e.what());
        break;
      } catch (const NonFiniteError& e) {
        fail(Termination::nan_detected, n, e.what());
        break;
      }
      state.t = static_cast<double>(n) * dt;
      bound.advance(state.t, b_norm);
      result.max_iterations = std::max(result.max_iterations, report.iterations);
      result.min_iterations = std::min(result.min_iterations, report.iterations);
      result.final_step = n;

      if (n % config.record_every == 0 || n == steps) {
        const EnergyRecord r = measure(state, report, bound.value());
        result.records.push_back(r);
        if (csv) csv->write(r);
        if (!std::isfinite(r.e_total) || !std::isfinite(r.delta_s)) {
          fail(Termination::nan_detected, n, "energy or surface stretch is not finite");
          break;
        }
      }
      snapshot(state, n);
    }
  }
  if (result.min_iterations == std::numeric_limits<int>::max()) result.min_iterations = 0;

  if (write_files) {
    csv->flush();
    std::ofstream manifest(config.out_dir / "manifest.txt");
    manifest << to_config_text(config) << "# vertices = " << nv
             << "\n# neighbour pairs = " << result.num_bonds
             << "\n# termination = " << to_string(result.termination)
             << "\n# final_step = " << result.final_step
             << "\n# iterations = " << result.min_iterations << ".." << result.max_iterations << '\n';
    if (config.kind == ExperimentKind::uniaxial_load) {
      manifest << "# loaded vertices = " << result.loaded_north << " north, " << result.loaded_south
               << " south\n";
    }
    if (!result.message.empty()) manifest << "# message = " << result.message << '\n';
  }
  return result;
}

}  // namespace peri
