// Command line front end: run, sweep, geodesic-table, mesh-info.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "peri/config.hpp"
#include "peri/errors.hpp"
#include "peri/experiment.hpp"
#include "peri/geodesic.hpp"
#include "peri/mesh.hpp"

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::optional<int> snapshots;
  bool strict_predictor = false;
  std::optional<unsigned> threads;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "RNG seed for random initial velocities");
    cmd->add_option("--out-dir", out_dir, "output directory");
    cmd->add_option("--snapshots", snapshots, "steps between VTK snapshots (0 disables)");
    cmd->add_flag("--strict-paper-predictor", strict_predictor,
                  "use the (1 + gamma) velocity predictor");
    cmd->add_option("--threads", threads, "worker threads for the neighbour table");
  }

  void apply(peri::ExperimentConfig& c) const {
    if (seed) c.seed = *seed;
    if (!out_dir.empty()) c.out_dir = out_dir;
    if (snapshots) c.snapshot_every = *snapshots;
    if (strict_predictor) c.integrator.strict_paper_predictor = true;
    if (threads) c.threads = *threads;
  }
};

// "icosphere:LEVEL[:RADIUS]" or a path to an OFF file.
peri::Mesh mesh_from_arg(const std::string& arg) {
  const std::string prefix = "icosphere:";
  if (arg.rfind(prefix, 0) != 0) return peri::load_off(arg);
  const std::string rest = arg.substr(prefix.size());
  const auto colon = rest.find(':');
  const int level = std::stoi(rest.substr(0, colon));
  const double radius = colon == std::string::npos ? 1.0 : std::stod(rest.substr(colon + 1));
  return peri::generate_icosphere(level, radius);
}

int report(const peri::ExperimentConfig& config, const peri::RunResult& r, double seconds) {
  std::printf("%s: %s after %ld steps (%zu vertices, %zu pairs, iterations %d..%d, %.1f s)\n",
              config.out_dir.string().c_str(), std::string(peri::to_string(r.termination)).c_str(),
              r.final_step, r.num_vertices, r.num_bonds, r.min_iterations, r.max_iterations, seconds);
  if (!r.message.empty()) std::printf("  %s\n", r.message.c_str());
  return r.termination == peri::Termination::completed ? 0 : 2;
}

int run_one(const peri::ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const auto result = peri::run(config);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report(config, result, seconds);
}

// Cartesian product of all --vary settings.
void expand(const std::vector<std::pair<std::string, std::vector<std::string>>>& axes, std::size_t k,
            peri::ExperimentConfig config, const std::string& tag,
            std::vector<std::pair<std::string, peri::ExperimentConfig>>& out) {
  if (k == axes.size()) {
    out.emplace_back(tag, std::move(config));
    return;
  }
  for (const auto& value : axes[k].second) {
    peri::ExperimentConfig c = config;
    peri::apply_setting(c, axes[k].first, value);
    expand(axes, k + 1, std::move(c), tag + (tag.empty() ? "" : "_") + axes[k].first + "=" + value, out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear peridynamics on closed triangulated surfaces"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides overrides;
  auto* run_cmd = app.add_subcommand("run", "run one experiment from a config file");
  run_cmd->add_option("config", config_path, "config file")->required();
  overrides.add_to(run_cmd);

  std::string sweep_config;
  std::vector<std::string> vary;
  Overrides sweep_overrides;
  auto* sweep_cmd = app.add_subcommand("sweep", "run the cartesian product of parameter values");
  sweep_cmd->add_option("config", sweep_config, "base config file")->required();
  sweep_cmd->add_option("--vary", vary, "key=v1,v2,... (repeatable)")->required();
  sweep_overrides.add_to(sweep_cmd);

  std::string table_mesh, table_out;
  double table_delta = 0.5;
  unsigned table_threads = 1;
  auto* table_cmd = app.add_subcommand("geodesic-table", "build and cache the neighbour table");
  table_cmd->add_option("mesh", table_mesh, "OFF file or icosphere:LEVEL[:RADIUS]")->required();
  table_cmd->add_option("--delta", table_delta, "horizon")->required();
  table_cmd->add_option("--out", table_out, "cache file")->required();
  table_cmd->add_option("--threads", table_threads, "worker threads");

  std::string info_mesh;
  auto* info_cmd = app.add_subcommand("mesh-info", "print mesh counts and areas");
  info_cmd->add_option("mesh", info_mesh, "OFF file or icosphere:LEVEL[:RADIUS]")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      auto config = peri::parse_config(config_path);
      overrides.apply(config);
      config.validate();
      return run_one(config);
    }
    if (*sweep_cmd) {
      auto base = peri::parse_config(sweep_config);
      sweep_overrides.apply(base);
      std::vector<std::pair<std::string, std::vector<std::string>>> axes;
      for (const auto& spec : vary) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) throw peri::ConfigError("--vary expects key=v1,v2,... got '" + spec + "'");
        std::vector<std::string> values;
        std::size_t start = eq + 1;
        while (start <= spec.size()) {
          const auto comma = spec.find(',', start);
          values.push_back(spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
        axes.emplace_back(spec.substr(0, eq), std::move(values));
      }
      std::vector<std::pair<std::string, peri::ExperimentConfig>> runs;
      expand(axes, 0, base, "", runs);
      int status = 0;
      for (auto& [tag, config] : runs) {
        if (!base.out_dir.empty()) config.out_dir = base.out_dir / tag;
        config.validate();
        status = std::max(status, run_one(config));
      }
      return status;
    }
    if (*table_cmd) {
      const auto mesh = mesh_from_arg(table_mesh);
      const auto table = peri::build_geodesic_table(peri::build_graph(mesh), table_delta, table_threads);
      peri::save_geodesic_table(table, peri::mesh_hash(mesh), table_out);
      std::size_t lo = table.num_vertices(), hi = 0;
      for (std::size_t i = 0; i < table.num_vertices(); ++i) {
        lo = std::min(lo, table.neighbors(i).size());
        hi = std::max(hi, table.neighbors(i).size());
      }
      std::printf("%zu vertices, %zu pairs within %g, neighbours per vertex %zu..%zu -> %s\n",
                  table.num_vertices(), table.num_pairs(), table_delta, lo, hi, table_out.c_str());
      if (!table.isolated_vertices().empty()) {
        std::fprintf(stderr, "warning: %zu vertices have no neighbour within delta\n",
                     table.isolated_vertices().size());
      }
      return 0;
    }
    if (*info_cmd) {
      const auto mesh = mesh_from_arg(info_mesh);
      double emin = 1e300, emax = 0.0;
      for (const auto& e : mesh.edges) {
        const double len = peri::norm(mesh.positions[e[1]] - mesh.positions[e[0]]);
        emin = std::min(emin, len);
        emax = std::max(emax, len);
      }
      std::printf("vertices %zu\nedges %zu\ntriangles %zu\neuler %ld\narea %.17g\nedge length %.6g..%.6g\n",
                  mesh.num_vertices(), mesh.num_edges(), mesh.num_triangles(),
                  mesh.euler_characteristic(), mesh.total_area(), emin, emax);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
