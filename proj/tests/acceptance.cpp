// Acceptance checks for the simulation engine. Each criterion prints one
// line starting with [PASS] or [FAIL]. Pass criterion numbers as arguments
// to run a subset; the exit code is non-zero if any selected check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "peri/config.hpp"
#include "peri/experiment.hpp"
#include "peri/geodesic.hpp"
#include "peri/integrator.hpp"
#include "peri/kernel.hpp"
#include "peri/mesh.hpp"

using namespace peri;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentConfig make_config(ExperimentKind kind, double p, double alpha) {
  ExperimentConfig c;
  c.kind = kind;
  c.params.p = p;
  c.params.alpha = alpha;
  c.icosphere_level = 3;
  c.icosphere_radius = 1.0;
  c.seed = 1;
  c.out_dir.clear();
  c.snapshot_every = 0;
  return c;
}

ExperimentConfig random_velocity(double p, double alpha, double v0, double t_end) {
  auto c = make_config(ExperimentKind::random_velocity, p, alpha);
  c.v0_magnitude = v0;
  c.t_end = t_end;
  return c;
}

ExperimentConfig uniaxial(double alpha) {
  auto c = make_config(ExperimentKind::uniaxial_load, 2.0, alpha);
  c.load_magnitude = 0.001;
  c.load_axis_tolerance = 0.05;
  c.t_end = 10.0;
  return c;
}

// Mean spacing of the strict local maxima of delta_s.
double mean_peak_gap(const std::vector<EnergyRecord>& r, int* count) {
  std::vector<double> peaks;
  for (std::size_t k = 1; k + 1 < r.size(); ++k) {
    if (r[k].delta_s > r[k - 1].delta_s && r[k].delta_s >= r[k + 1].delta_s) peaks.push_back(r[k].t);
  }
  *count = static_cast<int>(peaks.size());
  if (peaks.size() < 2) return NAN;
  return (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

double max_delta_s(const std::vector<EnergyRecord>& r, double t_max = INFINITY) {
  double m = -INFINITY;
  for (const auto& x : r)
    if (x.t <= t_max + 1e-12) m = std::max(m, x.delta_s);
  return m;
}

const EnergyRecord& record_at(const std::vector<EnergyRecord>& r, double t) {
  return *std::min_element(r.begin(), r.end(), [t](const EnergyRecord& a, const EnergyRecord& b) {
    return std::abs(a.t - t) < std::abs(b.t - t);
  });
}

bool within(double x, double target, double rel) { return std::abs(x - target) <= rel * target; }

Outcome c1_periods() {
  const std::pair<double, double> cases[] = {{0.0001, 1.26}, {0.5, 0.61}, {0.999, 0.265}};
  bool ok = true;
  std::string detail;
  for (auto [alpha, target] : cases) {
    const auto res = run(random_velocity(2.0, alpha, 0.1, 3.0));
    int n = 0;
    const double gap = mean_peak_gap(res.records, &n);
    const bool good = res.termination == Termination::completed && within(gap, target, 0.15);
    ok = ok && good;
    detail += fmt("alpha=%g period=%.4f (target %.3f +-15%%, %d maxima)%s; ", alpha, gap, target, n,
                  good ? "" : " out of band");
  }
  return {ok, detail};
}

Outcome c2_iterations() {
  std::string detail;
  const auto base = run(random_velocity(2.0, 0.0001, 0.1, 3.0));
  const bool base_ok = base.termination == Termination::completed && base.min_iterations >= 2 &&
                       base.max_iterations <= 4;
  detail += fmt("baseline iterations %d..%d (need 2..4); ", base.min_iterations, base.max_iterations);

  std::vector<ExperimentConfig> all;
  for (double p : {2.0, 3.0, 5.0})
    for (double alpha : {0.0001, 0.5, 0.999})
      for (double v0 : {0.1, 0.5, 1.0}) all.push_back(random_velocity(p, alpha, v0, 1.0));
  for (double alpha : {0.5, 0.999}) all.push_back(random_velocity(2.0, alpha, 0.1, 3.0));
  for (double alpha : {0.0001, 0.5, 0.75, 0.999}) all.push_back(uniaxial(alpha));

  int lo = base.min_iterations, hi = base.max_iterations, completed = 1, below = 0;
  for (const auto& c : all) {
    const auto r = run(c);
    if (r.termination != Termination::completed) continue;
    ++completed;
    lo = std::min(lo, r.min_iterations);
    hi = std::max(hi, r.max_iterations);
    if (r.min_iterations < 2) ++below;
  }
  const bool sweep_ok = lo >= 2 && hi <= 8;
  detail += fmt("all %d completed runs %d..%d (need 2..8), %d runs with 1-iteration steps", completed,
                lo, hi, below);
  return {base_ok && sweep_ok, detail};
}

Outcome c3_dissipation() {
  int completed = 0, nan_runs = 0, violations = 0, bad_termination = 0;
  double worst = 0.0;
  for (double p : {2.0, 3.0, 5.0})
    for (double alpha : {0.0001, 0.5, 0.999})
      for (double v0 : {0.1, 0.5, 1.0}) {
        const auto r = run(random_velocity(p, alpha, v0, 1.0));
        if (r.termination == Termination::nan_detected) {
          ++nan_runs;
        } else if (r.termination != Termination::completed) {
          ++bad_termination;
        } else {
          ++completed;
        }
        const double e0 = r.records.front().e_total;
        for (const auto& x : r.records) {
          if (!std::isfinite(x.e_total)) continue;
          worst = std::max(worst, x.e_total / e0 - 1.0);
          if (x.e_total > e0 * (1 + 1e-6)) ++violations;
        }
      }
  return {violations == 0 && bad_termination == 0,
          fmt("%d completed, %d nan_detected, %d other terminations, %d rows above e0(1+1e-6), "
              "max relative rise %.3e",
              completed, nan_runs, bad_termination, violations, worst)};
}

Outcome c4_fracture() {
  const auto frac = run(random_velocity(5.0, 0.0001, 1.0, 3.0));
  const auto base = run(random_velocity(2.0, 0.0001, 0.1, 3.0));
  const double early = max_delta_s(frac.records, 0.3);
  const double ref = max_delta_s(base.records);
  const double e05 = record_at(frac.records, 0.05).e_pot, e30 = record_at(frac.records, 0.3).e_pot;
  const bool ok = early > 10 * ref && e30 >= 10 * e05;
  return {ok, fmt("max dS[0,0.3] = %.4e vs 10 x baseline %.4e; e_pot(0.3)/e_pot(0.05) = %.1f (need >= 10); "
                  "fracture run %s",
                  early, 10 * ref, e30 / e05, std::string(to_string(frac.termination)).c_str())};
}

Outcome c5_uniaxial() {
  const std::pair<double, double> banded[] = {{0.5, 3.75e-5}, {0.75, 1.65e-5}, {0.999, 0.8e-5}};
  std::string detail;
  bool ok = true;
  double prev = INFINITY;
  bool monotone = true;
  for (auto [alpha, target] : banded) {
    const auto r = run(uniaxial(alpha));
    const double peak = max_delta_s(r.records);
    const bool good = within(peak, target, 0.25);
    ok = ok && good;
    monotone = monotone && peak < prev;
    prev = peak;
    detail += fmt("alpha=%g peak=%.3e (target %.3e +-25%%); ", alpha, peak, target);
  }
  const auto low = run(uniaxial(0.0001));
  const double peak = max_delta_s(low.records);
  const bool low_ok = within(peak, 1.8e-4, 0.5);
  detail += fmt("alpha=0.0001 peak=%.3e (target 1.8e-4 +-50%%); monotone=%s", peak,
                monotone ? "yes" : "no");
  return {ok && monotone && low_ok, detail};
}

Outcome c6_geodesic() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<Mesh> meshes;
  meshes.push_back(parse_off(peri::testing::kTetrahedronOff));
  meshes.push_back(peri::testing::unit_octahedron());
  for (int level = 0; level <= 2; ++level) meshes.push_back(generate_icosphere(level, 1.0));
  double worst = 0.0;
  for (const auto& m : meshes) {
    const auto fw = peri::testing::floyd_warshall(m);
    const auto g = build_graph(m);
    for (std::uint32_t s = 0; s < m.num_vertices(); ++s) {
      const auto sp = dijkstra_truncated(g, s);
      for (std::size_t t = 0; t < m.num_vertices(); ++t)
        worst = std::max(worst, std::abs(sp.distances[t] - fw[s][t]));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-12 && secs < 10.0,
          fmt("%zu meshes (nv <= 162), max |dijkstra - floyd_warshall| = %.2e, %.2f s", meshes.size(),
              worst, secs)};
}

Outcome c7_gradient() {
  const Mesh m = generate_icosphere(1, 1.0);
  const auto table = build_geodesic_table(build_graph(m), 0.9);
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (double p : {2.0, 3.0, 5.0})
    for (double alpha : {0.0001, 0.5, 0.999}) {
      KernelParams k;
      k.p = p;
      k.alpha = alpha;
      k.horizon = 0.9;
      const PeridynamicOperator op(table, m.vertex_areas, k);
      for (int trial = 0; trial < 10; ++trial) {
        const VectorField u = peri::testing::random_field(m.num_vertices(), 0.05, rng);
        const VectorField grad = peri::testing::fd_gradient(
            [&](const VectorField& x) { return op.potential_energy(x); }, u, 1e-6);
        const VectorField f = op.force(u);
        double err = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
          const Vec3 lhs = m.vertex_areas[i] * f[i];
          err = std::max(err, norm(lhs + grad[i]));
          scale = std::max(scale, norm(lhs));
        }
        worst = std::max(worst, err / scale);
      }
    }
  return {worst < 1e-5, fmt("icosphere(1), delta=0.9, 90 states: max relative error %.3e (need < 1e-5)", worst)};
}

Outcome c8_momentum_translation() {
  const Mesh m = generate_icosphere(3, 1.0);
  const auto table = build_geodesic_table(build_graph(m), 0.5);
  std::mt19937_64 rng(13);
  double worst = 0.0;
  int mismatches = 0, trials = 0;
  for (double p : {2.0, 3.0, 5.0}) {
    KernelParams k;
    k.p = p;
    const PeridynamicOperator op(table, m.vertex_areas, k);
    for (int trial = 0; trial < 5; ++trial, ++trials) {
      VectorField u = peri::testing::random_field(m.num_vertices(), 0.2, rng);
      for (auto& x : u)
        x = {std::ldexp(std::round(std::ldexp(x.x, 12)), -12), std::ldexp(std::round(std::ldexp(x.y, 12)), -12),
             std::ldexp(std::round(std::ldexp(x.z, 12)), -12)};
      const VectorField f = op.force(u);
      Vec3 total{};
      double abs_sum = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        total += m.vertex_areas[i] * f[i];
        abs_sum += norm(m.vertex_areas[i] * f[i]);
      }
      worst = std::max(worst, norm(total) / abs_sum);
      const Vec3 c{std::ldexp(static_cast<double>(rng() % 64) - 32.0, -3),
                   std::ldexp(static_cast<double>(rng() % 64) - 32.0, -3), 0.5};
      VectorField shifted = u;
      for (auto& x : shifted) x += c;
      if (op.force(shifted) != f) ++mismatches;
    }
  }
  return {worst <= 1e-10 && mismatches == 0,
          fmt("%d states: max |sum dA K| / sum |dA K| = %.2e, translated force mismatches: %d", trials, worst,
              mismatches)};
}

Outcome c9_order() {
  const auto table = GeodesicTable::from_pairs(2, 2.0, {{{0, 1}, 1.0}});
  const std::vector<double> areas{1.0, 1.0};
  KernelParams k;
  k.horizon = 2.0;
  const PeridynamicOperator op(table, areas, k);
  const AccelerationFn f = [&](std::span<const Vec3> u, double, std::span<Vec3> out) {
    op.acceleration(u, {}, out);
  };
  const peri::testing::HarmonicOscillator exact{std::sqrt(2.0), 0.1, 0.0};
  auto error = [&](double dt) {
    IntegratorConfig cfg;
    cfg.dt = dt;
    cfg.eps = 1e-14;
    State s{0.0, {{0, 0, 0}, {0.1, 0, 0}}, {{0, 0, 0}, {0, 0, 0}}, {}};
    s.a = initial_acceleration(s.u, 0.0, f);
    double e = 0.0;
    const long n = std::lround(5.0 / dt);
    for (long i = 1; i <= n; ++i) {
      s = step(s, f, areas, cfg).first;
      e = std::max(e, std::abs(s.u[1].x - s.u[0].x - exact.position(i * dt)));
    }
    return e;
  };
  const double e1 = error(0.02), e2 = error(0.01), e3 = error(0.005);
  const double r1 = e1 / e2, r2 = e2 / e3;
  return {r1 >= 3.5 && r1 <= 4.5 && r2 >= 3.5 && r2 <= 4.5,
          fmt("errors %.3e %.3e %.3e, ratios %.3f %.3f (need [3.5, 4.5])", e1, e2, e3, r1, r2)};
}

Outcome c10_determinism() {
  const auto root = std::filesystem::temp_directory_path() / "peri_acceptance_c10";
  std::filesystem::remove_all(root);
  std::string csv[2];
  for (int k = 0; k < 2; ++k) {
    auto c = random_velocity(2.0, 0.5, 0.1, 3.0);
    c.out_dir = root / std::to_string(k);
    run(c);
    std::ifstream in(c.out_dir / "energy.csv", std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    csv[k] = s.str();
  }
  std::filesystem::remove_all(root);
  const bool ok = !csv[0].empty() && csv[0] == csv[1];
  return {ok, fmt("energy.csv sizes %zu and %zu bytes, identical=%s", csv[0].size(), csv[1].size(),
                  csv[0] == csv[1] ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<const char*, std::function<Outcome()>>> checks = {
      {1, {"oscillation periods", c1_periods}},
      {2, {"corrector iteration counts", c2_iterations}},
      {3, {"dissipation bound", c3_dissipation}},
      {4, {"fracture signature", c4_fracture}},
      {5, {"uniaxial ordering", c5_uniaxial}},
      {6, {"geodesic oracle", c6_geodesic}},
      {7, {"gradient consistency", c7_gradient}},
      {8, {"momentum and translation invariance", c8_momentum_translation}},
      {9, {"integrator order", c9_order}},
      {10, {"determinism", c10_determinism}},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  if (selected.empty())
    for (const auto& [id, _] : checks) selected.insert(id);

  int failures = 0;
  for (int id : selected) {
    auto it = checks.find(id);
    if (it == checks.end()) {
      std::printf("[FAIL] C%d unknown criterion\n", id);
      ++failures;
      continue;
    }
    Outcome o;
    try {
      o = it->second.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] C%d %s: %s\n", o.pass ? "PASS" : "FAIL", id, it->second.first, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
