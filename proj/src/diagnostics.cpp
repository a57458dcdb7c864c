#include "peri/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "peri/errors.hpp"

namespace peri {

namespace {

double density_at(std::span<const double> rho, std::size_t i) {
  return rho.size() == 1 ? rho[0] : rho[i];
}

}  // namespace

double kinetic_energy(std::span<const Vec3> v, std::span<const double> areas,
                      std::span<const double> rho) {
  if (areas.size() != v.size() || (rho.size() != 1 && rho.size() != v.size())) {
    throw DomainError("kinetic_energy: array lengths do not match");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    sum += 0.5 * density_at(rho, i) * norm2(v[i]) * areas[i];
  }
  return sum;
}

double dissipation_bound(double e0, std::span<const NormSample> history, double t, double rho) {
  if (history.empty()) return e0;
  DissipationBound bound(e0, rho, history.front().t, history.front().norm);
  for (std::size_t k = 1; k < history.size() && history[k].t <= t; ++k) {
    bound.advance(history[k].t, history[k].norm);
  }
  return bound.value();
}

DissipationBound::DissipationBound(double e0, double rho, double t0, double b_norm0)
    : e0_(std::max(e0, 0.0)),
      sqrt_e0_(std::sqrt(std::max(e0, 0.0))),
      inv_sqrt_2rho_(1.0 / std::sqrt(2.0 * rho)),
      t_last_(t0),
      norm_last_(b_norm0) {
  if (!(rho > 0.0)) throw DomainError("dissipation bound needs a positive density");
}

void DissipationBound::advance(double t, double b_norm) {
  integral_ += 0.5 * (t - t_last_) * (norm_last_ + b_norm);
  t_last_ = t;
  norm_last_ = b_norm;
}

double DissipationBound::value() const {
  if (integral_ == 0.0) return e0_;
  const double root = sqrt_e0_ + inv_sqrt_2rho_ * integral_;
  return root * root;
}

double bound_density(std::span<const double> rho) {
  if (rho.empty()) throw DomainError("density list is empty");
  return *std::min_element(rho.begin(), rho.end());
}

double surface_stretch(const Mesh& mesh, std::span<const Vec3> u) {
  const VectorField zero(mesh.num_vertices());
  const double s0 = deformed_area(mesh, zero);
  return (deformed_area(mesh, u) - s0) / s0;
}

DensityField energy_densities(std::span<const Vec3> u, std::span<const Vec3> v,
                              const PeridynamicOperator& op) {
  const std::size_t nv = op.num_vertices();
  if (v.size() != nv) throw DomainError("energy_densities: velocity length mismatch");
  DensityField out;
  out.e_kin_density.resize(nv);
  out.e_pot_density.resize(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    out.e_kin_density[i] = 0.5 * op.params().density(i) * norm2(v[i]);
  }
  op.potential_energy_density(u, out.e_pot_density);
  return out;
}

EnergyCsvWriter::EnergyCsvWriter(const std::filesystem::path& path) : out_(path) {
  if (!out_) throw Error("cannot write " + path.string());
  out_ << "t,e_kin,e_pot,e_total,bound,delta_s,iterations,residual\n";
}

void EnergyCsvWriter::write(const EnergyRecord& r) {
  char line[256];
  std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g\n", r.t, r.e_kin,
                r.e_pot, r.e_total, r.dissipation_bound, r.delta_s, r.iterations, r.residual);
  out_ << line;
}

std::vector<EnergyRecord> read_energy_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "t,e_kin,e_pot,e_total,bound,delta_s,iterations,residual") {
    throw ParseError(path.string() + ": unexpected CSV header");
  }
  std::vector<EnergyRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    EnergyRecord r;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%d,%lf", &r.t, &r.e_kin, &r.e_pot,
                    &r.e_total, &r.dissipation_bound, &r.delta_s, &r.iterations,
                    &r.residual) != 8) {
      throw ParseError(path.string() + ": malformed row '" + line + "'");
    }
    records.push_back(r);
  }
  return records;
}

}  // namespace peri
