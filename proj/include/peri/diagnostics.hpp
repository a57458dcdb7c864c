#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <vector>

#include "peri/kernel.hpp"
#include "peri/mesh.hpp"
#include "peri/vec3.hpp"

namespace peri {

struct EnergyRecord {
  double t = 0.0;
  double e_kin = 0.0;
  double e_pot = 0.0;
  double e_total = 0.0;
  double dissipation_bound = 0.0;
  double delta_s = 0.0;
  int iterations = 0;     ///< corrector iterations of the step ending at t (0 at t = 0)
  double residual = 0.0;
};

struct DensityField {
  std::vector<double> e_kin_density;
  std::vector<double> e_pot_density;
};

/// sum_i rho_i / 2 |v_i|^2 dA_i. `rho` has one entry (uniform) or one per vertex.
double kinetic_energy(std::span<const Vec3> v, std::span<const double> areas,
                      std::span<const double> rho);

struct NormSample {
  double t;
  double norm;  ///< area-weighted L2 norm of the body force at t
};

/// Energy bound of a dissipative trajectory:
///   (sqrt(e0) + 1/sqrt(2 rho) * int_0^t |b|_{L2} ds)^2,
/// the integral taken by the trapezoidal rule over `history` (sorted by t).
/// Samples beyond t are ignored.
double dissipation_bound(double e0, std::span<const NormSample> history, double t, double rho);

/// Incremental form of dissipation_bound for time loops.
class DissipationBound {
 public:
  DissipationBound(double e0, double rho, double t0, double b_norm0);
  void advance(double t, double b_norm);
  double value() const;

 private:
  double e0_;
  double sqrt_e0_;
  double inv_sqrt_2rho_;
  double t_last_;
  double norm_last_;
  double integral_ = 0.0;
};

/// Density entering the bound: the uniform value, or the smallest vertex
/// density when rho varies.
double bound_density(std::span<const double> rho);

/// (S(u) - S(0)) / S(0) with S the total triangle area.
double surface_stretch(const Mesh& mesh, std::span<const Vec3> u);

/// Per-vertex energies per unit area; their dA-weighted sums are the total
/// kinetic and potential energies.
DensityField energy_densities(std::span<const Vec3> u, std::span<const Vec3> v,
                              const PeridynamicOperator& op);

/// Streaming writer for the energy time series:
///   t,e_kin,e_pot,e_total,bound,delta_s,iterations,residual
class EnergyCsvWriter {
 public:
  explicit EnergyCsvWriter(const std::filesystem::path& path);
  void write(const EnergyRecord& r);
  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
};

std::vector<EnergyRecord> read_energy_csv(const std::filesystem::path& path);

}  // namespace peri
