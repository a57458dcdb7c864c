#include "peri/kernel.hpp"

#include <cmath>
#include <string>

#include "peri/errors.hpp"

namespace peri {

void KernelParams::validate(std::size_t num_vertices) const {
  if (!(p >= 2.0) || !std::isfinite(p)) throw DomainError("p must satisfy p >= 2, got " + std::to_string(p));
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("kappa must be positive");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon must be positive");
  if (rho.size() != 1 && rho.size() != num_vertices) {
    throw DomainError("rho must have 1 or " + std::to_string(num_vertices) + " entries");
  }
  for (double r : rho) {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("every density must be positive");
  }
  if (!(k_pair.uniform() > 0.0)) throw DomainError("pair modulus must be positive");
  for (const auto& [ij, k] : k_pair.overrides()) {
    if (!(k > 0.0)) throw DomainError("pair modulus must be positive");
  }
}

Vec3 pair_kernel(const Vec3& du, double d, const KernelParams& params) {
  if (!(d > 0.0)) throw DomainError("pair distance must be positive, got " + std::to_string(d));
  const double r2 = norm2(du);
  if (r2 == 0.0) return {};
  const double magnitude = std::pow(r2, 0.5 * (params.p - 2.0));
  const double scale = params.kappa * magnitude / std::pow(d, 2.0 + params.alpha * params.p);
  return du * scale;
}

PeridynamicOperator::PeridynamicOperator(const GeodesicTable& table, std::span<const double> areas,
                                         KernelParams params)
    : params_(std::move(params)), areas_(areas.begin(), areas.end()) {
  const std::size_t nv = table.num_vertices();
  if (areas_.size() != nv) {
    throw DomainError("area list has " + std::to_string(areas_.size()) + " entries, table has " +
                      std::to_string(nv) + " vertices");
  }
  params_.validate(nv);
  if (table.horizon() != params_.horizon) {
    throw DomainError("geodesic table horizon differs from the kernel horizon");
  }

  const double p = params_.p;
  if (p == std::floor(p) && p <= 6.0) integer_p_ = static_cast<int>(p);
  const double exponent = 2.0 + params_.alpha * p;

  offsets_.reserve(nv + 1);
  offsets_.push_back(0);
  for (std::size_t i = 0; i < nv; ++i) {
    for (const auto& n : table.neighbors(i)) {
      if (!(n.distance > 0.0)) throw DomainError("pair distance must be positive");
      neighbor_.push_back(n.index);
      stiffness_.push_back(params_.kappa * params_.k_pair(static_cast<std::uint32_t>(i), n.index) /
                           std::pow(n.distance, exponent));
    }
    offsets_.push_back(neighbor_.size());
  }
}

double PeridynamicOperator::magnitude_factor(double r2) const {
  switch (integer_p_) {
    case 2: return 1.0;
    case 3: return std::sqrt(r2);
    case 4: return r2;
    case 5: return r2 * std::sqrt(r2);
    case 6: return r2 * r2;
    default: return std::pow(r2, 0.5 * (params_.p - 2.0));
  }
}

double PeridynamicOperator::magnitude_power(double r2) const {
  switch (integer_p_) {
    case 2: return r2;
    case 3: return r2 * std::sqrt(r2);
    case 4: return r2 * r2;
    case 5: return r2 * r2 * std::sqrt(r2);
    case 6: return r2 * r2 * r2;
    default: return std::pow(r2, 0.5 * params_.p);
  }
}

void PeridynamicOperator::check_size(std::size_t n, const char* what) const {
  if (n != num_vertices()) {
    throw DomainError(std::string(what) + " has " + std::to_string(n) + " entries, expected " +
                      std::to_string(num_vertices()));
  }
}

void PeridynamicOperator::force(std::span<const Vec3> u, std::span<Vec3> out) const {
  check_size(u.size(), "displacement");
  check_size(out.size(), "force output");
  const std::size_t nv = num_vertices();
  for (std::size_t i = 0; i < nv; ++i) {
    const Vec3 ui = u[i];
    Vec3 sum{};
    for (std::size_t b = offsets_[i]; b < offsets_[i + 1]; ++b) {
      const std::uint32_t j = neighbor_[b];
      const Vec3 du = u[j] - ui;
      const double r2 = norm2(du);
      if (r2 == 0.0) continue;
      sum += du * (stiffness_[b] * magnitude_factor(r2) * areas_[j]);
    }
    out[i] = sum;
  }
}

VectorField PeridynamicOperator::force(std::span<const Vec3> u) const {
  VectorField out(num_vertices());
  force(u, out);
  return out;
}

void PeridynamicOperator::acceleration(std::span<const Vec3> u, std::span<const Vec3> body_force,
                                       std::span<Vec3> out) const {
  force(u, out);
  if (!body_force.empty()) check_size(body_force.size(), "body force");
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!body_force.empty()) out[i] += body_force[i];
    out[i] *= 1.0 / params_.density(i);
  }
}

void PeridynamicOperator::potential_energy_density(std::span<const Vec3> u,
                                                   std::span<double> out) const {
  check_size(u.size(), "displacement");
  check_size(out.size(), "density output");
  const double inv_2p = 1.0 / (2.0 * params_.p);
  for (std::size_t i = 0; i < num_vertices(); ++i) {
    double sum = 0.0;
    for (std::size_t b = offsets_[i]; b < offsets_[i + 1]; ++b) {
      const std::uint32_t j = neighbor_[b];
      const double r2 = norm2(u[j] - u[i]);
      if (r2 == 0.0) continue;
      sum += stiffness_[b] * magnitude_power(r2) * areas_[j];
    }
    out[i] = inv_2p * sum;
  }
}

double PeridynamicOperator::potential_energy(std::span<const Vec3> u) const {
  std::vector<double> density(num_vertices());
  potential_energy_density(u, density);
  double total = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) total += areas_[i] * density[i];
  return total;
}

VectorField assemble_force(std::span<const Vec3> u, const GeodesicTable& table,
                           std::span<const double> areas, const KernelParams& params) {
  return PeridynamicOperator(table, areas, params).force(u);
}

double potential_energy(std::span<const Vec3> u, const GeodesicTable& table,
                        std::span<const double> areas, const KernelParams& params) {
  return PeridynamicOperator(table, areas, params).potential_energy(u);
}

}  // namespace peri
