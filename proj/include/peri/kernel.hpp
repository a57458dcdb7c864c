#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "peri/geodesic.hpp"
#include "peri/vec3.hpp"

namespace peri {

/// Pairwise elastic moduli k_ij: a uniform value with optional per-pair
/// overrides. Lookups are symmetric in (i, j).
class PairModuli {
 public:
  PairModuli(double uniform = 1.0) : uniform_(uniform) {}  // NOLINT(implicit)

  void set(std::uint32_t i, std::uint32_t j, double k) { overrides_[key(i, j)] = k; }
  double operator()(std::uint32_t i, std::uint32_t j) const {
    if (overrides_.empty()) return uniform_;
    auto it = overrides_.find(key(i, j));
    return it == overrides_.end() ? uniform_ : it->second;
  }
  double uniform() const { return uniform_; }
  const std::map<std::pair<std::uint32_t, std::uint32_t>, double>& overrides() const { return overrides_; }

 private:
  static std::pair<std::uint32_t, std::uint32_t> key(std::uint32_t i, std::uint32_t j) {
    return i < j ? std::pair{i, j} : std::pair{j, i};
  }
  double uniform_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> overrides_;
};

/// Constitutive law of the power-law bond potential
///   Phi = kappa / p * |du|^p / d^(2 + alpha p).
struct KernelParams {
  double p = 2.0;         ///< nonlinearity exponent, >= 2
  double alpha = 0.5;     ///< nonlocality exponent, in (0, 1)
  double kappa = 1.0;     ///< elastic constant, > 0
  double horizon = 0.5;   ///< interaction radius delta
  std::vector<double> rho{1.0};  ///< one entry (uniform) or one per vertex
  PairModuli k_pair{1.0};

  double density(std::size_t i) const { return rho.size() == 1 ? rho.front() : rho[i]; }
  /// Throws DomainError naming the first violated constraint.
  void validate(std::size_t num_vertices) const;
};

/// kappa |du|^(p-2) du / d^(2 + alpha p); exactly zero for du == 0.
/// Throws DomainError if d <= 0.
Vec3 pair_kernel(const Vec3& du, double d, const KernelParams& params);

/// Discrete nonlocal operator bound to a neighbour table, vertex areas and
/// material parameters. The distance factors kappa k_ij / d^(2 + alpha p) are
/// evaluated once at construction.
///
/// Every per-vertex sum runs over neighbours in ascending index order, so all
/// outputs are bit-reproducible.
class PeridynamicOperator {
 public:
  PeridynamicOperator(const GeodesicTable& table, std::span<const double> areas,
                      KernelParams params);

  std::size_t num_vertices() const { return areas_.size(); }
  const KernelParams& params() const { return params_; }
  std::span<const double> areas() const { return areas_; }

  /// K_i = sum_j k_ij kernel(u_j - u_i, d_ij) dA_j.
  void force(std::span<const Vec3> u, std::span<Vec3> out) const;
  VectorField force(std::span<const Vec3> u) const;

  /// (K_i + b_i) / rho_i. An empty body force means b = 0.
  void acceleration(std::span<const Vec3> u, std::span<const Vec3> body_force,
                    std::span<Vec3> out) const;

  /// e_i = 1/(2p) sum_j kappa k_ij |u_i - u_j|^p / d_ij^(2 + alpha p) dA_j.
  void potential_energy_density(std::span<const Vec3> u, std::span<double> out) const;
  /// sum_i dA_i e_i, accumulated in vertex order.
  double potential_energy(std::span<const Vec3> u) const;

  std::size_t num_bonds() const { return neighbor_.size(); }  ///< ordered pairs

 private:
  KernelParams params_;
  std::vector<double> areas_;
  std::vector<std::size_t> offsets_;       // CSR row starts, size nv + 1
  std::vector<std::uint32_t> neighbor_;
  std::vector<double> stiffness_;          // kappa k_ij / d^(2 + alpha p)
  int integer_p_ = 0;                      // p if p in {2,3,4,5,6}, else 0

  double magnitude_factor(double r2) const;  // |du|^(p-2)
  double magnitude_power(double r2) const;   // |du|^p
  void check_size(std::size_t n, const char* what) const;
};

/// Convenience wrappers constructing a temporary operator.
VectorField assemble_force(std::span<const Vec3> u, const GeodesicTable& table,
                           std::span<const double> areas, const KernelParams& params);
double potential_energy(std::span<const Vec3> u, const GeodesicTable& table,
                        std::span<const double> areas, const KernelParams& params);

}  // namespace peri
