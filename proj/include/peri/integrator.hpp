#pragma once

#include <functional>
#include <span>
#include <utility>

#include "peri/vec3.hpp"

namespace peri {

/// Kinematic state at one time level.
struct State {
  double t = 0.0;
  VectorField u;  ///< displacement
  VectorField v;  ///< velocity
  VectorField a;  ///< acceleration
};

struct IntegratorConfig {
  double dt = 1e-3;
  double beta = 0.25;
  double gamma = 0.5;
  double eps = 1e-7;   ///< absolute tolerance on the weighted L2 velocity increment
  int max_iters = 50;
  /// Use v + (1 + gamma) dt a in the velocity predictor instead of the
  /// standard (1 - gamma). Kept for comparison runs only.
  bool strict_paper_predictor = false;

  void validate() const;
};

struct StepReport {
  int iterations = 0;
  double final_residual = 0.0;
};

/// Maps (displacement, time) to acceleration (K + b) / rho, writing into the
/// third argument.
using AccelerationFn = std::function<void(std::span<const Vec3>, double, std::span<Vec3>)>;

struct Prediction {
  VectorField u;
  VectorField v;
};

Prediction predict(const State& state, const IntegratorConfig& cfg);

/// u = u_pred + beta dt^2 a, v = v_pred + gamma dt a.
Prediction correct(std::span<const Vec3> u_pred, std::span<const Vec3> v_pred,
                   std::span<const Vec3> a_new, const IntegratorConfig& cfg);

/// sqrt(sum_i w_i |x_i|^2); unit weights when `weights` is empty.
double weighted_l2(std::span<const Vec3> x, std::span<const double> weights);

/// a(0) = forces(u0, t0).
VectorField initial_acceleration(std::span<const Vec3> u0, double t0, const AccelerationFn& forces);

/// One predictor / evaluate-correct step of the implicit Newmark scheme.
///
/// After the predictor, the loop evaluates a^k = forces(u^k, t + dt) and
/// corrects from the predicted state until the weighted L2 norm of
/// v^{k+1} - v^k is at most cfg.eps. The returned state carries the last
/// evaluated acceleration.
///
/// Throws NonConvergenceError after cfg.max_iters sweeps and NonFiniteError
/// if an evaluation or update is not finite.
std::pair<State, StepReport> step(const State& state, const AccelerationFn& forces,
                                  std::span<const double> weights, const IntegratorConfig& cfg);

}  // namespace peri
