#include "peri/integrator.hpp"

#include <cmath>
#include <string>

#include "peri/errors.hpp"

namespace peri {

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
  if (!(beta >= 0.0 && beta <= 0.5)) throw DomainError("beta must lie in [0, 1/2]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in [0, 1]");
  if (!(eps > 0.0)) throw DomainError("eps must be positive");
  if (max_iters < 1) throw DomainError("max_iters must be at least 1");
}

Prediction predict(const State& state, const IntegratorConfig& cfg) {
  const std::size_t n = state.u.size();
  const double dt = cfg.dt;
  const double vel_coeff = (cfg.strict_paper_predictor ? 1.0 + cfg.gamma : 1.0 - cfg.gamma) * dt;
  const double disp_coeff = (1.0 - 2.0 * cfg.beta) * dt * dt * 0.5;
  Prediction out{VectorField(n), VectorField(n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.v[i] = state.v[i] + state.a[i] * vel_coeff;
    out.u[i] = state.u[i] + state.v[i] * dt + state.a[i] * disp_coeff;
  }
  return out;
}

Prediction correct(std::span<const Vec3> u_pred, std::span<const Vec3> v_pred,
                   std::span<const Vec3> a_new, const IntegratorConfig& cfg) {
  const std::size_t n = u_pred.size();
  const double du_coeff = cfg.beta * cfg.dt * cfg.dt;
  const double dv_coeff = cfg.gamma * cfg.dt;
  Prediction out{VectorField(n), VectorField(n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.u[i] = u_pred[i] + a_new[i] * du_coeff;
    out.v[i] = v_pred[i] + a_new[i] * dv_coeff;
  }
  return out;
}

double weighted_l2(std::span<const Vec3> x, std::span<const double> weights) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += (weights.empty() ? 1.0 : weights[i]) * norm2(x[i]);
  }
  return std::sqrt(sum);
}

namespace {

void require_finite(std::span<const Vec3> f, const char* what, double t) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!is_finite(f[i])) {
      throw NonFiniteError(std::string(what) + " is not finite at vertex " + std::to_string(i) +
                           ", t = " + std::to_string(t));
    }
  }
}

}  // namespace

VectorField initial_acceleration(std::span<const Vec3> u0, double t0, const AccelerationFn& forces) {
  VectorField a(u0.size());
  forces(u0, t0, a);
  require_finite(a, "initial acceleration", t0);
  return a;
}

std::pair<State, StepReport> step(const State& state, const AccelerationFn& forces,
                                  std::span<const double> weights, const IntegratorConfig& cfg) {
  const std::size_t n = state.u.size();
  if (state.v.size() != n || state.a.size() != n || (!weights.empty() && weights.size() != n)) {
    throw DomainError("state arrays and weights must have equal length");
  }
  const double t_next = state.t + cfg.dt;
  const Prediction pred = predict(state, cfg);

  VectorField u_k = pred.u;
  VectorField v_k = pred.v;
  VectorField a_k(n);
  VectorField dv(n);
  double residual = 0.0;
  for (int k = 1; k <= cfg.max_iters; ++k) {
    forces(u_k, t_next, a_k);
    require_finite(a_k, "acceleration", t_next);
    Prediction next = correct(pred.u, pred.v, a_k, cfg);
    for (std::size_t i = 0; i < n; ++i) dv[i] = next.v[i] - v_k[i];
    residual = weighted_l2(dv, weights);
    if (!std::isfinite(residual)) {
      throw NonFiniteError("velocity increment is not finite at t = " + std::to_string(t_next));
    }
    u_k = std::move(next.u);
    v_k = std::move(next.v);
    if (residual <= cfg.eps) {
      State out{t_next, std::move(u_k), std::move(v_k), std::move(a_k)};
      return {std::move(out), StepReport{k, residual}};
    }
  }
  throw NonConvergenceError("corrector did not reach eps = " + std::to_string(cfg.eps) + " in " +
                                std::to_string(cfg.max_iters) + " iterations at t = " +
                                std::to_string(t_next) + " (residual " + std::to_string(residual) + ")",
                            cfg.max_iters, residual);
}

}  // namespace peri
