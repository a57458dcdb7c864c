#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "peri/errors.hpp"
#include "peri/integrator.hpp"
#include "peri/kernel.hpp"

using namespace peri;

namespace {

AccelerationFn constant(Vec3 g) {
  return [g](std::span<const Vec3>, double, std::span<Vec3> out) {
    for (auto& a : out) a = g;
  };
}

// Two vertices at geodesic distance 1 with unit areas and unit density; the
// relative displacement r = u1 - u0 obeys r'' = -2 r.
struct TwoVertexSpring {
  GeodesicTable table = GeodesicTable::from_pairs(2, 2.0, {{{0, 1}, 1.0}});
  std::vector<double> areas{1.0, 1.0};
  PeridynamicOperator op{table, areas, [] {
                           KernelParams k;
                           k.p = 2.0;
                           k.horizon = 2.0;
                           return k;
                         }()};
  AccelerationFn fn() const {
    return [this](std::span<const Vec3> u, double, std::span<Vec3> out) { op.acceleration(u, {}, out); };
  }
};

double max_oscillator_error(double dt, double t_end) {
  const TwoVertexSpring s;
  IntegratorConfig cfg;
  cfg.dt = dt;
  cfg.eps = 1e-14;
  State st;
  st.u = {{0, 0, 0}, {0.1, 0, 0}};
  st.v = {{0, 0, 0}, {0, 0, 0}};
  const auto f = s.fn();
  st.a = initial_acceleration(st.u, 0.0, f);
  const peri::testing::HarmonicOscillator exact{std::sqrt(2.0), 0.1, 0.0};
  double err = 0.0;
  const long n = std::lround(t_end / dt);
  for (long k = 1; k <= n; ++k) {
    st = step(st, f, s.areas, cfg).first;
    err = std::max(err, std::abs((st.u[1].x - st.u[0].x) - exact.position(k * dt)));
  }
  return err;
}

}  // namespace

TEST(Predict, Examples) {
  IntegratorConfig cfg;
  State s{0.0, {{1, 2, 3}}, {{0.5, 0, 0}}, {{0, 0, 0}}};
  auto p = predict(s, cfg);
  EXPECT_EQ(p.v[0], s.v[0]);
  EXPECT_EQ(p.u[0], (Vec3{1 + 0.5e-3, 2, 3}));

  // (1 - 2 beta) dt^2 / 2 = dt^2 / 4 for beta = 1/4.
  s = State{0.0, {{1, 1, 1}}, {{0, 0, 0}}, {{4, 0, 0}}};
  p = predict(s, cfg);
  EXPECT_EQ(p.v[0], (Vec3{2e-3, 0, 0}));
  EXPECT_NEAR(p.u[0].x, 1.0 + 1e-6, 1e-15);
  EXPECT_EQ(p.u[0].y, 1.0);

  IntegratorConfig half = cfg;
  half.beta = 0.5;
  EXPECT_EQ(predict(s, half).u[0], s.u[0]);

  cfg.dt = 0.0;
  s = State{0.0, {{1, 1, 1}}, {{3, 0, 0}}, {{4, 5, 6}}};
  p = predict(s, cfg);
  EXPECT_EQ(p.u[0], s.u[0]);
  EXPECT_EQ(p.v[0], s.v[0]);
}

TEST(Predict, StrictModeUsesOnePlusGamma) {
  IntegratorConfig cfg;
  cfg.strict_paper_predictor = true;
  const State s{0.0, {{0, 0, 0}}, {{0, 0, 0}}, {{4, 0, 0}}};
  EXPECT_EQ(predict(s, cfg).v[0], (Vec3{6e-3, 0, 0}));
}

TEST(Correct, Examples) {
  IntegratorConfig cfg;
  const VectorField up{{1, 2, 3}}, vp{{4, 5, 6}};
  auto c = correct(up, vp, VectorField{{0, 0, 0}}, cfg);
  EXPECT_EQ(c.u, up);
  EXPECT_EQ(c.v, vp);

  IntegratorConfig explicit_cfg;
  explicit_cfg.beta = 0.0;
  explicit_cfg.gamma = 0.0;
  c = correct(up, vp, VectorField{{7, 8, 9}}, explicit_cfg);
  EXPECT_EQ(c.u, up);
  EXPECT_EQ(c.v, vp);

  c = correct(up, vp, VectorField{{2, 0, 0}}, cfg);
  EXPECT_NEAR(c.v[0].x - vp[0].x, 1e-3, 1e-15);
  EXPECT_EQ(c.v[0].y, vp[0].y);
}

TEST(IntegratorConfig, Validation) {
  EXPECT_NO_THROW(IntegratorConfig{}.validate());
  IntegratorConfig c;
  c.dt = 0.0;
  EXPECT_ANY_THROW(c.validate());
  c = {};
  c.beta = 0.6;
  EXPECT_ANY_THROW(c.validate());
  c = {};
  c.gamma = 1.5;
  EXPECT_ANY_THROW(c.validate());
  c = {};
  c.eps = 0.0;
  EXPECT_ANY_THROW(c.validate());
  c = {};
  c.max_iters = 0;
  EXPECT_ANY_THROW(c.validate());
}

TEST(Step, FreeDriftOneIteration) {
  IntegratorConfig cfg;
  State s{0.0, VectorField(3), VectorField(3, Vec3{1, -2, 0.5}), VectorField(3)};
  const auto f = constant({0, 0, 0});
  for (int k = 1; k <= 10; ++k) {
    auto [next, report] = step(s, f, {}, cfg);
    EXPECT_EQ(report.iterations, 1);
    EXPECT_EQ(report.final_residual, 0.0);
    EXPECT_NEAR(next.u[0].x - s.u[0].x, 1e-3, 1e-15);
    EXPECT_NEAR(next.t, k * 1e-3, 1e-15);
    s = std::move(next);
  }
}

TEST(Step, ConstantAccelerationIsExact) {
  IntegratorConfig cfg;
  const Vec3 g{0.0, 0.0, -9.81};
  const Vec3 u0{1.0, 2.0, 3.0}, v0{0.5, -0.25, 4.0};
  const auto f = constant(g);
  State s{0.0, {u0, u0}, {v0, v0}, {}};
  s.a = initial_acceleration(s.u, 0.0, f);
  const int n = 1000;
  for (int k = 0; k < n; ++k) s = step(s, f, {}, cfg).first;
  const double t = n * cfg.dt;
  const Vec3 expected = u0 + t * v0 + (0.5 * t * t) * g;
  for (const auto& u : s.u) {
    EXPECT_LE(norm(u - expected), 1e-12 * norm(expected));
  }
  EXPECT_LE(norm(s.v[0] - (v0 + t * g)), 1e-12 * norm(v0 + t * g));
}

TEST(Step, InitialAccelerationOfStretchedPair) {
  const TwoVertexSpring s;
  const VectorField u{{0, 0, 0}, {1, 0, 0}};
  const VectorField a = initial_acceleration(u, 0.0, s.fn());
  EXPECT_EQ(a[0], (Vec3{1, 0, 0}));
  EXPECT_EQ(a[1], (Vec3{-1, 0, 0}));
  const VectorField t = initial_acceleration(VectorField(2, Vec3{3, 3, 3}), 0.0, s.fn());
  EXPECT_EQ(t[0], (Vec3{0, 0, 0}));
}

TEST(Step, HarmonicOscillatorSecondOrder) {
  const double e1 = max_oscillator_error(0.02, 5.0);
  const double e2 = max_oscillator_error(0.01, 5.0);
  const double e3 = max_oscillator_error(0.005, 5.0);
  EXPECT_LT(e1, 1e-3);
  EXPECT_GE(e1 / e2, 3.5);
  EXPECT_LE(e1 / e2, 4.5);
  EXPECT_GE(e2 / e3, 3.5);
  EXPECT_LE(e2 / e3, 4.5);
}

TEST(Step, StrictPredictorStillConvergesToSameFixedPoint) {
  const TwoVertexSpring s;
  IntegratorConfig cfg;
  cfg.eps = 1e-14;
  IntegratorConfig strict = cfg;
  strict.strict_paper_predictor = true;
  State st{0.0, {{0, 0, 0}, {0.1, 0, 0}}, {{0, 0, 0}, {0, 0.2, 0}}, {}};
  st.a = initial_acceleration(st.u, 0.0, s.fn());
  const auto a = step(st, s.fn(), s.areas, cfg);
  const auto b = step(st, s.fn(), s.areas, strict);
  EXPECT_NEAR(a.first.u[1].x, b.first.u[1].x, 1e-12);
  EXPECT_GE(b.second.iterations, a.second.iterations);
}

TEST(Step, ResidualWithinTolerance) {
  const TwoVertexSpring s;
  IntegratorConfig cfg;
  State st{0.0, {{0, 0, 0}, {0.1, 0, 0}}, {{0, 0, 0}, {0, 0, 0}}, {}};
  st.a = initial_acceleration(st.u, 0.0, s.fn());
  for (int k = 0; k < 50; ++k) {
    auto [next, report] = step(st, s.fn(), s.areas, cfg);
    EXPECT_GE(report.iterations, 1);
    EXPECT_LE(report.final_residual, cfg.eps);
    st = std::move(next);
  }
}

TEST(Step, NonConvergence) {
  IntegratorConfig cfg;
  cfg.dt = 1.0;
  cfg.max_iters = 5;
  const AccelerationFn stiff = [](std::span<const Vec3> u, double, std::span<Vec3> out) {
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = -100.0 * u[i];
  };
  State st{0.0, {{1, 0, 0}}, {{0, 0, 0}}, {{-100, 0, 0}}};
  try {
    step(st, stiff, {}, cfg);
    FAIL() << "expected NonConvergenceError";
  } catch (const NonConvergenceError& e) {
    EXPECT_EQ(e.iterations(), 5);
    EXPECT_GT(e.residual(), cfg.eps);
  }
}

TEST(Step, NonFiniteAcceleration) {
  IntegratorConfig cfg;
  const auto nan = constant({std::numeric_limits<double>::quiet_NaN(), 0, 0});
  State st{0.0, {{0, 0, 0}}, {{0, 0, 0}}, {{0, 0, 0}}};
  EXPECT_THROW(step(st, nan, {}, cfg), NonFiniteError);
}

TEST(Step, Deterministic) {
  const TwoVertexSpring s;
  IntegratorConfig cfg;
  auto run = [&] {
    State st{0.0, {{0, 0, 0}, {0.1, 0.05, 0}}, {{0, 0, 0.3}, {0, 0, 0}}, {}};
    st.a = initial_acceleration(st.u, 0.0, s.fn());
    for (int k = 0; k < 200; ++k) st = step(st, s.fn(), s.areas, cfg).first;
    return st;
  };
  const State a = run(), b = run();
  EXPECT_EQ(a.u, b.u);
  EXPECT_EQ(a.v, b.v);
  EXPECT_EQ(a.a, b.a);
}

TEST(WeightedL2, Examples) {
  const VectorField x{{3, 4, 0}, {0, 0, 1}};
  EXPECT_EQ(weighted_l2(x, {}), std::sqrt(26.0));
  const std::vector<double> w{4.0, 0.0};
  EXPECT_EQ(weighted_l2(x, w), 10.0);
}
