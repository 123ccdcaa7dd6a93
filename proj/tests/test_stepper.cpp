#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gfch/stepper.hpp"
#include "test_support.hpp"

namespace gfch {
namespace {

constexpr double kPi = std::numbers::pi;

ModelParams params(int p, double nu, double eps = 1.0, double delta = 1.0) {
  ModelParams m;
  m.p = p;
  m.nu = nu;
  m.eps = eps;
  m.delta = delta;
  return m;
}

StepperConfig config(Scheme scheme, double dt, double t_end) {
  StepperConfig c;
  c.scheme = scheme;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

RealField bump(const Grid& g, double amplitude, double sigma = 2.0) {
  return RealField::from_function(g, [&](double x) {
    return amplitude * testing::periodic_gaussian(x, g.length() / 2, sigma, g.length());
  });
}

TEST(Scheme, Names) {
  EXPECT_EQ(parse_scheme("RK4"), Scheme::RK4);
  EXPECT_EQ(parse_scheme("RK4-IntegratingFactor"), Scheme::RK4IntegratingFactor);
  EXPECT_FALSE(parse_scheme("rk4").has_value());
  EXPECT_EQ(scheme_name(Scheme::RK4IntegratingFactor), "RK4-IntegratingFactor");
}

TEST(Stepper, ZeroStateStaysZero) {
  const Grid g = make_grid(32, 20.0);
  const auto m = params(2, 1.5, 0.5, 0.5);
  for (const auto& info : kModels) {
    if (info.id == ModelId::Boussinesq) continue;
    const ScalarFlow flow = make_flow(info.id, m, g);
    for (Scheme s : {Scheme::RK4, Scheme::RK4IntegratingFactor}) {
      if (s == Scheme::RK4 && flow.requires_integrating_factor()) continue;
      EXPECT_EQ(max_norm(step(RealField(g), flow, s, 0.1)), 0.0) << info.name;
    }
  }
  const BoussinesqFlow bflow(g, m);
  const auto out = step(BoussinesqState(RealField(g), RealField(g)), bflow, Scheme::RK4, 0.1);
  EXPECT_EQ(max_norm(out.u) + max_norm(out.u_t), 0.0);
}

TEST(Stepper, StepCountLandsOnEnd) {
  EXPECT_EQ(step_count(config(Scheme::RK4, 0.1, 1.0)), 10);
  EXPECT_EQ(step_count(config(Scheme::RK4, 0.3, 1.0)), 4);
  EXPECT_EQ(step_count(config(Scheme::RK4, 1.0 / 3.0, 1.0)), 3);
}

// A single Fourier mode of tiny amplitude follows the linear dispersion
// relation: u = A cos(k x) cos(omega t).
class LinearMode : public ::testing::TestWithParam<Scheme> {};

TEST_P(LinearMode, BoussinesqPhaseAdvance) {
  const Grid g = make_grid(32, 2 * kPi);
  const double amp = 1e-12;
  const double k = 2.0;
  const double omega = 2.0 / std::sqrt(5.0);
  ASSERT_NEAR(boussinesq_frequency(k, 1.0), omega, 1e-15);
  const BoussinesqFlow flow(g, params(1, 1.0));
  BoussinesqState s(RealField::from_function(g, [&](double x) { return amp * std::cos(k * x); }), RealField(g));
  s = integrate(s, flow, config(GetParam(), 0.005, 1.0));
  const RealField expected = RealField::from_function(g, [&](double x) { return std::cos(k * x) * std::cos(omega); });
  EXPECT_LE(max_abs_diff((1.0 / amp) * s.u, expected), 1e-10);
  const RealField expected_t =
      RealField::from_function(g, [&](double x) { return -omega * std::cos(k * x) * std::sin(omega); });
  EXPECT_LE(max_abs_diff((1.0 / amp) * s.u_t, expected_t), 1e-10);
}

INSTANTIATE_TEST_SUITE_P(BothSchemes, LinearMode, ::testing::Values(Scheme::RK4, Scheme::RK4IntegratingFactor));

TEST(Stepper, IntegratingFactorIsExactOnLinearKdV) {
  // eps tiny: the flow is linear dispersion exp(i xi^3 delta^2/2 t).
  const Grid g = make_grid(32, 2 * kPi);
  const auto m = params(1, 1.0, 1e-14, 0.5);
  const ScalarFlow flow = make_flow(ModelId::GfKdV, m, g);
  const RealField u0 = RealField::from_function(g, [](double x) { return std::cos(5 * x); });
  const RealField u = integrate(u0, flow, config(Scheme::RK4IntegratingFactor, 0.5, 2.0));
  // U_S = -(delta^2/2) U_YYY  =>  cos(5(Y + c S)) with c = -25 delta^2/2.
  const double c = -25.0 * 0.125;
  const RealField expected = RealField::from_function(g, [&](double x) { return std::cos(5 * (x - c * 2.0)); });
  EXPECT_LE(max_abs_diff(u, expected), 1e-12);
}

TEST(Stepper, StiffFlowsRequireIntegratingFactor) {
  const Grid g = make_grid(64, 20.0);
  const auto m = params(1, 1.0, 0.1, 0.1);
  const RealField u = bump(g, 1.0);
  for (ModelId id : {ModelId::GfKdV, ModelId::SlowFrameUnidirectional, ModelId::GfKdVOriginal}) {
    const ScalarFlow flow = make_flow(id, m, g);
    EXPECT_TRUE(flow.requires_integrating_factor());
    EXPECT_THROW(validate_stepper(flow, u, config(Scheme::RK4, 1e-4, 1.0)), StepperConfigError);
    EXPECT_NO_THROW(validate_stepper(flow, u, config(Scheme::RK4IntegratingFactor, 0.2 * g.spacing(), 1.0)));
  }
}

TEST(Stepper, DefaultDtPassesForChAndBbmTypes) {
  const Grid g = make_grid(256, 40.0);
  const RealField u = bump(g, 0.5);
  for (ModelId id : {ModelId::GfCH, ModelId::GCH, ModelId::MCH, ModelId::ClassicalCH, ModelId::GfBBM,
                     ModelId::GfCHOriginal, ModelId::GfBBMOriginal, ModelId::MovingFrameGeneric}) {
    const ScalarFlow flow = make_flow(id, params(1, 1.0), g);
    EXPECT_NO_THROW(validate_stepper(flow, u, config(Scheme::RK4, 0.2 * g.spacing(), 1.0))) << model_name(id);
  }
}

TEST(Stepper, OversizedDtRejected) {
  const Grid g = make_grid(64, 10.0);
  const ScalarFlow flow = make_flow(ModelId::GfCH, params(1, 1.0), g);
  EXPECT_THROW(validate_stepper(flow, bump(g, 1.0), config(Scheme::RK4, 5.0, 10.0)), StepperConfigError);
  EXPECT_THROW(validate_stepper(flow, bump(g, 1.0), config(Scheme::RK4, -1.0, 10.0)), StepperConfigError);
  EXPECT_THROW(validate_stepper(flow, bump(g, 1.0), config(Scheme::RK4, 0.01, 0.0)), StepperConfigError);
}

TEST(Stepper, BlowUpReportsTimeAndMode) {
  // Unstable dt on the Boussinesq system grows the top modes until overflow.
  const Grid g = make_grid(64, 2 * kPi);
  const BoussinesqFlow flow(g, params(1, 1.0));
  const BoussinesqState s(bump(g, 0.1, 0.5), RealField(g));
  const auto cfg = config(Scheme::RK4, 4.0, 1e5);
  try {
    (void)integrate(s, flow, cfg, [](std::int64_t, double, const auto&) {}, false);
    FAIL() << "expected blow-up";
  } catch (const BlowUpError& e) {
    EXPECT_GT(e.time(), 0.0);
    EXPECT_LT(e.time(), 1e5);
    EXPECT_NE(std::string(e.what()).find("first offending mode"), std::string::npos);
  }
}

TEST(Stepper, NonFiniteStateRaisesBlowUp) {
  const Grid g = make_grid(16, 1.0);
  RealField v(g);
  v[3] = std::nan("");
  const ScalarFlow flow = make_flow(ModelId::GfCH, params(1, 1.0), g);
  EXPECT_THROW((void)step(v, flow, Scheme::RK4, 0.01), BlowUpError);
}

TEST(Stepper, ObserverSeesSnapshots) {
  const Grid g = make_grid(32, 20.0);
  const ScalarFlow flow = make_flow(ModelId::GfBBM, params(1, 1.0), g);
  auto cfg = config(Scheme::RK4, 0.1, 1.0);
  cfg.snapshot_every = 3;
  std::vector<std::int64_t> seen;
  (void)integrate(bump(g, 0.5), flow, cfg, [&](std::int64_t i, double, const RealField&) { seen.push_back(i); });
  EXPECT_EQ(seen, (std::vector<std::int64_t>{0, 3, 6, 9, 10}));
}

// --- order of accuracy --------------------------------------------------------

template <class Flow, class State>
State run(const State& y0, const Flow& flow, Scheme scheme, double dt, double t_end) {
  return integrate(y0, flow, config(scheme, dt, t_end), [](std::int64_t, double, const auto&) {}, false);
}

double diff(const RealField& a, const RealField& b) { return max_abs_diff(a, b); }
double diff(const BoussinesqState& a, const BoussinesqState& b) {
  return std::max(max_abs_diff(a.u, b.u), max_abs_diff(a.u_t, b.u_t));
}

template <class Flow, class State>
double error_ratio(const State& y0, const Flow& flow, Scheme scheme, double dt, double t_end) {
  const State ref = run(y0, flow, scheme, dt / 8, t_end);
  const double e1 = diff(run(y0, flow, scheme, dt, t_end), ref);
  const double e2 = diff(run(y0, flow, scheme, dt / 2, t_end), ref);
  return e1 / e2;
}

// Largest step worth testing: inside the stability region, capped so the
// error is still in the asymptotic regime.
// Stiff flows under the integrating factor reach the asymptotic regime only
// once h |lambda| is moderate on the resolved content of the data.
template <class Flow, class State>
double cfl_free_dt(const Flow& flow, const State& y0, Scheme scheme) {
  if (flow.requires_integrating_factor()) return 0.00625;
  return std::min(0.05, 0.125 * stable_dt(flow, y0, scheme));
}

TEST(Order, GfCHHalvingRatio) {
  // Against a dt/8 reference the ratio is 16 (1 - 2^-12)/(1 - 2^-8) ~= 16.06.
  const Grid g = make_grid(64, 30.0);
  const ScalarFlow flow = make_flow(ModelId::GfCH, params(1, 1.5), g);
  const double r = error_ratio(bump(g, 0.8), flow, Scheme::RK4, 0.05, 2.0);
  EXPECT_NEAR(r, 16.0, 2.0);
}

class OrderEveryModel : public ::testing::TestWithParam<ModelId> {};

TEST_P(OrderEveryModel, FourthOrderRichardson) {
  const ModelId id = GetParam();
  const Grid g = make_grid(64, 30.0);
  const auto m = params(2, 1.5, 0.5, 0.5);
  const ScalarFlow flow = make_flow(id, m, g);
  const Scheme scheme = flow.requires_integrating_factor() ? Scheme::RK4IntegratingFactor : Scheme::RK4;
  const RealField y0 = bump(g, 0.6);
  const double dt = cfl_free_dt(flow, y0, scheme);
  const double r = error_ratio(y0, flow, scheme, dt, 1.0);
  EXPECT_NEAR(r, 16.0, 2.0) << model_name(id) << " dt=" << dt;
}

INSTANTIATE_TEST_SUITE_P(
    AllScalar, OrderEveryModel,
    ::testing::Values(ModelId::SlowFrameUnidirectional, ModelId::MovingFrameGeneric, ModelId::GfCH,
                      ModelId::GfCHOriginal, ModelId::GCH, ModelId::MCH, ModelId::ClassicalCH, ModelId::GfBBM,
                      ModelId::GfBBMOriginal, ModelId::GfKdV, ModelId::GfKdVOriginal),
    [](const auto& info) {
      std::string s(model_name(info.param));
      for (char& c : s) {
        if (c == '-') c = '_';
      }
      return s;
    });

TEST(Order, BoussinesqBothSchemes) {
  const Grid g = make_grid(64, 30.0);
  const BoussinesqFlow flow(g, params(1, 1.0));
  const BoussinesqState y0(bump(g, 0.5), RealField(g));
  for (Scheme s : {Scheme::RK4, Scheme::RK4IntegratingFactor}) {
    const double dt = cfl_free_dt(flow, y0, s);
    EXPECT_NEAR(error_ratio(y0, flow, s, dt, 2.0), 16.0, 2.0) << scheme_name(s);
  }
}

}  // namespace
}  // namespace gfch
