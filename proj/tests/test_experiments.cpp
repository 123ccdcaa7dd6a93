#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "gfch/experiments.hpp"

namespace gfch {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Functionals, SeminormOfCosine) {
  // int_0^L |(-D^2)^(nu/2) cos kx|^2 = k^(2nu) L / 2
  const Grid g(32, 2 * kPi);
  for (double nu : {0.75, 1.0, 1.5}) {
    const RealField c = RealField::from_function(g, [](double x) { return std::cos(3 * x); });
    EXPECT_NEAR(fractional_seminorm2(c, nu), std::pow(3.0, 2 * nu) * kPi, 1e-11);
    EXPECT_NEAR(bbm_energy(c, nu), (1.0 + std::pow(3.0, 2 * nu)) * kPi, 1e-11);
  }
  EXPECT_EQ(fractional_seminorm2(RealField::constant(g, 2.0), 1.0), 0.0);
  EXPECT_NEAR(mass(RealField::constant(g, 2.0)), 4 * kPi, 1e-14);
}

TEST(Functionals, InvariantLists) {
  auto names = [](ModelId id, int p) {
    std::vector<std::string> out;
    for (const auto& i : scalar_invariants(id, p)) out.push_back(i.name);
    return out;
  };
  EXPECT_EQ(names(ModelId::GfKdV, 2), (std::vector<std::string>{"mass", "l2"}));
  EXPECT_EQ(names(ModelId::GfBBM, 3), (std::vector<std::string>{"mass", "energy"}));
  EXPECT_EQ(names(ModelId::GfCH, 1), (std::vector<std::string>{"mass"}));
  EXPECT_TRUE(names(ModelId::GfCH, 2).empty());
}

TEST(Profiles, Sech2MatchesClosedForm) {
  const Grid g(256, 80.0);
  ProfileSpec s;
  s.kind = ProfileKind::Sech2;
  s.width = 2.0;
  s.amplitude = 0.3;
  const RealField f = s.sample(g);
  for (std::size_t j = 0; j < g.size(); j += 11) {
    const double c = std::cosh((g.node(j) - 40.0) / 2.0);
    EXPECT_NEAR(f[j], 0.3 / (c * c), 1e-15);
  }
  EXPECT_EQ(parse_profile_kind("sech2"), ProfileKind::Sech2);
  EXPECT_FALSE(parse_profile_kind("box").has_value());
}

TEST(Profiles, EdgeTracker) {
  const Grid g(160, 80.0);
  EXPECT_FALSE(support_reaches_edge(gaussian_profile(g, 40.0, 2.0)));
  EXPECT_TRUE(support_reaches_edge(gaussian_profile(g, 40.0, 12.0)));
  EXPECT_TRUE(support_reaches_edge(gaussian_profile(g, 3.0, 2.0)));
}

TEST(Unidirectional, InitialDataIsRightGoingAtRetainedOrder) {
  const ModelParams m{2, 1.5, 0.2, 0.1};
  const Grid gy(128, 80.0);
  const RealField u0 = gaussian_profile(gy, 40.0, 3.0);
  const BoussinesqState s = unidirectional_data(u0, m);
  EXPECT_DOUBLE_EQ(s.grid().length(), 800.0);
  EXPECT_NEAR(s.u[17], 0.2 * u0[17], 1e-17);
  // u_t + u_x = eps delta U_S, with U_S evaluated in the slow frame.
  RealField w = s.u_t;
  w += derivative(s.u, 1);
  const RealField us = slow_frame_rhs(u0, m);
  for (std::size_t j = 0; j < gy.size(); ++j) EXPECT_NEAR(w[j], 0.02 * us[j], 1e-15);
}

TEST(Study, Validation) {
  ConvergenceStudy st;
  EXPECT_THROW(st.validate(), std::invalid_argument);  // no sweep
  st.epsilons = {0.2, 0.1};
  EXPECT_THROW(st.validate(), std::invalid_argument);
  st.epsilons = {0.2, 0.1, 0.1};
  EXPECT_THROW(st.validate(), std::invalid_argument);
  st.epsilons = {0.2, 0.1, 0.05};
  EXPECT_NO_THROW(st.validate());
  st.reduced = ModelId::GfBBM;
  EXPECT_THROW(st.validate(), std::invalid_argument);
  st.reduced = ModelId::GfKdV;
  st.deltas = {0.1, 0.2, 0.05};
  EXPECT_THROW(st.validate(), std::invalid_argument);
}

TEST(Study, TailSlopeUsesThreeSmallest) {
  const std::vector<double> h{0.4, 0.2, 0.1, 0.05};
  const std::vector<double> e{1.0, 3 * 0.04, 3 * 0.01, 3 * 0.0025};
  const auto s = detail::tail_slope(h, e);
  EXPECT_NEAR(s.slope, 2.0, 1e-12);
  EXPECT_NEAR(s.width, 0.0, 1e-9);
  EXPECT_TRUE(s.monotone);
  EXPECT_FALSE(detail::tail_slope({0.2, 0.1, 0.05}, {1.0, 2.0, 0.5}).monotone);
}

ConvergenceStudy small_study() {
  ConvergenceStudy st;
  st.n = 128;
  st.epsilons = {0.2, 0.1, 0.05};
  st.deltas = {0.2, 0.1, 0.05};
  st.courant = 0.1;
  return st;
}

TEST(Study, ThreadCountDoesNotChangeResults) {
  const ConvergenceStudy st = small_study();
  const auto a = run_unidirectional_comparison(st, 1);
  const auto b = run_unidirectional_comparison(st, 3);
  std::ostringstream sa, sb;
  write_csv(sa, a.rows);
  write_csv(sb, b.rows);
  EXPECT_EQ(sa.str(), sb.str());
  ASSERT_EQ(a.rows.size(), 6u);
  EXPECT_TRUE(std::isnan(a.rows[0].slope_delta));
  EXPECT_TRUE(std::isnan(a.rows[3].slope_eps));
}

TEST(Study, ErrorsShrinkWithBothParameters) {
  const auto rep = run_unidirectional_comparison(small_study());
  EXPECT_TRUE(rep.eps_slope.monotone);
  EXPECT_TRUE(rep.delta_slope.monotone);
  EXPECT_GT(rep.eps_slope.slope, 1.5);
  EXPECT_GT(rep.delta_slope.slope, 3.0);
  for (const auto& r : rep.rows) EXPECT_LE(r.err_l2, 2 * r.err_max);
}

TEST(Study, BoxDoublingLeavesErrorUnchanged) {
  ConvergenceStudy st = small_study();
  const double a = compare_cell(st, 0.1, 0.1).err_max;
  st.n *= 2;
  st.length *= 2;
  st.profile.center *= 2;
  const double b = compare_cell(st, 0.1, 0.1).err_max;
  EXPECT_LT(std::abs(a / b - 1.0), 0.05);
}

TEST(Conservation, KdVBBMAndCH) {
  const Grid g(128, 40.0);
  const RealField u0 = gaussian_profile(g, 20.0, 2.0, 0.5);
  const auto kdv = run_conservation_audit(ModelId::GfKdV, ModelParams{1, 1.0, 1, 1}, u0, 2.0);
  EXPECT_LT(kdv.get("mass").max_rel_drift, 1e-12);
  EXPECT_LT(kdv.get("l2").max_rel_drift, 1e-8);
  EXPECT_EQ(kdv.get("l2").times.front(), 0.0);
  EXPECT_DOUBLE_EQ(kdv.get("l2").times.back(), 2.0);
  const auto bbm = run_conservation_audit(ModelId::GfBBM, ModelParams{2, 1.5, 1, 1}, u0, 2.0);
  EXPECT_LT(bbm.get("energy").max_rel_drift, 1e-9);
  const auto ch = run_conservation_audit(ModelId::GfCH, ModelParams{1, 2.0, 1, 1}, u0, 2.0);
  EXPECT_LT(ch.get("mass").max_rel_drift, 1e-12);
  EXPECT_THROW(ch.get("energy"), std::out_of_range);
}

TEST(Conservation, BoussinesqZeroMode) {
  const Grid g(128, 40.0);
  const RealField u0 = gaussian_profile(g, 20.0, 2.0, 0.5);
  RealField ut = derivative(u0, 1);
  ut *= -1.0;
  ut.axpy(0.1, u0);
  const auto rep = run_conservation_audit(ModelParams{1, 1.0, 1, 1}, BoussinesqState(u0, ut), 2.0);
  EXPECT_LT(rep.get("momentum").max_rel_drift, 1e-12);
  EXPECT_LT(rep.get("mass_linear").max_rel_drift, 1e-12);
  // int u moved: slope 0.1 * int u0 = 0.1 * 0.5 * 2 sqrt(pi).
  const auto& m = rep.get("mass_linear");
  EXPECT_NEAR(m.values.back() - m.values.front(), 2.0 * 0.1 * std::sqrt(kPi), 1e-12);
}

TEST(Dispersion, Examples) {
  EXPECT_NEAR(measure_frequency(1.0, 1.0), 1.0 / std::sqrt(2.0), 1e-6 / std::sqrt(2.0));
  EXPECT_NEAR(measure_frequency(2.0, 2.0), 2.0 / std::sqrt(17.0), 1e-6 * 2.0 / std::sqrt(17.0));
  EXPECT_NEAR(boussinesq_frequency(1e-6, 1.0) / 1e-6, 1.0, 1e-12);
  EXPECT_THROW(measure_frequency(0.0, 1.0), std::invalid_argument);
  const auto rows = run_dispersion_audit(1.5, {0.5, 3.0});
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) EXPECT_LT(r.rel_err, 1e-6);
}

TEST(Solitary, AnsatzSolvesTravellingWaveEquation) {
  for (int p : {1, 2, 3}) {
    const ModelParams m{p, 1.0, 0.5, 0.7};
    // Box wide enough that the periodic images' tails do not interact.
    const Grid g(1024, 400.0);
    const auto w = SolitaryWave::from_amplitude(m, 0.8);
    const RealField u = w.sample(g, 200.0);
    RealField r = gfkdv_rhs(u, m);
    r.axpy(w.speed, derivative(u, 1));  // U_S = -c U_Y
    EXPECT_LT(max_norm(r), 1e-9) << p;
  }
}

TEST(Solitary, ShortRunKeepsShape) {
  const auto r = run_solitary_wave(ModelParams{1, 1.0, 1, 1}, 1.0, 128, 40.0, 0.05);
  EXPECT_NEAR(r.transit_time, 120.0, 1e-12);
  EXPECT_LT(r.shape_error, 1e-3);
  EXPECT_THROW(run_solitary_wave(ModelParams{1, 1.5, 1, 1}, 1.0, 128, 40.0, 0.05), std::invalid_argument);
}

TEST(Csv, SeventeenDigitsAndFixedHeader) {
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(format_real(2.0), "2");
  ConvergenceRow r;
  r.model = "GfCH";
  r.eps = 0.1;
  r.delta = 0.05;
  r.n = 512;
  std::ostringstream os;
  write_csv(os, {r});
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), kCsvHeader);
  EXPECT_NE(s.find("GfCH,1,1,0.10000000000000001,0.050000000000000003,512,"), std::string::npos);
  EXPECT_NE(s.find(",nan,nan,nan,nan,0\n"), std::string::npos);
}

}  // namespace
}  // namespace gfch
