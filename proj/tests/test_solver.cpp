#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "radcns/errors.hpp"
#include "radcns/radial.hpp"
#include "radcns/semigroup.hpp"
#include "radcns/solver.hpp"

using namespace radcns;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double spectral_max_diff(const SolverState& x, const SolverState& y) {
  return std::max(oracle::max_abs_diff(x.a_hat.values, y.a_hat.values),
                  oracle::max_abs_diff(x.v_hat.values, y.v_hat.values));
}

SolverState gaussian_state(const RadialGrid& g, double c, double w = 1.0) {
  const auto [a0, v0] = initial_data_gaussian(c, w, g);
  return SolverState::initial(a0, v0);
}

SolverState run(const SolverState& s0, double dt, double T, double gamma = 1.4) {
  const Etd2Stepper stepper(s0.a_hat.grid, dt, PressureLaw(gamma));
  SolverState s = s0;
  const auto n = static_cast<int>(std::lround(T / dt));
  for (int i = 0; i < n; ++i) s = stepper.step(s);
  return s;
}

double rhs_norm(const NonlinearTerms& t) {
  return std::hypot(spectral_l2_norm(t.f_hat), spectral_l2_norm(t.h_hat));
}

SolverConfig small_config() {
  SolverConfig c;
  c.modes = 2047;
  c.radius = 64.0;
  c.dt = 0.05;
  c.final_time = 10.0;
  c.cadence = 1.0;
  return c;
}

}  // namespace

TEST_CASE("pressure law") {
  const PressureLaw law(1.4);
  CHECK(law.dpressure(1.0) == 1.0);
  CHECK(law.beta(0.0) == 0.0);
  for (double a : {-0.3, 0.01, 0.5})
    CHECK(law.beta(a) == doctest::Approx(law.dpressure(1 + a) / (1 + a) - 1.0).epsilon(1e-14));
  const PressureLaw two(2.0);
  for (double a : {-0.4, -0.01, 0.0, 0.2, 3.0}) CHECK(two.beta(a) == 0.0);
  CHECK_THROWS_AS(PressureLaw(1.0), ConfigError);
  CHECK_THROWS_AS(PressureLaw(0.5), ConfigError);
}

TEST_CASE("solver config validation") {
  SolverConfig ok;
  CHECK_NOTHROW(ok.validate());
  auto bad = [](auto edit) {
    SolverConfig c;
    edit(c);
    return c;
  };
  CHECK_THROWS_AS(bad([](SolverConfig& c) { c.dt = 0.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](SolverConfig& c) { c.final_time = 0.01; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](SolverConfig& c) { c.cadence = 0.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](SolverConfig& c) { c.gamma = 1.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](SolverConfig& c) { c.amplitude = -0.1; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](SolverConfig& c) { c.width = 0.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](SolverConfig& c) { c.dealias = 0.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](SolverConfig& c) { c.dealias = 1.2; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](SolverConfig& c) { c.density_floor = 1.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](SolverConfig& c) { c.radius = 400.0; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](SolverConfig& c) { c.final_time = 10.01; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](SolverConfig& c) { c.cadence = 0.07; }).validate(), ConfigError);
  CHECK_THROWS_AS(bad([](SolverConfig& c) { c.modes = 4; }).validate(), ConfigError);
  CHECK_NOTHROW(bad([](SolverConfig& c) { c.final_time = 0.0; }).validate());
}

TEST_CASE("Gaussian initial data") {
  const RadialGrid g(4096, 40.0);
  const auto [a0, v0] = initial_data_gaussian(0.01, 1.0, g);
  CHECK(a0.space == Space::physical);
  CHECK(oracle::max_abs(v0.values) == 0.0);
  CHECK(lp_norm(a0, kInf) == doctest::Approx(0.01).epsilon(1e-4));
  CHECK(lp_norm(a0, kInf) == a0.values[0]);
  for (std::size_t m = 1; m < g.size(); ++m) CHECK(a0.values[m] <= a0.values[m - 1]);
  CHECK(lp_norm(a0, 2.0) == doctest::Approx(0.01 * std::pow(std::numbers::pi / 2, 0.75)).epsilon(1e-10));

  const auto [z, zv] = initial_data_gaussian(0.0, 1.0, g);
  CHECK(oracle::max_abs(z.values) == 0.0);
  CHECK_THROWS_AS(initial_data_gaussian(-1.0, 1.0, g), ConfigError);
  CHECK_THROWS_AS(initial_data_gaussian(0.01, 0.0, g), ConfigError);
}

TEST_CASE("velocity reconstruction") {
  const RadialGrid g(512, 30.0);
  CHECK(oracle::max_abs(reconstruct_velocity(RadialScalarField::zeros(g, Space::spectral)).values) == 0.0);

  auto mode = RadialScalarField::zeros(g, Space::spectral);
  const std::size_t k = 25;
  mode.values[k] = 1.0;
  const auto u = reconstruct_velocity(mode);
  const double rho = g.rho(k);
  const double c = std::sqrt(2.0 / std::numbers::pi) * g.drho() * rho;
  for (std::size_t m = 0; m < g.size(); ++m) {
    const double r = g.r(m);
    // U = -d/dr [rho^{-1} c sin(r rho)/r]
    const double expect = -(c / rho) * (rho * std::cos(r * rho) / r - std::sin(r * rho) / (r * r));
    CHECK(u.values[m] == doctest::Approx(expect).epsilon(1e-12).scale(c));
  }

  // Wide domain so the slowly decaying |D|^{-1} v is negligible at r = R.
  const RadialGrid wide(8192, 400.0);
  std::mt19937_64 rng(6);
  const auto v = oracle::random_band_limited(wide, rng, 0.2, 6.0);
  const auto div = to_spectral(divergence_of_profile(reconstruct_velocity(v)));
  RadialScalarField back = div;
  for (std::size_t i = 0; i < wide.size(); ++i) back.values[i] /= wide.rho(i);
  // Compared in physical space: the lowest spectral nodes carry rounding
  // amplified by 1/rho_1 but hold no content.
  const auto vp = to_physical(v);
  CHECK(oracle::max_abs_diff(to_physical(back).values, vp.values) <= 1e-9 * oracle::max_abs(vp.values));

  CHECK_THROWS_AS(reconstruct_velocity(to_physical(v)), UsageError);
}

TEST_CASE("nonlinear right-hand side") {
  const RadialGrid g(1023, 40.0);
  const auto zero = RadialScalarField::zeros(g, Space::spectral);
  const auto z = nonlinear_rhs(zero, zero, PressureLaw(1.4));
  CHECK(oracle::max_abs(z.f_hat.values) == 0.0);
  CHECK(oracle::max_abs(z.h_hat.values) == 0.0);

  // With v = 0 the only surviving term is beta(a) grad a, which vanishes at gamma = 2.
  const auto s = gaussian_state(g, 0.05);
  const auto t2 = nonlinear_rhs(s.a_hat, zero, PressureLaw(2.0));
  CHECK(oracle::max_abs(t2.f_hat.values) == 0.0);
  CHECK(oracle::max_abs(t2.h_hat.values) == 0.0);
  const auto t14 = nonlinear_rhs(s.a_hat, zero, PressureLaw(1.4));
  CHECK(oracle::max_abs(t14.h_hat.values) > 0.0);

  // Quadratic leading order.
  std::mt19937_64 rng(77);
  const auto a = oracle::random_band_limited(g, rng, 0.05, 4.0);
  const auto v = oracle::random_band_limited(g, rng, 0.05, 4.0);
  std::vector<double> le, ln;
  for (double eps : {1e-3, 1e-4, 1e-5}) {
    auto ea = a, ev = v;
    for (double& x : ea.values) x *= eps;
    for (double& x : ev.values) x *= eps;
    le.push_back(std::log(eps));
    ln.push_back(std::log(rhs_norm(nonlinear_rhs(ea, ev, PressureLaw(1.4)))));
  }
  const double slope = (ln[2] - ln[0]) / (le[2] - le[0]);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.025));
  CHECK((ln[1] - ln[0]) / (le[1] - le[0]) == doctest::Approx(2.0).epsilon(0.025));

  CHECK_THROWS_AS(nonlinear_rhs(to_physical(a), v, PressureLaw(1.4)), UsageError);
}

TEST_CASE("quadratic smallness bound") {
  // Measured once at 0.221 on this family and frozen with a 25% margin.
  constexpr double K = 0.28;
  const RadialGrid g(2047, 64.0);
  double worst = 0.0;
  for (double c : {0.1, 0.03, 0.01, 0.001})
    for (double w : {1.0, 2.0}) {
      const auto s = gaussian_state(g, c, w);
      const auto s1 = run(s, 0.05, 1.0);
      const double state = std::hypot(spectral_l2_norm(s1.a_hat), spectral_l2_norm(s1.v_hat));
      const double ratio = rhs_norm(nonlinear_rhs(s1.a_hat, s1.v_hat, PressureLaw(1.4))) / (state * state);
      worst = std::max(worst, ratio);
    }
  MESSAGE("max ||N(u)||_2 / ||u||_2^2 = " << worst);
  CHECK(worst <= K);
}

TEST_CASE("density guard") {
  const RadialGrid g(1023, 40.0);
  const auto [a0, v0] = initial_data_gaussian(0.6, 1.0, g);
  auto neg = a0;
  for (double& x : neg.values) x = -x;
  const auto s = SolverState::initial(neg, v0);
  try {
    nonlinear_rhs(s.a_hat, s.v_hat, PressureLaw(1.4), {2.0 / 3.0, 0.5, 3.25});
    FAIL("expected SolverAbort");
  } catch (const SolverAbort& e) {
    CHECK(e.time() == 3.25);
    CHECK(e.mode() >= 0);
    CHECK(std::string(e.what()).find("density") != std::string::npos);
  }
  CHECK_NOTHROW(nonlinear_rhs(s.a_hat, s.v_hat, PressureLaw(1.4), {2.0 / 3.0, 0.3, 0.0}));
}

TEST_CASE("linear step is the exact propagator") {
  const RadialGrid g(1023, 40.0);
  std::mt19937_64 rng(9);
  const auto a = oracle::random_band_limited(g, rng, 0.05, 8.0);
  const auto v = oracle::random_band_limited(g, rng, 0.05, 8.0);
  const auto s = SolverState::initial(a, v);
  const Etd2Stepper linear(g, 0.1, PressureLaw(1.4), {}, false);
  SolverState x = s;
  for (int i = 0; i < 10; ++i) x = linear.step(x);
  const auto [ea, ev] = apply_semigroup(a, v, 1.0);
  const double scale = std::max(oracle::max_abs(ea.values), oracle::max_abs(ev.values));
  CHECK(oracle::max_abs_diff(x.a_hat.values, ea.values) <= 1e-12 * scale);
  CHECK(oracle::max_abs_diff(x.v_hat.values, ev.values) <= 1e-12 * scale);
  CHECK(x.a_lin.values == x.a_hat.values);

  // Zero data under the full nonlinear step.
  const auto zero = gaussian_state(g, 0.0);
  const auto z1 = step_etd2(zero, 0.1, PressureLaw(1.4));
  CHECK(z1.t == doctest::Approx(0.1));
  CHECK(oracle::max_abs(z1.a_hat.values) == 0.0);
  CHECK(oracle::max_abs(z1.v_hat.values) == 0.0);
}

TEST_CASE("second-order convergence") {
  const RadialGrid g(1023, 32.0);
  const auto s0 = gaussian_state(g, 0.01);
  const auto ref = run(s0, 0.025 / 8, 1.0);
  std::vector<double> err;
  for (double dt : {0.1, 0.05, 0.025}) err.push_back(spectral_max_diff(run(s0, dt, 1.0), ref));
  MESSAGE("errors " << err[0] << " " << err[1] << " " << err[2]);
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.2));
  CHECK(err[1] / err[2] == doctest::Approx(4.0).epsilon(0.2));

  // One step against two half steps: the local defect is O(dt^3). Started
  // after the initial layer so the step sizes are in the asymptotic range.
  const auto s1 = run(s0, 0.05, 2.0);
  std::vector<double> defect;
  for (double dt : {0.1, 0.05}) defect.push_back(spectral_max_diff(run(s1, dt, dt), run(s1, dt / 2, dt)));
  CHECK(defect[0] / defect[1] == doctest::Approx(8.0).epsilon(0.25));
}

TEST_CASE("Duhamel part") {
  const RadialGrid g(2047, 64.0);
  const auto s0 = gaussian_state(g, 0.01);
  const auto [na, nv] = nonlinear_part(s0);
  CHECK(oracle::max_abs(na.values) == 0.0);
  CHECK(oracle::max_abs(nv.values) == 0.0);

  const auto s10 = run(s0, 0.05, 10.0);
  const auto [a, v] = physical_pair(s10);
  const auto [pa, pv] = nonlinear_part(s10);
  const double total = lp_norm_pair(a, v, 2.0);
  const double duhamel = lp_norm_pair(pa, pv, 2.0);
  MESSAGE("t = 10: ||(a,v)||_2 = " << total << ", Duhamel part " << duhamel);
  CHECK(duhamel > 0.0);
  CHECK(duhamel * 10.0 <= total);

  const auto z = run(gaussian_state(g, 0.0), 0.05, 2.0);
  const auto [za, zv] = nonlinear_part(z);
  CHECK(oracle::max_abs(za.values) == 0.0);
  CHECK(oracle::max_abs(zv.values) == 0.0);
}

TEST_CASE("simulate") {
  SolverConfig c = small_config();
  c.final_time = 0.0;
  const auto r0 = simulate(c);
  REQUIRE(r0.rows.size() == 1);
  CHECK(r0.rows[0].t == 0.0);
  const auto [a0, v0] = initial_data_gaussian(c.amplitude, c.width, c.grid());
  CHECK(r0.rows[0].l2_av == doctest::Approx(lp_norm(a0, 2.0)).epsilon(1e-12));
  CHECK(r0.rows[0].linf_av == doctest::Approx(lp_norm(a0, kInf)).epsilon(1e-12));
  CHECK(r0.rows[0].nl_l2 == 0.0);

  c = small_config();
  c.amplitude = 0.0;
  c.final_time = 3.0;
  for (const auto& row : simulate(c).rows) {
    CHECK(row.l2_av == 0.0);
    CHECK(row.linf_av == 0.0);
    CHECK(row.besov0_21 == 0.0);
    CHECK(row.besov0_inf1 == 0.0);
    CHECK(row.nl_l2 == 0.0);
    CHECK(row.nl_besov_inf1 == 0.0);
    CHECK(row.weighted_sup == 0.0);
  }

  c = small_config();
  c.final_time = 25.0;
  c.radius = 128.0;
  std::size_t seen = 0;
  const auto r1 = simulate(c, [&](const DiagnosticsRow&) { ++seen; });
  const auto r2 = simulate(c);
  REQUIRE(r1.rows.size() == 26);
  CHECK(seen == 26);
  for (std::size_t i = 0; i < r1.rows.size(); ++i) {
    CHECK(r1.rows[i].t == static_cast<double>(i));
    CHECK(r1.rows[i].l2_av == r2.rows[i].l2_av);
    CHECK(r1.rows[i].nl_besov_inf1 == r2.rows[i].nl_besov_inf1);
    CHECK(r1.rows[i].weighted_sup == r2.rows[i].weighted_sup);
  }
  CHECK(r1.final_state.a_hat.values == r2.final_state.a_hat.values);
  for (std::size_t i = 6; i < r1.rows.size(); ++i) CHECK(r1.rows[i].l2_av < r1.rows[i - 1].l2_av);
  for (const auto& row : r1.rows) {
    CHECK(row.energy == doctest::Approx(row.l2_av * row.l2_av));
    CHECK(row.besov0_inf1 >= 0.0);
  }
}

TEST_CASE("simulate reports density aborts") {
  SolverConfig c = small_config();
  c.modes = 2047;
  c.radius = 100.0;
  c.amplitude = 0.9;
  c.density_floor = 0.99;
  c.final_time = 10.0;
  CHECK_THROWS_AS(simulate(c), SolverAbort);
}
