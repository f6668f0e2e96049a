#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "radcns/decay_lab.hpp"
#include "radcns/errors.hpp"

using namespace radcns;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

DecaySeries sampled(double lo, double hi, int n, const auto& f) {
  DecaySeries s;
  for (int i = 0; i < n; ++i) {
    const double t = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    s.push(t, f(t));
  }
  return s;
}

DecaySeries linear_times(double lo, double hi, double dt, const auto& f) {
  DecaySeries s;
  for (double t = lo; t <= hi + 1e-9; t += dt) s.push(t, f(t));
  return s;
}

}  // namespace

TEST_CASE("theoretical exponents") {
  CHECK(theoretical_exponent(2.0, ExponentKind::full) == 0.75);
  CHECK(theoretical_exponent(inf, ExponentKind::full) == 2.0);
  CHECK(theoretical_exponent(2.0, ExponentKind::nonlinear) == 1.25);
  CHECK(theoretical_exponent(inf, ExponentKind::nonlinear) == 2.5);
  for (double p : {2.0, 3.0, 7.0, inf}) CHECK(theoretical_exponent(p, ExponentKind::weighted_sup) == 0.75);

  // sigma(p) = 2 - 5/(2p): 3/4, 7/6, 11/8, 19/12, 2.
  const double ps[] = {2.0, 3.0, 4.0, 6.0, inf};
  const double exact[] = {0.75, 7.0 / 6.0, 11.0 / 8.0, 19.0 / 12.0, 2.0};
  for (int i = 0; i < 5; ++i) {
    CHECK(theoretical_exponent(ps[i], ExponentKind::full) == doctest::Approx(exact[i]).epsilon(1e-15));
    if (i > 0) CHECK(theoretical_exponent(ps[i], ExponentKind::full) > theoretical_exponent(ps[i - 1], ExponentKind::full));
  }
  CHECK_THROWS_AS(theoretical_exponent(1.5, ExponentKind::full), UnsupportedParameterError);
  CHECK_THROWS_AS(theoretical_exponent(1.0, ExponentKind::weighted_sup), UnsupportedParameterError);
}

TEST_CASE("fit recovers exact power laws") {
  const auto s = linear_times(1.0, 300.0, 0.5, [](double t) { return 7.0 * std::pow(t, -2.0); });
  const FitResult f = fit_decay_exponent(s, 10.0, 200.0);
  CHECK(std::abs(f.slope - 2.0) <= 1e-12);
  CHECK(std::abs(f.r2 - 1.0) <= 1e-12);
  CHECK(std::abs(f.intercept - std::log(7.0)) <= 1e-11);
  CHECK(f.t_lo >= 10.0);
  CHECK(f.t_hi <= 200.0);
  CHECK(f.points == 381);
  CHECK_FALSE(f.zero_variance);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ex(0.5, 3.0), amp(0.01, 100.0);
  for (int i = 0; i < 50; ++i) {
    const double e = ex(rng), a = amp(rng);
    const auto r = sampled(1.0, 1000.0, 64, [&](double t) { return a * std::pow(t, -e); });
    const FitResult g = fit_decay_exponent(r, 1.0, 1000.0);
    CHECK(std::abs(g.slope - e) <= 1e-12);
    CHECK(std::abs(g.r2 - 1.0) <= 1e-12);
  }
}

TEST_CASE("fit of a constant series") {
  const auto s = linear_times(1.0, 50.0, 1.0, [](double) { return 3.0; });
  const FitResult f = fit_decay_exponent(s, 1.0, 50.0);
  CHECK(f.slope == 0.0);
  CHECK(f.r2 == 1.0);
  CHECK(f.zero_variance);
}

TEST_CASE("fit of a perturbed power law") {
  const auto s = sampled(10.0, 1000.0, 200, [](double t) { return std::pow(t, -0.75) * (1.0 + 0.1 * std::sin(std::log(t))); });
  const FitResult f = fit_decay_exponent(s, 10.0, 1000.0);
  CHECK(std::abs(f.slope - 0.75) <= 0.05);
  CHECK(f.r2 > 0.9);
  CHECK(f.r2 <= 1.0);
}

TEST_CASE("fit errors") {
  const auto s = linear_times(1.0, 20.0, 1.0, [](double t) { return 1.0 / t; });
  CHECK_THROWS_AS(fit_decay_exponent(s, 10.0, 12.5), FitError);  // 3 points
  CHECK_NOTHROW(fit_decay_exponent(s, 10.0, 13.0));
  CHECK_THROWS_AS(fit_decay_exponent(s, 100.0, 200.0), FitError);

  auto bad = s;
  bad.value[11] = 0.0;   // t = 12
  bad.value[14] = -1.0;  // t = 15
  try {
    fit_decay_exponent(bad, 10.0, 20.0);
    FAIL("expected FitError");
  } catch (const FitError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("12") != std::string::npos);
    CHECK(msg.find("15") != std::string::npos);
  }
  // Nonpositive values outside the window are ignored.
  CHECK_NOTHROW(fit_decay_exponent(bad, 1.0, 11.0));
}

TEST_CASE("fit checks against a target") {
  const auto s = linear_times(1.0, 200.0, 1.0, [](double t) { return std::pow(t, -0.78); });
  const FitCheck ok = check_fit("l2", s, 10.0, 200.0, 0.75, 0.05, 0.995);
  CHECK(ok.pass);
  CHECK(ok.label == "l2");
  const FitCheck off = check_fit("l2", s, 10.0, 200.0, 0.75, 0.02, 0.995);
  CHECK_FALSE(off.pass);
  const auto noisy = linear_times(1.0, 200.0, 1.0, [](double t) { return std::pow(t, -0.75) * (1.0 + 0.5 * std::sin(t)); });
  const FitCheck low_r2 = check_fit("noisy", noisy, 10.0, 200.0, 0.75, 1.0, 0.995);
  CHECK(low_r2.fit.r2 < 0.995);
  CHECK_FALSE(low_r2.pass);
}

TEST_CASE("ratio checks") {
  const auto exact = linear_times(1.0, 200.0, 1.0, [](double t) { return 5.0 / (t * t); });
  const RatioCheck r = check_scaled_ratio("lower", exact, 20.0, 200.0, 2.0, 3.0);
  CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.min == doctest::Approx(5.0));
  CHECK(r.pass);

  const auto slow = linear_times(1.0, 200.0, 1.0, [](double t) { return 1.0 / t; });
  const RatioCheck s = check_scaled_ratio("lower", slow, 20.0, 200.0, 2.0, 3.0);
  CHECK(s.ratio == doctest::Approx(10.0));
  CHECK_FALSE(s.pass);

  const auto zero = linear_times(1.0, 200.0, 1.0, [](double) { return 0.0; });
  CHECK_FALSE(check_scaled_ratio("lower", zero, 20.0, 200.0, 2.0, 3.0).pass);

  const auto w = linear_times(1.0, 200.0, 1.0, [](double t) { return 4.0 * std::pow(t + 1.0, -0.75); });
  const RatioCheck wb = check_weighted_bound("weighted", w, 1.0, 200.0, 5.0);
  CHECK(wb.ratio == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(wb.pass);
  const auto slow_w = linear_times(1.0, 200.0, 1.0, [](double t) { return 1.0 / std::sqrt(t + 1.0); });
  CHECK(check_weighted_bound("weighted", slow_w, 1.0, 200.0, 5.0).ratio ==
        doctest::Approx(std::pow(201.0 / 2.0, 0.25)));
  const auto grow = linear_times(1.0, 200.0, 1.0, [](double) { return 1.0; });
  const RatioCheck gb = check_weighted_bound("weighted", grow, 1.0, 200.0, 5.0);
  CHECK(gb.ratio == doctest::Approx(std::pow(201.0 / 2.0, 0.75)));
  CHECK_FALSE(gb.pass);
}

TEST_CASE("linear report on synthetic series") {
  LinearSeries ls;
  ls.p_values = {2.0, inf};
  ls.lp = {linear_times(0.05, 200.0, 0.05, [](double t) { return std::pow(t, -0.75); }),
           linear_times(0.05, 200.0, 0.05, [](double t) { return 3.0 * std::pow(t, -2.0); })};
  ls.weighted_sup = linear_times(0.05, 200.0, 0.05, [](double t) { return std::pow(t + 1.0, -1.0); });
  const ExperimentReport rep = evaluate_linear_decay(ls);
  CHECK(rep.pass());
  CHECK(rep.verdict() == "PASS");
  REQUIRE(rep.fits.size() == 2);
  CHECK(rep.fits[0].target == 0.75);
  CHECK(rep.fits[1].target == 2.0);
  CHECK(rep.fits[0].tolerance == 0.05);
  CHECK(rep.fits[1].tolerance == 0.10);

  LinearSeries zero = ls;
  for (auto& s : zero.lp)
    for (double& v : s.value) v = 0.0;
  const ExperimentReport z = evaluate_linear_decay(zero);
  CHECK(z.empty);
  CHECK(z.fits.empty());
  CHECK(z.verdict() == "EMPTY");
  CHECK_FALSE(z.pass());
}

TEST_CASE("nonlinear report on synthetic rows") {
  std::vector<DiagnosticsRow> rows;
  for (int i = 0; i <= 4000; ++i) {
    DiagnosticsRow r;
    r.t = 0.05 * i;
    const double t = std::max(r.t, 0.05);
    r.l2_av = std::pow(t, -0.75);
    r.linf_av = std::pow(t, -2.0);
    r.nl_l2 = 1e-3 * std::pow(t, -1.25);
    r.nl_besov_inf1 = 1e-3 * std::pow(t, -2.5);
    rows.push_back(r);
  }
  const double ps[] = {2.0, inf};
  const ExperimentReport rep = evaluate_nonlinear_decay(rows, ps);
  CHECK(rep.fits.size() == 4);
  CHECK(rep.pass());

  const DecaySeries c = column(rows, &DiagnosticsRow::nl_l2);
  CHECK(c.size() == rows.size());
  CHECK(c.value[100] == rows[100].nl_l2);

  for (auto& r : rows) r.nl_besov_inf1 = 1e-3 * std::pow(std::max(r.t, 0.05), -3.0);
  CHECK_FALSE(evaluate_nonlinear_decay(rows, ps).pass());

  const double p3[] = {3.0};
  CHECK_THROWS_AS(evaluate_nonlinear_decay(rows, p3), ConfigError);
}

TEST_CASE("lower-bound and weighted reports on zero data") {
  const auto zero = linear_times(0.05, 200.0, 0.05, [](double) { return 0.0; });
  const ExperimentReport lb = evaluate_lower_bound(zero);
  CHECK(lb.empty);
  CHECK_FALSE(lb.pass());
  CHECK(lb.verdict() == "EMPTY");

  const ExperimentReport wd = evaluate_weighted_decay(zero);
  CHECK_FALSE(wd.empty);
  CHECK_FALSE(wd.notes.empty());
}

TEST_CASE("merging reports") {
  const auto good = linear_times(1.0, 200.0, 1.0, [](double t) { return 2.0 / (t * t); });
  ExperimentReport a = evaluate_lower_bound(good);
  ExperimentReport b = evaluate_lower_bound(good);
  merge_report(a, b, "nonlinear");
  REQUIRE(a.ratios.size() == 2);
  CHECK(a.ratios[1].label.find("nonlinear") != std::string::npos);
  CHECK(a.pass());

  const auto slow = linear_times(1.0, 200.0, 1.0, [](double t) { return 1.0 / t; });
  merge_report(a, evaluate_lower_bound(slow), "slow");
  CHECK_FALSE(a.pass());
}

TEST_CASE("linear evolution of zero data is empty") {
  SolverConfig cfg;
  cfg.modes = 255;
  cfg.radius = 50.0;
  cfg.final_time = 20.0;
  cfg.amplitude = 0.0;
  const double ps[] = {2.0, inf};
  const ExperimentReport rep = run_linear_decay(cfg, ps);
  CHECK(rep.empty);
  CHECK(rep.verdict() == "EMPTY");
  CHECK(run_lower_bound(cfg).verdict() == "EMPTY");
}

TEST_CASE("kernel probe sweep") {
  const double one[] = {16.0};
  const KernelProbeReport single = run_kernel_lower_probe(one);
  REQUIRE(single.samples.size() == 1);
  // The sweep ratio, then the refinement check.
  REQUIRE(single.report.ratios.size() == 2);
  CHECK(single.report.ratios[0].ratio == 1.0);
  CHECK(single.report.pass());
  CHECK(single.samples[0].scaled == doctest::Approx(256.0 * single.samples[0].sup));
  CHECK(single.samples[0].j0 == -1);
  CHECK(single.samples[0].refinement_change < 1e-6);

  const double bad[] = {16.0, 2.0};
  CHECK_THROWS_AS(run_kernel_lower_probe(bad), DomainError);
}
