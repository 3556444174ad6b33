#include <doctest.h>

#include <cmath>
#include <complex>

#include "opeflow/rgflow.hpp"

using namespace opeflow::rg;

TEST_SUITE_BEGIN("rgflow");

TEST_CASE("beta values on the two axes") {
  // gamma = 1 kills the gamma flow
  const BetaValue a = beta_eval(CouplingState(1.0, {0.3, 0.0}, 4));
  CHECK(a.dgamma == 0.0);
  CHECK(a.ddelta.real() == doctest::Approx(std::pow(0.3, 3) / 48.0));
  CHECK(a.ddelta.imag() == 0.0);

  const BetaValue b = beta_eval(CouplingState(0.0, {0.0, 0.0}, 4));
  CHECK(b.dgamma == 0.0);
  CHECK(std::abs(b.ddelta) == 0.0);

  // imaginary coupling: dgamma/dt = +|delta|^2 (1-gamma)/n^2 > 0
  const BetaValue c = beta_eval(CouplingState(0.0, {0.0, 0.1}, 4));
  CHECK(c.dgamma == doctest::Approx(6.25e-4).epsilon(1e-12));
  CHECK(c.ddelta.real() == doctest::Approx(0.0));
  CHECK(c.ddelta.imag() == doctest::Approx(-0.001 / 48.0));
}

// Independent check of the closed form: finite differences of the claimed
// solution must reproduce the flow equations before anything else uses it.
TEST_CASE("closed form satisfies the flow equations (finite differences)") {
  const double eps = 1e-6;
  for (const auto& s0 : {CouplingState(0.5, {0.1, 0.0}, 4), CouplingState(0.9, {0.0, 0.2}, 4),
                         CouplingState(0.2, {0.05, 0.0}, 2)}) {
    for (const double t : {0.0, 5.0, 40.0}) {
      const CouplingState here = closed_form(s0, t);
      const CouplingState fwd = closed_form(s0, t + eps);
      const CouplingState bwd = closed_form(s0, t - eps);
      const BetaValue beta = beta_eval(here);
      const double dg = (fwd.gamma - bwd.gamma) / (2 * eps);
      const std::complex<double> dd = (fwd.delta - bwd.delta) / (2 * eps);
      CHECK(dg == doctest::Approx(beta.dgamma).epsilon(1e-6));
      CHECK(std::abs(dd - beta.ddelta) < 1e-8 * std::max(1.0, std::abs(beta.ddelta)));
    }
  }
}

TEST_CASE("closed form special values") {
  const CouplingState s0(0.5, {0.1, 0.0}, 4);
  const CouplingState at0 = closed_form(s0, 0.0);
  CHECK(at0.gamma == doctest::Approx(0.5));
  CHECK(at0.delta.real() == doctest::Approx(0.1));
  // delta(100)^-2 = 100 - 200/48
  const CouplingState at100 = closed_form(s0, 100.0);
  CHECK(at100.delta.real() ==
        doctest::Approx(1.0 / std::sqrt(100.0 - 200.0 / 48.0)).epsilon(1e-14));
  CHECK(at100.delta.real() == doctest::Approx(0.10215078369).epsilon(1e-9));
  CHECK_THROWS_AS(closed_form(s0, blowup_time(s0) + 1.0), BlowupReached);

  // imaginary coupling shrinks monotonically
  const CouplingState im(0.9, {0.0, 0.1}, 4);
  double prev = std::abs(im.delta);
  for (double t = 10.0; t <= 100.0; t += 10.0) {
    const double mag = std::abs(closed_form(im, t).delta);
    CHECK(mag < prev);
    prev = mag;
  }
}

TEST_CASE("fixed point is exactly stationary and the linearization vanishes") {
  const BetaValue fp = beta_eval(CouplingState(1.0, {0.0, 0.0}, 4));
  CHECK(fp.dgamma == 0.0);
  CHECK(std::abs(fp.ddelta) == 0.0);
  // both betas are at least quadratic in the deviations
  const double h = 1e-7;
  for (const auto& dir : {CouplingState(1.0 + h, {0.0, 0.0}, 4),
                          CouplingState(1.0, {h, 0.0}, 4), CouplingState(1.0, {0.0, h}, 4)}) {
    const BetaValue b = beta_eval(dir);
    CHECK(std::fabs(b.dgamma) <= h * h / 4.0);
    CHECK(std::abs(b.ddelta) <= h * h / 4.0);
  }
}

TEST_CASE("integration matches the closed form and converges at fourth order") {
  const CouplingState s0(0.5, {0.1, 0.0}, 4);
  const auto tr = integrate(s0, 50.0, 0.01);
  const CouplingState exact = closed_form(s0, 50.0);
  const auto& end = tr.back();
  CHECK(std::fabs(end.gamma - exact.gamma) < 1e-8);
  CHECK(std::abs(end.delta - exact.delta) < 1e-8 * std::abs(exact.delta));
  CHECK(tr.times.front() == 0.0);
  for (std::size_t i = 1; i < tr.times.size(); ++i) CHECK(tr.times[i] > tr.times[i - 1]);

  // order probe on a faster trajectory
  const CouplingState fast(0.5, {0.3, 0.0}, 2);
  const double tf = 0.8 * blowup_time(fast);
  IntegrateOptions loose;
  loose.error_bound = 1.0;
  const CouplingState fex = closed_form(fast, tf);
  const auto err = [&](double dt) {
    const auto t = integrate(fast, tf, dt, loose);
    const double dg = t.back().gamma - fex.gamma;
    return std::sqrt(dg * dg + std::norm(t.back().delta - fex.delta));
  };
  const double ratio = err(0.1) / err(0.05);
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("constant trajectory at the fixed point") {
  const auto tr = integrate(CouplingState(1.0, {0.0, 0.0}, 4), 10.0, 0.1);
  for (const auto& s : tr.states) {
    CHECK(s.gamma == 1.0);
    CHECK(std::abs(s.delta) == 0.0);
  }
}

TEST_CASE("guards") {
  const CouplingState s0(1.0, {0.5, 0.0}, 4);
  CHECK_THROWS_AS(integrate(s0, blowup_time(s0), 0.01), BlowupReached);
  IntegrateOptions tight;
  tight.error_bound = 1e-18;
  CHECK_THROWS_AS(integrate(CouplingState(0.5, {0.3, 0.0}, 2), 10.0, 5.0, tight), StepTooLarge);
  CHECK_THROWS_AS(CouplingState(0.5, {0.1, 0.0}, 0), std::invalid_argument);
  CHECK_THROWS_AS(integrate(s0, 1.0, -0.1), std::invalid_argument);
}

TEST_CASE("coupling magnitude grows on the real axis, shrinks on the imaginary one") {
  const auto real_tr = integrate(CouplingState(1.0, {0.1, 0.0}, 4), 1000.0, 1.0);
  for (std::size_t i = 1; i < real_tr.states.size(); ++i)
    CHECK(std::abs(real_tr.states[i].delta) > std::abs(real_tr.states[i - 1].delta));
  const auto imag_tr = integrate(CouplingState(1.0, {0.0, 0.1}, 4), 1000.0, 1.0);
  for (std::size_t i = 1; i < imag_tr.states.size(); ++i)
    CHECK(std::abs(imag_tr.states[i].delta) < std::abs(imag_tr.states[i - 1].delta));
}

TEST_CASE("stability classification") {
  CHECK(classify_stability(CouplingState(1.0, {0.05, 0.0}, 4), 1000.0) == Stability::Unstable);
  CHECK(classify_stability(CouplingState(0.95, {0.0, 0.05}, 4), 1000.0) == Stability::Stable);
  CHECK(classify_stability(CouplingState(0.5, {0.0, 0.0}, 4), 100.0) == Stability::Marginal);
  // imaginary coupling drives gamma toward one
  const auto tr = integrate(CouplingState(0.9, {0.0, 0.1}, 4), 2000.0, 0.5);
  CHECK(std::fabs(tr.back().gamma - 1.0) < std::fabs(0.9 - 1.0));
  CHECK(std::abs(tr.back().delta) < 0.1);
}

TEST_CASE("csv export schema") {
  const auto tr = integrate(CouplingState(0.5, {0.1, 0.0}, 4), 1.0, 0.5);
  const std::string csv = trajectory_csv(tr);
  CHECK(csv.rfind("t,gamma,re_delta,im_delta\n", 0) == 0);
  // header + one row per sample
  std::size_t rows = 0;
  for (const char c : csv)
    if (c == '\n') ++rows;
  CHECK(rows == tr.times.size() + 1);

  const std::string sweep = sweep_csv({CouplingState(0.5, {0.1, 0.0}, 4),
                                       CouplingState(0.9, {0.0, 0.1}, 4)},
                                      1.0, 0.5);
  CHECK(sweep.rfind("trajectory,t,gamma,re_delta,im_delta\n", 0) == 0);
  CHECK(sweep.find("\n1,") != std::string::npos);
}

TEST_SUITE_END();
