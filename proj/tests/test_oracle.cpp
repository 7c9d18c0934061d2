#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "ermakov/model.hpp"
#include "ermakov/oracle.hpp"
#include "ermakov/width_dynamics.hpp"

using namespace ermakov;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

}  // namespace

TEST_CASE("a constant particular riccati solution stays put") {
  SystemParams p;
  p.omega0 = 1.0;
  p.gamma = 4.0;
  const std::complex<double> fixed = riccati_particular(p, ParticularBranch::plus);
  CHECK(fixed.real() == doctest::Approx(-0.26794919243112270647).epsilon(1e-14));
  CHECK(fixed.imag() == 0.0);
  const auto times = linspace(0.0, 5.0, 11);
  const auto flow = integrate_riccati(p, fixed, Representation::nl, times);
  for (const auto& c : flow) {
    CHECK(std::abs(c - fixed) < 1e-9);
  }
}

TEST_CASE("integrated riccati matches the closed width route") {
  SystemParams p;
  p.gamma = 1.0;  // free motion
  InitialState init;
  init.alpha0 = 1.0;
  init.alphadot0_abs = 0.0;
  const RiccatiValue c0 = initial_riccati(p, init);
  CHECK(c0.real_part == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(c0.imag_part == doctest::Approx(1.0).epsilon(1e-15));

  const auto times = linspace(0.0, 1.0, 5);
  const auto flow = integrate_riccati(p, c0.as_complex(), Representation::nl, times);
  const RiccatiValue closed = riccati_from_width(p, ermakov_alpha(p, init, 1.0));
  CHECK(std::abs(flow.back() - closed.as_complex()) < 1e-8);
}

TEST_CASE("ck riccati integration matches the representation map") {
  SystemParams p;
  p.omega0 = 1.0;
  p.gamma = 1.0;
  InitialState init;
  init.alpha0 = 1.0;
  init.alphadot0_abs = 0.5;
  const RiccatiValue c0 = initial_riccati(p, init);
  const auto times = linspace(0.0, 1.0, 9);
  const auto nl = integrate_riccati(p, c0.as_complex(), Representation::nl, times);
  const auto ck = integrate_riccati(p, c0.as_complex(), Representation::ck, times);
  CHECK(std::abs(ck.front() - nl.front()) == 0.0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const std::complex<double> mapped = nl[i] * std::exp(p.gamma * times[i]);
    CHECK(std::abs(ck[i] - mapped) < 1e-8);
  }
}

TEST_CASE("riccati blow-up is reported, not returned") {
  SystemParams p;
  p.omega0 = 1.0;
  const auto times = linspace(0.0, 2.0, 3);
  // A real initial value on the undamped oscillator runs into the tangent pole.
  CHECK_THROWS_AS(integrate_riccati(p, {0.0, 0.0}, Representation::nl, times),
                  std::runtime_error);
}

TEST_CASE("moment flow conserves the determinant and hits the closed values") {
  SystemParams p;
  p.gamma = 1.0;
  Moments m0;
  m0.sigma_x2 = 0.5;
  m0.sigma_p2 = 0.625;
  m0.sigma_xp = -0.25;
  const auto times = linspace(0.0, 1.0, 21);
  const MomentsFlow flow = integrate_moments(p, m0, times);
  CHECK(flow.max_determinant_drift < 1e-9);
  for (const auto& m : flow.samples) {
    CHECK(m.sigma_x2 * m.sigma_p2 - m.sigma_xp * m.sigma_xp ==
          doctest::Approx(0.25).epsilon(1e-9));
  }
  CHECK(flow.samples.back().sigma_x2 ==
        doctest::Approx(1.1788507935190547).epsilon(1e-8));
  CHECK(flow.samples.back().sigma_p2 ==
        doctest::Approx(0.229924650732151451).epsilon(1e-8));
}

TEST_CASE("fixed-point moments are a steady state of the flow") {
  SystemParams p;
  p.omega0 = 1.0;
  p.gamma = 1.0;
  Moments m0;
  m0.sigma_x2 = 0.57735026918962576451;
  m0.sigma_p2 = 0.57735026918962576451;
  m0.sigma_xp = -0.28867513459481288225;
  const auto times = linspace(0.0, 10.0, 21);
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-12;
  const MomentsFlow flow = integrate_moments(p, m0, times, cfg);
  for (const auto& m : flow.samples) {
    CHECK(m.sigma_x2 == doctest::Approx(m0.sigma_x2).epsilon(1e-9));
    CHECK(m.sigma_p2 == doctest::Approx(m0.sigma_p2).epsilon(1e-9));
    CHECK(m.sigma_xp == doctest::Approx(m0.sigma_xp).epsilon(1e-9));
  }
}

TEST_CASE("third-order width equation reproduces the variance") {
  SystemParams p;
  p.gamma = 1.0;
  // jet of sigma_x^2 at t = 0 for alpha0 = 1, alphadot0 = 0:
  // value 1/2, slope 2 sigma_xp + sigma_x2 = 0, curvature 2 sigma_p2 = 5/4.
  const std::array<double, 3> jet0 = {0.5, 0.0, 1.25};
  const auto times = linspace(0.0, 1.0, 11);
  const auto flow = integrate_sigma_third_order(p, jet0, times);
  CHECK(flow.back()[0] == doctest::Approx(1.1788507935190547).epsilon(1e-8));
}

TEST_CASE("halving the fixed step cuts the error sixteenfold") {
  SystemParams p;
  p.omega0 = 1.0;
  p.gamma = 1.0;
  InitialState init;
  init.eta0 = 1.0;
  const std::vector<double> times = {0.0, 2.0};

  IntegratorConfig ref;
  ref.rel_tol = 1e-13;
  ref.abs_tol = 1e-13;
  const double exact = integrate_mean(p, init, times, ref).back().eta;

  IntegratorConfig coarse;
  coarse.method = OdeMethod::fixed_step_rk4;
  coarse.fixed_step = 0.02;
  IntegratorConfig fine = coarse;
  fine.fixed_step = 0.01;
  const double err_coarse = std::abs(integrate_mean(p, init, times, coarse).back().eta - exact);
  const double err_fine = std::abs(integrate_mean(p, init, times, fine).back().eta - exact);
  CHECK(err_fine > 0.0);
  const double ratio = err_coarse / err_fine;
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("integrator configuration is validated") {
  SystemParams p;
  InitialState init;
  const std::vector<double> times = {0.0, 1.0};
  IntegratorConfig bad;
  bad.rel_tol = 1.0;
  CHECK_THROWS_AS(integrate_mean(p, init, times, bad), std::invalid_argument);
  bad = IntegratorConfig{};
  bad.abs_tol = 0.0;
  CHECK_THROWS_AS(integrate_mean(p, init, times, bad), std::invalid_argument);
  bad = IntegratorConfig{};
  bad.fixed_step = -1.0;
  CHECK_THROWS_AS(integrate_mean(p, init, times, bad), std::invalid_argument);
}

TEST_CASE("sample times must increase") {
  SystemParams p;
  InitialState init;
  const std::vector<double> times = {0.0, 1.0, 1.0};
  CHECK_THROWS_AS(integrate_mean(p, init, times, IntegratorConfig{}), std::invalid_argument);
}
