#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "ermakov/model.hpp"
#include "ermakov/oracle.hpp"
#include "ermakov/trajectories.hpp"

using namespace ermakov;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

// One parameter set per damping regime, with non-unit mass thrown in.
std::vector<SystemParams> regime_params() {
  std::vector<SystemParams> out;
  SystemParams p;
  out.push_back(p);  // undamped free motion
  p.gamma = 1.3;
  out.push_back(p);  // damped free motion
  p = SystemParams{};
  p.omega0 = 2.0;
  p.gamma = 1.0;
  p.mass = 2.0;
  out.push_back(p);  // under-critical
  p = SystemParams{};
  p.omega0 = 1.0;
  p.gamma = 2.0;
  out.push_back(p);  // aperiodic limit
  p = SystemParams{};
  p.omega0 = 1.0;
  p.gamma = 4.0;
  p.mass = 0.5;
  out.push_back(p);  // over-damped
  return out;
}

}  // namespace

TEST_CASE("fundamental pair initial data is universal") {
  for (const auto& p : regime_params()) {
    const FundamentalPair fp = fundamental_solutions(p, 0.0);
    CAPTURE(p.omega0);
    CAPTURE(p.gamma);
    CHECK(fp.xi1 == 0.0);
    CHECK(fp.xi2 == 1.0);
    CHECK(fp.g1 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fp.g2 == 0.0);
    CHECK(fp.chi1 == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(fp.chi2 == doctest::Approx(-0.5 * p.mass * p.gamma).epsilon(1e-15));
  }
}

TEST_CASE("wronskian combination stays at one") {
  for (const auto& p : regime_params()) {
    for (double t : linspace(0.0, 3.0, 31)) {
      const FundamentalPair fp = fundamental_solutions(p, t);
      CAPTURE(p.gamma);
      CAPTURE(t);
      CHECK(wronskian(fp) == doctest::Approx(1.0).epsilon(1e-11));
    }
  }
}

TEST_CASE("chi columns equal the assembled combination at moderate times") {
  for (const auto& p : regime_params()) {
    for (double t : linspace(0.0, 2.0, 21)) {
      const FundamentalPair fp = fundamental_solutions(p, t);
      const double chi1 = -fp.g1 - 0.5 * p.mass * p.gamma * fp.xi1;
      const double chi2 = -fp.g2 - 0.5 * p.mass * p.gamma * fp.xi2;
      CAPTURE(p.gamma);
      CAPTURE(t);
      CHECK(fp.chi1 == doctest::Approx(chi1).epsilon(1e-9));
      CHECK(fp.chi2 == doctest::Approx(chi2).epsilon(1e-9));
    }
  }
}

TEST_CASE("fundamental pair solves the shifted-frequency equation") {
  for (const auto& p : regime_params()) {
    const double omega_sq = p.omega0 * p.omega0 - 0.25 * p.gamma * p.gamma;
    const auto rhs = [&](double, const ode::State<2>& y) {
      return ode::State<2>{y[1], -omega_sq * y[0]};
    };
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-12;
    const auto times = linspace(0.0, 4.0, 17);
    const auto first = ode::integrate_at(rhs, ode::State<2>{0.0, -1.0 / p.mass}, times, cfg);
    const auto second = ode::integrate_at(rhs, ode::State<2>{1.0, 0.0}, times, cfg);
    double env1 = 0.0, env2 = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      env1 = std::max(env1, std::abs(first[i][0]));
      env2 = std::max(env2, std::abs(second[i][0]));
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
      const FundamentalPair fp = fundamental_solutions(p, times[i]);
      CAPTURE(p.gamma);
      CAPTURE(times[i]);
      CHECK(std::abs(fp.xi1 - first[i][0]) < 1e-8 * env1);
      CHECK(std::abs(fp.g1 - (-p.mass * first[i][1])) < 1e-8 * std::max(1.0, p.mass * env1));
      CHECK(std::abs(fp.xi2 - second[i][0]) < 1e-8 * env2);
      CHECK(std::abs(fp.g2 - (-p.mass * second[i][1])) < 1e-8 * std::max(1.0, p.mass * env2));
    }
  }
}

TEST_CASE("mean position starts from the supplied state") {
  InitialState init;
  init.eta0 = 1.7;
  init.etadot0 = -0.3;
  for (const auto& p : regime_params()) {
    const MeanState s = mean_position(p, init, 0.0);
    CHECK(s.eta == doctest::Approx(1.7).epsilon(1e-15));
    CHECK(s.eta_dot == doctest::Approx(-0.3).epsilon(1e-15));
  }
}

TEST_CASE("mean position follows the damped oscillator equation") {
  InitialState init;
  init.eta0 = 1.0;
  init.etadot0 = 0.5;
  for (const auto& p : regime_params()) {
    const auto times = linspace(0.0, 10.0, 41);
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-13;
    const auto ref = integrate_mean(p, init, times, cfg);
    double env = 0.0, env_dot = 0.0;
    for (const auto& s : ref) {
      env = std::max(env, std::abs(s.eta));
      env_dot = std::max(env_dot, std::abs(s.eta_dot));
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
      const MeanState s = mean_position(p, init, times[i]);
      CAPTURE(p.gamma);
      CAPTURE(times[i]);
      CHECK(std::abs(s.eta - ref[i].eta) < 1e-8 * env);
      CHECK(std::abs(s.eta_dot - ref[i].eta_dot) < 1e-8 * env_dot);
    }
  }
}

TEST_CASE("free motion settles at the drift limit") {
  SystemParams p;
  p.gamma = 1.0;
  InitialState init;
  init.eta0 = 1.0;
  init.etadot0 = 0.8;
  const double limit = free_motion_position_limit(p, init);
  CHECK(limit == doctest::Approx(1.8).epsilon(1e-15));
  CHECK(std::abs(mean_position(p, init, 30.0).eta - limit) < 1e-9);

  SystemParams bound = p;
  bound.omega0 = 1.0;
  CHECK_THROWS_AS(free_motion_position_limit(bound, init), std::invalid_argument);
  SystemParams undamped;
  CHECK_THROWS_AS(free_motion_position_limit(undamped, init), std::invalid_argument);
}
