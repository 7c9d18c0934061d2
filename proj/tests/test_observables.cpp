#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "ermakov/model.hpp"
#include "ermakov/observables.hpp"
#include "ermakov/trajectories.hpp"
#include "ermakov/width_dynamics.hpp"

using namespace ermakov;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

struct Case {
  SystemParams params;
  InitialState init;
};

std::vector<Case> observable_cases() {
  std::vector<Case> out;
  Case c;
  c.params.gamma = 1.0;
  c.init.eta0 = 1.0;
  c.init.etadot0 = 0.3;
  c.init.alphadot0_abs = 0.5;
  out.push_back(c);  // damped free motion
  c.params.omega0 = 1.0;
  out.push_back(c);  // under-critical
  c.params.gamma = 2.0;
  c.init.alphadot0_abs = 0.0;
  out.push_back(c);  // aperiodic limit
  c.params.gamma = 4.0;
  c.init.alphadot0_abs = 2.0;
  out.push_back(c);  // over-damped
  c.params = SystemParams{};
  c.params.mass = 2.0;
  c.params.hbar = 0.7;
  c.params.omega0 = 1.5;
  c.params.gamma = 0.6;
  c.init.alpha0 = 0.8;
  c.init.alphadot0_abs = 0.3;
  out.push_back(c);  // non-unit constants
  return out;
}

SystemParams free_params() {
  SystemParams p;
  p.gamma = 1.0;
  return p;
}

InitialState resting_width() {
  InitialState init;
  init.alpha0 = 1.0;
  init.alphadot0_abs = 0.0;
  return init;
}

}  // namespace

TEST_CASE("moments of the initially resting width under friction") {
  const SystemParams p = free_params();
  const InitialState init = resting_width();

  const Moments m0 = moments(p, init, 0.0);
  CHECK(m0.sigma_x2 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(m0.sigma_p2 == doctest::Approx(0.625).epsilon(1e-14));
  CHECK(m0.sigma_xp == doctest::Approx(-0.25).epsilon(1e-14));

  const Moments m1 = moments(p, init, 1.0);
  CHECK(m1.sigma_x2 == doctest::Approx(1.1788507935190547).epsilon(1e-13));
  CHECK(m1.sigma_p2 == doctest::Approx(0.22992465073215146).epsilon(1e-13));
  CHECK(m1.sigma_xp > 0.0);
  CHECK(uncertainty_product(m1) == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("moment routes agree away from the initial time") {
  for (const auto& c : observable_cases()) {
    for (double t : linspace(0.0, 4.0, 9)) {
      const Moments via_pair = moments(c.params, c.init, t);
      const WidthState w = ermakov_alpha(c.params, c.init, t);
      const Moments via_width = moments_from_width(c.params, w);
      const Moments via_riccati = moments_from_riccati(c.params, riccati_from_width(c.params, w));
      CAPTURE(c.params.gamma);
      CAPTURE(t);
      CHECK(via_width.sigma_x2 ==
            doctest::Approx(via_pair.sigma_x2).epsilon(1e-10));
      CHECK(via_width.sigma_p2 ==
            doctest::Approx(via_pair.sigma_p2).epsilon(1e-9).scale(via_pair.sigma_x2));
      CHECK(via_width.sigma_xp ==
            doctest::Approx(via_pair.sigma_xp).epsilon(1e-9).scale(via_pair.sigma_x2));
      CHECK(via_riccati.sigma_x2 == doctest::Approx(via_width.sigma_x2).epsilon(1e-12));
      CHECK(via_riccati.sigma_p2 ==
            doctest::Approx(via_width.sigma_p2).epsilon(1e-11).scale(via_width.sigma_x2));
      CHECK(via_riccati.sigma_xp ==
            doctest::Approx(via_width.sigma_xp).epsilon(1e-11).scale(via_width.sigma_x2));
    }
  }
  SystemParams p;
  CHECK_THROWS_AS(moments_from_width(p, {0.0, 0.1}), std::domain_error);
  CHECK_THROWS_AS(moments_from_width(p, {-1.0, 0.1}), std::domain_error);
  CHECK_THROWS_AS(moments_from_riccati(p, {0.1, 0.0, Representation::nl}), std::domain_error);
  CHECK_THROWS_AS(moments_from_riccati(p, {0.1, -0.5, Representation::nl}), std::domain_error);
}

TEST_CASE("uncertainty product is pinned at hbar^2/4 along every flow") {
  for (const auto& c : observable_cases()) {
    const double target = 0.25 * c.params.hbar * c.params.hbar;
    for (double t : linspace(0.0, 8.0, 33)) {
      const double det = uncertainty_determinant(c.params, c.init, t);
      // The determinant is a full cancellation of sigma_x^2 sigma_p^2, so
      // even the 113-bit assembly carries last-place noise of that product;
      // past the critical point it crosses 1e-12 near t = 8.
      const Moments m = moments(c.params, c.init, t);
      const double cancel_floor = 1e-33 * m.sigma_x2 * m.sigma_p2;
      CAPTURE(c.params.gamma);
      CAPTURE(t);
      CHECK(std::abs(det - target) < std::max(1e-12 * target, cancel_floor));
    }
    // The plain double assembly holds the same identity while the covariance
    // entries are still of moderate size.
    for (double t : linspace(0.0, 1.5, 7)) {
      const double prod = uncertainty_product(moments(c.params, c.init, t));
      CHECK(std::abs(prod - target) < 1e-11 * target);
    }
  }
}

TEST_CASE("free motion uncertainty product saturates at its closed limit") {
  const SystemParams p = free_params();
  InitialState init;
  init.alpha0 = 1.0;
  init.alphadot0_abs = 0.5;

  init.branch = Branch::plus;
  const double limit_plus = free_motion_product_limit(p, init);
  CHECK(limit_plus == doctest::Approx(0.5).epsilon(1e-14));
  init.branch = Branch::minus;
  CHECK(free_motion_product_limit(p, init) == doctest::Approx(limit_plus).epsilon(1e-14));

  const Moments late = moments(p, init, 40.0);
  CHECK(late.sigma_x2 * late.sigma_p2 == doctest::Approx(limit_plus).epsilon(1e-11));

  SystemParams bound = p;
  bound.omega0 = 1.0;
  CHECK_THROWS_AS(free_motion_product_limit(bound, init), std::domain_error);
  SystemParams undamped;
  CHECK_THROWS_AS(free_motion_product_limit(undamped, init), std::domain_error);
}

TEST_CASE("quantum energy bifurcates with the width branch") {
  SystemParams p;
  p.omega0 = 1.0;
  p.gamma = 1.0;
  InitialState init;
  init.alpha0 = 1.0;

  init.alphadot0_abs = 0.0;
  CHECK(quantum_energy(p, init, 0.0) == doctest::Approx(0.5625).epsilon(1e-15));

  init.alphadot0_abs = 0.5;
  init.branch = Branch::plus;
  CHECK(quantum_energy(p, init, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  init.branch = Branch::minus;
  CHECK(quantum_energy(p, init, 0.0) == doctest::Approx(0.75).epsilon(1e-15));

  // The width-state form evaluates to the same numbers.
  const WidthState w{1.0, -0.5};
  CHECK(quantum_energy_from_width(p, w) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("branch gap matches its product form and the thermal scales") {
  SystemParams p;
  p.omega0 = 1.0;
  p.gamma = 1.0;
  InitialState init;
  init.alpha0 = 1.0;
  init.alphadot0_abs = 0.5;

  const double gap = energy_gap(p, init);
  CHECK(gap == doctest::Approx(0.25).epsilon(1e-15));
  init.branch = Branch::minus;
  const double e_minus = quantum_energy(p, init, 0.0);
  init.branch = Branch::plus;
  const double e_plus = quantum_energy(p, init, 0.0);
  CHECK(e_minus - e_plus == doctest::Approx(gap).epsilon(1e-13));

  // At |alphadot0| = gamma alpha0 / 2 the gap equals the Einstein temperature.
  CHECK(init.alphadot0_abs == 0.5 * p.gamma * init.alpha0);
  CHECK(einstein_kt(p, init) == doctest::Approx(gap).epsilon(1e-14));
  CHECK(diffusion_x0(p, init) == doctest::Approx(0.25).epsilon(1e-14));

  // A width at rest sits kT/4 above the undamped ground value.
  InitialState rest = resting_width();
  SystemParams undamped = p;
  undamped.gamma = 0.0;
  const double raised = quantum_energy(p, rest, 0.0);
  const double base = quantum_energy(undamped, rest, 0.0);
  CHECK(raised - base == doctest::Approx(0.25 * einstein_kt(p, rest)).epsilon(1e-13));
}

TEST_CASE("total energy splits into classical and quantum parts") {
  SystemParams p;
  p.omega0 = 1.0;
  p.gamma = 1.0;
  InitialState init;
  init.eta0 = 1.0;
  init.etadot0 = 0.2;
  init.alphadot0_abs = 0.5;

  for (double t : {0.0, 0.8, 2.5}) {
    const EnergyReport report = total_energy(p, init, t);
    const MeanState s = mean_position(p, init, t);
    const double classical =
        0.5 * p.mass * s.eta_dot * s.eta_dot + 0.5 * p.mass * p.omega0 * p.omega0 * s.eta * s.eta;
    CHECK(report.e_classical == doctest::Approx(classical).epsilon(1e-13));
    CHECK(report.e_quantum == doctest::Approx(quantum_energy(p, init, t)).epsilon(1e-13));
    CHECK(report.e_total == doctest::Approx(classical + report.e_quantum).epsilon(1e-13));
    CHECK(report.gap0 == doctest::Approx(energy_gap(p, init)).epsilon(1e-15));
  }
}

TEST_CASE("free motion quantum energy decays at the friction rate") {
  const SystemParams p = free_params();
  InitialState init;
  init.alpha0 = 1.0;
  init.alphadot0_abs = 0.5;
  const double e0 = quantum_energy(p, init, 0.0);
  const double e1 = quantum_energy(p, init, 1.0);
  CHECK(e1 / e0 == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
}

TEST_CASE("ermakov invariant is constant and its forms agree") {
  const InvariantReport at0 =
      ermakov_invariant(free_params(), [] {
        InitialState i;
        i.eta0 = 1.0;
        return i;
      }(), 0.0);
  CHECK(at0.i_expanding == doctest::Approx(0.625).epsilon(1e-14));
  CHECK(at0.i_moment == doctest::Approx(0.625).epsilon(1e-14));

  for (const auto& c : observable_cases()) {
    const double i0 = ermakov_invariant(c.params, c.init, 0.0).i_expanding;
    REQUIRE(i0 > 0.0);
    for (double t : linspace(0.0, 6.0, 41)) {
      const InvariantReport report = ermakov_invariant(c.params, c.init, t);
      CAPTURE(c.params.gamma);
      CAPTURE(t);
      CHECK(std::abs(report.i_expanding - i0) < 1e-11 * i0);
      CHECK(std::abs(report.i_moment - report.i_expanding) < 1e-11 * i0);
    }
  }
}

TEST_CASE("ermakov invariant vanishes for the resting centered packet") {
  SystemParams p;
  p.omega0 = 1.0;
  p.gamma = 1.0;
  InitialState init;  // eta0 = etadot0 = 0
  init.alphadot0_abs = 0.5;
  for (double t : {0.0, 1.0, 5.0}) {
    const InvariantReport report = ermakov_invariant(p, init, t);
    CHECK(std::abs(report.i_expanding) < 1e-15);
    CHECK(std::abs(report.i_moment) < 1e-15);
  }
}

TEST_CASE("velocity fields decompose the probability current") {
  for (const auto& c : observable_cases()) {
    for (double t : {0.0, 0.9, 2.2}) {
      for (double x : {-1.0, 0.4, 2.0}) {
        const VelocityFields v = velocity_fields(c.params, c.init, t, x);
        const WidthState w = ermakov_alpha(c.params, c.init, t);
        const MeanState s = mean_position(c.params, c.init, t);
        const double x_rel = x - s.eta;
        CHECK(v.v_total == doctest::Approx(v.v_nl + v.v_diff).epsilon(1e-12).scale(1.0));
        CHECK(v.v_tun ==
              doctest::Approx(w.alpha_dot / w.alpha * x_rel).epsilon(1e-12).scale(1.0));
        CHECK(v.v_diff == doctest::Approx(0.5 * c.params.gamma * x_rel).epsilon(1e-13).scale(1.0));
        CHECK(v.v_nl == doctest::Approx(v.v_total - v.v_diff).epsilon(1e-12).scale(1.0));
      }
    }
  }
}

TEST_CASE("velocity fields at the stationary width have no tunnelling part") {
  SystemParams p;
  p.omega0 = 1.0;
  p.gamma = 1.0;
  InitialState init;
  init.alpha0 = std::pow(0.75, -0.25);
  init.alphadot0_abs = 0.0;

  for (double t : {0.0, 1.3, 4.0}) {
    const VelocityFields v = velocity_fields(p, init, t, 1.0);
    CHECK(std::abs(v.v_tun) < 1e-10);
    CHECK(v.v_total == doctest::Approx(mean_position(p, init, t).eta_dot).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("stationary width pins the moments and the quantum energy") {
  SystemParams p;
  p.omega0 = 1.0;
  p.gamma = 1.0;
  InitialState init;
  init.alpha0 = std::pow(0.75, -0.25);
  init.alphadot0_abs = 0.0;

  const double inv_sqrt3 = 0.57735026918962576451;
  for (double t : {0.0, 0.7, 1.9, 6.0}) {
    const Moments m = moments(p, init, t);
    CAPTURE(t);
    CHECK(m.sigma_x2 == doctest::Approx(inv_sqrt3).epsilon(1e-11));
    CHECK(m.sigma_p2 == doctest::Approx(inv_sqrt3).epsilon(1e-11));
    CHECK(m.sigma_xp == doctest::Approx(-0.5 * inv_sqrt3).epsilon(1e-11));
    CHECK(quantum_energy(p, init, t) == doctest::Approx(inv_sqrt3).epsilon(1e-11));
  }

  // Removing the friction restores the symmetric undamped packet.
  SystemParams undamped = p;
  undamped.gamma = 0.0;
  InitialState sym;
  sym.alpha0 = 1.0;
  const Moments m = moments(undamped, sym, 2.0);
  CHECK(m.sigma_xp == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(uncertainty_product(m) == doctest::Approx(0.25).epsilon(1e-13));
}
