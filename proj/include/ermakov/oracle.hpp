// Reference ODE integration used to cross-validate every closed form in the
// library. Two methods are provided: an embedded Dormand-Prince 5(4) pair with
// adaptive step control (default) and a fixed-step classical 4th-order scheme
// kept for convergence studies. Both are deliberately independent of the
// closed-form modules.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ermakov/model.hpp"

namespace ermakov {

enum class OdeMethod { adaptive_embedded, fixed_step_rk4 };

struct IntegratorConfig {
  OdeMethod method = OdeMethod::adaptive_embedded;
  double rel_tol = 1e-10;  // allowed range [1e-14, 1e-2]
  double abs_tol = 1e-10;  // allowed range [1e-14, 1e-2]
  double max_step = std::numeric_limits<double>::infinity();
  double fixed_step = 1e-3;  // step size for the fixed-step method
};

void validate_integrator_config(const IntegratorConfig& cfg);

namespace ode {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
double error_norm(const State<N>& err, const State<N>& y, const State<N>& ynew,
                  double abs_tol, double rel_tol) {
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
    const double q = err[i] / sc;
    sum += q * q;
  }
  return std::sqrt(sum / static_cast<double>(N));
}

template <std::size_t N>
bool finite(const State<N>& y) {
  for (double v : y)
    if (!std::isfinite(v)) return false;
  return true;
}

// One Dormand-Prince 5(4) step from (t, y) with step h. Writes the 5th-order
// result to y5 and the embedded error estimate to err. Returns false if any
// stage evaluated to a non-finite value.
template <std::size_t N, class F>
bool dopri5_step(F&& f, double t, const State<N>& y, double h, State<N>& y5, State<N>& err) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  State<N> k1 = f(t, y);
  State<N> tmp;
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
  State<N> k2 = f(t + c2 * h, tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
  State<N> k3 = f(t + c3 * h, tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  State<N> k4 = f(t + c4 * h, tmp);
  for (std::size_t i = 0; i < N; ++i)
    tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  State<N> k5 = f(t + c5 * h, tmp);
  for (std::size_t i = 0; i < N; ++i)
    tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
  State<N> k6 = f(t + h, tmp);
  for (std::size_t i = 0; i < N; ++i)
    y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
  State<N> k7 = f(t + h, y5);
  for (std::size_t i = 0; i < N; ++i)
    err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
  return finite(k1) && finite(k2) && finite(k3) && finite(k4) && finite(k5) && finite(k6) &&
         finite(k7) && finite(y5);
}

template <std::size_t N, class F>
State<N> rk4_step(F&& f, double t, const State<N>& y, double h) {
  State<N> k1 = f(t, y);
  State<N> tmp;
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  State<N> k2 = f(t + 0.5 * h, tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  State<N> k3 = f(t + 0.5 * h, tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
  State<N> k4 = f(t + h, tmp);
  State<N> out;
  for (std::size_t i = 0; i < N; ++i)
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

// Hairer-style first step guess.
template <std::size_t N, class F>
double initial_step(F&& f, double t0, const State<N>& y0, double span,
                    const IntegratorConfig& cfg) {
  State<N> f0 = f(t0, y0);
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y0[i]);
    d0 += (y0[i] / sc) * (y0[i] / sc);
    d1 += (f0[i] / sc) * (f0[i] / sc);
  }
  d0 = std::sqrt(d0 / N);
  d1 = std::sqrt(d1 / N);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  State<N> y1;
  for (std::size_t i = 0; i < N; ++i) y1[i] = y0[i] + h0 * f0[i];
  State<N> f1 = f(t0 + h0, y1);
  double d2 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(y0[i]);
    const double q = (f1[i] - f0[i]) / sc;
    d2 += q * q;
  }
  d2 = std::sqrt(d2 / N) / h0;
  const double dm = std::max(d1, d2);
  double h1 = dm > 1e-15 ? std::pow(0.01 / dm, 0.2) : std::max(1e-6, h0 * 1e-3);
  double h = std::min({100.0 * h0, h1, span, cfg.max_step});
  return std::max(h, 1e-12 * span);
}

// Integrates y' = f(t, y) from times.front() through times.back(), recording
// the state at every requested time. times must be strictly increasing. guard
// is invoked after each accepted step and may throw to abort.
template <std::size_t N, class F, class G>
std::vector<State<N>> integrate_at(F&& f, State<N> y0, std::span<const double> times,
                                   const IntegratorConfig& cfg, G&& guard) {
  validate_integrator_config(cfg);
  if (times.empty()) return {};
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("sample times must be strictly increasing");

  std::vector<State<N>> out;
  out.reserve(times.size());
  double t = times.front();
  State<N> y = y0;
  guard(t, y);
  out.push_back(y);

  if (times.size() == 1) return out;
  const double span = times.back() - t;

  if (cfg.method == OdeMethod::fixed_step_rk4) {
    for (std::size_t k = 1; k < times.size(); ++k) {
      const double target = times[k];
      const auto steps =
          static_cast<std::size_t>(std::ceil((target - t) / cfg.fixed_step - 1e-12));
      const std::size_t n = std::max<std::size_t>(steps, 1);
      const double h = (target - t) / static_cast<double>(n);
      for (std::size_t s = 0; s < n; ++s) {
        y = rk4_step(f, t, y, h);
        t = (s + 1 == n) ? target : t + h;
        if (!finite(y)) throw std::runtime_error("integration diverged at t = " + std::to_string(t));
        guard(t, y);
      }
      out.push_back(y);
    }
    return out;
  }

  double h = initial_step(f, t, y, span, cfg);
  std::size_t total_steps = 0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double target = times[k];
    while (t < target) {
      if (++total_steps > 20'000'000)
        throw std::runtime_error("step budget exhausted at t = " + std::to_string(t));
      const double h_try = std::min({h, target - t, cfg.max_step});
      State<N> y5, err;
      const bool ok = dopri5_step(f, t, y, h_try, y5, err);
      const double en = ok ? error_norm(err, y, y5, cfg.abs_tol, cfg.rel_tol)
                           : std::numeric_limits<double>::infinity();
      if (en <= 1.0) {
        t += h_try;
        y = y5;
        guard(t, y);
        const double grow = std::isfinite(en) && en > 1e-30
                                ? std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0)
                                : 5.0;
        h = h_try * grow;
      } else {
        const double shrink =
            std::isfinite(en) ? std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.9) : 0.1;
        h = h_try * shrink;
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0))
          throw std::runtime_error("step size underflow at t = " + std::to_string(t));
      }
    }
    out.push_back(y);
  }
  return out;
}

template <std::size_t N, class F>
std::vector<State<N>> integrate_at(F&& f, State<N> y0, std::span<const double> times,
                                   const IntegratorConfig& cfg) {
  return integrate_at(
      std::forward<F>(f), y0, times, cfg, [](double, const State<N>&) {});
}

}  // namespace ode

struct MeanSample {
  double eta = 0.0;
  double eta_dot = 0.0;
};

/// Mean-position equation eta'' + gamma eta' + omega0^2 eta = 0.
std::vector<MeanSample> integrate_mean(const SystemParams& params, const InitialState& init,
                                       std::span<const double> times,
                                       const IntegratorConfig& cfg = {});

/// Ermakov equation alpha'' + (omega0^2 - gamma^2/4) alpha = 1/alpha^3.
/// Aborts if alpha falls to abs_tol or below.
std::vector<WidthState> integrate_ermakov(const SystemParams& params, const InitialState& init,
                                          std::span<const double> times,
                                          const IntegratorConfig& cfg = {});

/// Complex Riccati equation in the requested representation (nl or ck):
///   nl: C' + gamma C + C^2 + omega0^2 = 0
///   ck: C' + e^{-gamma t} C^2 + e^{gamma t} omega0^2 = 0
/// Aborts with the failing t once |C| exceeds k_blowup_threshold.
std::vector<std::complex<double>> integrate_riccati(const SystemParams& params,
                                                    std::complex<double> c0, Representation rep,
                                                    std::span<const double> times,
                                                    const IntegratorConfig& cfg = {});

struct MomentsFlow {
  std::vector<Moments> samples;
  double max_determinant_drift = 0.0;  // max |det - hbar^2/4| / (hbar^2/4) along the flow
};

/// First-order system for the second moments:
///   d sigma_x2 = 2 sigma_xp/m + gamma sigma_x2
///   d sigma_p2 = -2 m omega0^2 sigma_xp - gamma sigma_p2
///   d sigma_xp = sigma_p2/m - m omega0^2 sigma_x2
MomentsFlow integrate_moments(const SystemParams& params, const Moments& m0,
                              std::span<const double> times, const IntegratorConfig& cfg = {});

/// Third-order equation for s = sigma_x2: s''' + 4 Omega^2 s' = 0 with
/// Omega^2 = omega0^2 - gamma^2/4. jet0 = (s, s', s'') at times.front().
std::vector<std::array<double, 3>> integrate_sigma_third_order(const SystemParams& params,
                                                               const std::array<double, 3>& jet0,
                                                               std::span<const double> times,
                                                               const IntegratorConfig& cfg = {});

}  // namespace ermakov
