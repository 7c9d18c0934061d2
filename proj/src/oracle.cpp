#include "ermakov/oracle.hpp"

#include <cmath>

namespace ermakov {

void validate_integrator_config(const IntegratorConfig& cfg) {
  auto in_range = [](double tol) { return std::isfinite(tol) && tol >= 1e-14 && tol <= 1e-2; };
  if (!in_range(cfg.rel_tol)) throw std::invalid_argument("rel_tol must lie in [1e-14, 1e-2]");
  if (!in_range(cfg.abs_tol)) throw std::invalid_argument("abs_tol must lie in [1e-14, 1e-2]");
  if (!(cfg.max_step > 0.0)) throw std::invalid_argument("max_step must be > 0");
  if (!(std::isfinite(cfg.fixed_step) && cfg.fixed_step > 0.0))
    throw std::invalid_argument("fixed_step must be finite and > 0");
}

std::vector<MeanSample> integrate_mean(const SystemParams& params, const InitialState& init,
                                       std::span<const double> times, const IntegratorConfig& cfg) {
  validate(params, init);
  const double g = params.gamma;
  const double w2 = params.omega0 * params.omega0;
  auto rhs = [g, w2](double, const ode::State<2>& y) -> ode::State<2> {
    return {y[1], -g * y[1] - w2 * y[0]};
  };
  auto states = ode::integrate_at(rhs, ode::State<2>{init.eta0, init.etadot0}, times, cfg);
  std::vector<MeanSample> out(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) out[i] = {states[i][0], states[i][1]};
  return out;
}

std::vector<WidthState> integrate_ermakov(const SystemParams& params, const InitialState& init,
                                          std::span<const double> times,
                                          const IntegratorConfig& cfg) {
  validate(params, init);
  const double omega_sq = params.omega0 * params.omega0 - 0.25 * params.gamma * params.gamma;
  auto rhs = [omega_sq](double, const ode::State<2>& y) -> ode::State<2> {
    const double a = y[0];
    return {y[1], -omega_sq * a + 1.0 / (a * a * a)};
  };
  auto guard = [&cfg](double t, const ode::State<2>& y) {
    if (!(y[0] > cfg.abs_tol))
      throw std::runtime_error("width collapse: alpha reached " + std::to_string(y[0]) +
                               " at t = " + std::to_string(t));
  };
  auto states = ode::integrate_at(rhs, ode::State<2>{init.alpha0, signed_alphadot0(init)}, times,
                                  cfg, guard);
  std::vector<WidthState> out(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) out[i] = {states[i][0], states[i][1]};
  return out;
}

std::vector<std::complex<double>> integrate_riccati(const SystemParams& params,
                                                    std::complex<double> c0, Representation rep,
                                                    std::span<const double> times,
                                                    const IntegratorConfig& cfg) {
  if (rep == Representation::expanding)
    throw std::invalid_argument("riccati integration supports the nl and ck representations");
  const double g = params.gamma;
  const double w2 = params.omega0 * params.omega0;

  auto rhs_nl = [g, w2](double, const ode::State<2>& y) -> ode::State<2> {
    const double u = y[0], v = y[1];
    return {-g * u - (u * u - v * v) - w2, -g * v - 2.0 * u * v};
  };
  auto rhs_ck = [g, w2](double t, const ode::State<2>& y) -> ode::State<2> {
    const double u = y[0], v = y[1];
    const double decay = std::exp(-g * t), growth = std::exp(g * t);
    return {-decay * (u * u - v * v) - growth * w2, -decay * 2.0 * u * v};
  };
  auto guard = [](double t, const ode::State<2>& y) {
    if (std::hypot(y[0], y[1]) > k_blowup_threshold)
      throw std::runtime_error("riccati solution blew up at t = " + std::to_string(t));
  };

  std::vector<ode::State<2>> states;
  ode::State<2> y0{c0.real(), c0.imag()};
  if (rep == Representation::nl)
    states = ode::integrate_at(rhs_nl, y0, times, cfg, guard);
  else
    states = ode::integrate_at(rhs_ck, y0, times, cfg, guard);

  std::vector<std::complex<double>> out(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) out[i] = {states[i][0], states[i][1]};
  return out;
}

MomentsFlow integrate_moments(const SystemParams& params, const Moments& m0,
                              std::span<const double> times, const IntegratorConfig& cfg) {
  const double g = params.gamma;
  const double m = params.mass;
  const double w2 = params.omega0 * params.omega0;
  auto rhs = [g, m, w2](double, const ode::State<3>& y) -> ode::State<3> {
    const double sx2 = y[0], sp2 = y[1], sxp = y[2];
    return {2.0 * sxp / m + g * sx2, -2.0 * m * w2 * sxp - g * sp2, sp2 / m - m * w2 * sx2};
  };
  MomentsFlow flow;
  const double quarter = 0.25 * params.hbar * params.hbar;
  auto guard = [&flow, quarter](double, const ode::State<3>& y) {
    const double det = y[0] * y[1] - y[2] * y[2];
    flow.max_determinant_drift = std::max(flow.max_determinant_drift,
                                          std::abs(det - quarter) / quarter);
  };
  auto states = ode::integrate_at(rhs, ode::State<3>{m0.sigma_x2, m0.sigma_p2, m0.sigma_xp},
                                  times, cfg, guard);
  flow.samples.resize(states.size());
  for (std::size_t i = 0; i < states.size(); ++i)
    flow.samples[i] = {states[i][0], states[i][1], states[i][2]};
  return flow;
}

std::vector<std::array<double, 3>> integrate_sigma_third_order(const SystemParams& params,
                                                               const std::array<double, 3>& jet0,
                                                               std::span<const double> times,
                                                               const IntegratorConfig& cfg) {
  const double omega_sq = params.omega0 * params.omega0 - 0.25 * params.gamma * params.gamma;
  auto rhs = [omega_sq](double, const ode::State<3>& y) -> ode::State<3> {
    return {y[1], y[2], -4.0 * omega_sq * y[1]};
  };
  auto states = ode::integrate_at(rhs, ode::State<3>{jet0[0], jet0[1], jet0[2]}, times, cfg);
  std::vector<std::array<double, 3>> out(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) out[i] = states[i];
  return out;
}

}  // namespace ermakov
