#include "ermakov/trajectories.hpp"

#include <cmath>
#include <stdexcept>

namespace ermakov {

namespace {

MeanState mean_free(const SystemParams& p, const InitialState& init, double t) {
  if (p.gamma == 0.0) return {init.eta0 + init.etadot0 * t, init.etadot0};
  // eta = eta0 + (etadot0/gamma)(1 - e^{-gamma t}), written with expm1 so small
  // gamma t does not cancel.
  const double decay = std::exp(-p.gamma * t);
  return {init.eta0 - init.etadot0 / p.gamma * std::expm1(-p.gamma * t), init.etadot0 * decay};
}

MeanState mean_oscillatory(const SystemParams& p, const InitialState& init, double t) {
  const double omega = std::sqrt(p.omega0 * p.omega0 - 0.25 * p.gamma * p.gamma);
  const double c = std::cos(omega * t), s = std::sin(omega * t);
  const double damp = std::exp(-0.5 * p.gamma * t);
  const double eta = damp * (init.eta0 * c + (0.5 * p.gamma * init.eta0 + init.etadot0) * s / omega);
  const double eta_dot =
      damp * (init.etadot0 * c -
              (p.omega0 * p.omega0 * init.eta0 + 0.5 * p.gamma * init.etadot0) * s / omega);
  return {eta, eta_dot};
}

MeanState mean_aperiodic(const SystemParams& p, const InitialState& init, double t) {
  const double damp = std::exp(-0.5 * p.gamma * t);
  const double eta = damp * ((1.0 + 0.5 * p.gamma * t) * init.eta0 + init.etadot0 * t);
  const double eta_dot =
      damp * (init.etadot0 - 0.5 * p.gamma * t * (0.5 * p.gamma * init.eta0 + init.etadot0));
  return {eta, eta_dot};
}

MeanState mean_overdamped(const SystemParams& p, const InitialState& init, double t) {
  const double omega = std::sqrt(0.25 * p.gamma * p.gamma - p.omega0 * p.omega0);
  const double ch = std::cosh(omega * t), sh = std::sinh(omega * t);
  const double damp = std::exp(-0.5 * p.gamma * t);
  const double eta =
      damp * (init.eta0 * ch + (0.5 * p.gamma * init.eta0 + init.etadot0) * sh / omega);
  const double eta_dot =
      damp * (init.etadot0 * ch -
              (p.omega0 * p.omega0 * init.eta0 + 0.5 * p.gamma * init.etadot0) * sh / omega);
  return {eta, eta_dot};
}

FundamentalPair pair_free(const SystemParams& p, double t) {
  FundamentalPair fp;
  if (p.gamma == 0.0) {
    fp.xi1 = -t / p.mass;
    fp.xi2 = 1.0;
    fp.g1 = 1.0;
    fp.g2 = 0.0;
    fp.chi1 = -1.0;
    fp.chi2 = 0.0;
    return fp;
  }
  const double x = 0.5 * p.gamma * t;
  fp.xi1 = -2.0 / (p.mass * p.gamma) * std::sinh(x);
  fp.xi2 = std::cosh(x);
  fp.g1 = std::cosh(x);
  fp.g2 = -0.5 * p.gamma * p.mass * std::sinh(x);
  // chi1 = sinh - cosh and chi2 = (gamma m/2)(sinh - cosh) collapse to decaying
  // exponentials; the naive difference loses all digits once x is large.
  const double decay = std::exp(-x);
  fp.chi1 = -decay;
  fp.chi2 = -0.5 * p.gamma * p.mass * decay;
  return fp;
}

FundamentalPair pair_oscillatory(const SystemParams& p, double t) {
  const double omega = std::sqrt(p.omega0 * p.omega0 - 0.25 * p.gamma * p.gamma);
  const double c = std::cos(omega * t), s = std::sin(omega * t);
  FundamentalPair fp;
  fp.xi1 = -s / (p.mass * omega);
  fp.xi2 = c;
  fp.g1 = c;
  fp.g2 = p.mass * omega * s;
  fp.chi1 = -c + 0.5 * p.gamma / omega * s;
  fp.chi2 = -p.mass * omega * s - 0.5 * p.gamma * p.mass * c;
  return fp;
}

FundamentalPair pair_aperiodic(const SystemParams& p, double t) {
  FundamentalPair fp;
  fp.xi1 = -t / p.mass;
  fp.xi2 = 1.0;
  fp.g1 = 1.0;
  fp.g2 = 0.0;
  fp.chi1 = -1.0 + 0.5 * p.gamma * t;
  fp.chi2 = -0.5 * p.gamma * p.mass;
  return fp;
}

FundamentalPair pair_overdamped(const SystemParams& p, double t) {
  const double omega = std::sqrt(0.25 * p.gamma * p.gamma - p.omega0 * p.omega0);
  const double ch = std::cosh(omega * t), sh = std::sinh(omega * t);
  FundamentalPair fp;
  fp.xi1 = -sh / (p.mass * omega);
  fp.xi2 = ch;
  fp.g1 = ch;
  fp.g2 = -p.mass * omega * sh;
  // chi1 = -ch + (gamma/2w) sh mixes e^{+wt} and e^{-wt} with coefficients
  // (gamma/2 -+ w)/(2w); gamma/2 - w = omega0^2/(gamma/2 + w) avoids the
  // subtraction of nearly equal rates when omega0 is small.
  const double sum_rate = 0.5 * p.gamma + omega;
  const double diff_rate = p.omega0 * p.omega0 / sum_rate;  // gamma/2 - omega
  const double ep = std::exp(omega * t), em = std::exp(-omega * t);
  fp.chi1 = 0.5 * (ep * diff_rate / omega - em * sum_rate / omega);
  fp.chi2 = -0.5 * p.mass * (ep * diff_rate + em * sum_rate);
  return fp;
}

}  // namespace

MeanState mean_position(const SystemParams& params, const InitialState& init, double t) {
  switch (classify_regime(params)) {
    case DampingRegime::free_motion: return mean_free(params, init, t);
    case DampingRegime::under_critical: return mean_oscillatory(params, init, t);
    case DampingRegime::aperiodic_limit: return mean_aperiodic(params, init, t);
    case DampingRegime::over_damped: return mean_overdamped(params, init, t);
  }
  throw std::logic_error("unreachable regime");
}

FundamentalPair fundamental_solutions(const SystemParams& params, double t) {
  switch (classify_regime(params)) {
    case DampingRegime::free_motion: return pair_free(params, t);
    case DampingRegime::under_critical: return pair_oscillatory(params, t);
    case DampingRegime::aperiodic_limit: return pair_aperiodic(params, t);
    case DampingRegime::over_damped: return pair_overdamped(params, t);
  }
  throw std::logic_error("unreachable regime");
}

double free_motion_position_limit(const SystemParams& params, const InitialState& init) {
  if (params.omega0 != 0.0 || params.gamma <= 0.0)
    throw std::invalid_argument("position limit requires free motion with gamma > 0");
  return init.eta0 + init.etadot0 / params.gamma;
}

}  // namespace ermakov
