#include "ermakov/width_dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace ermakov {

namespace {

// e^z - 1 without cancellation for small |z|.
std::complex<double> cexpm1(std::complex<double> z) {
  const double em1 = std::expm1(z.real());
  const double c = std::cos(z.imag()), s = std::sin(z.imag());
  const double half = std::sin(0.5 * z.imag());
  const double cm1 = -2.0 * half * half;  // cos(y) - 1
  return {em1 * c + cm1, (em1 + 1.0) * s};
}

}  // namespace

ErmakovConstants ermakov_constants(const SystemParams& params, const InitialState& init) {
  const double beta0 = 1.0 / (init.alpha0 * init.alpha0);
  ErmakovConstants k;
  k.A = params.mass / params.hbar * (init.alphadot0_abs * init.alphadot0_abs + beta0);
  k.B = init.alpha0 * init.alpha0 / (params.hbar * params.mass);
  k.C = init.alphadot0_abs * init.alpha0 / params.hbar;
  return k;
}

WidthProducts width_products(const SystemParams& params, const InitialState& init,
                             const FundamentalPair& fp) {
  const ErmakovConstants k = ermakov_constants(params, init);
  // Branch::plus takes the upper (minus) sign of the -+ cross terms.
  const double cross = -branch_sign(init.branch);
  WidthProducts w;
  w.alpha_sq = params.mass * params.hbar *
               (k.A * fp.xi1 * fp.xi1 + k.B * fp.xi2 * fp.xi2 +
                cross * 2.0 * k.C * fp.xi1 * fp.xi2);
  w.alpha_alphadot = -params.hbar * (k.A * fp.xi1 * fp.g1 + k.B * fp.xi2 * fp.g2 +
                                     cross * k.C * (fp.xi1 * fp.g2 + fp.xi2 * fp.g1));
  w.speed_sq = params.hbar / params.mass *
               (k.A * fp.g1 * fp.g1 + k.B * fp.g2 * fp.g2 + cross * 2.0 * k.C * fp.g1 * fp.g2);
  return w;
}

WidthState ermakov_alpha(const SystemParams& params, const InitialState& init, double t) {
  const WidthProducts w = width_products(params, init, fundamental_solutions(params, t));
  WidthState state;
  state.alpha = std::sqrt(w.alpha_sq);
  state.alpha_dot = w.alpha_alphadot / state.alpha;
  return state;
}

RiccatiValue riccati_from_width(const SystemParams& params, const WidthState& width) {
  RiccatiValue c;
  c.real_part = width.alpha_dot / width.alpha - 0.5 * params.gamma;
  c.imag_part = 1.0 / (width.alpha * width.alpha);
  c.representation = Representation::nl;
  return c;
}

RiccatiValue initial_riccati(const SystemParams& params, const InitialState& init) {
  RiccatiValue c;
  c.real_part = signed_alphadot0(init) / init.alpha0 - 0.5 * params.gamma;
  c.imag_part = 1.0 / (init.alpha0 * init.alpha0);
  c.representation = Representation::nl;
  return c;
}

RiccatiValue initial_riccati_from_moments(const SystemParams& params, double sigma_x0_sq,
                                          double sigma_xp0) {
  if (!(sigma_x0_sq > 0.0)) throw std::invalid_argument("sigma_x0_sq must be > 0");
  const double denom = params.mass * sigma_x0_sq;
  return {sigma_xp0 / denom, 0.5 * params.hbar / denom, Representation::nl};
}

std::complex<double> riccati_particular(const SystemParams& params, ParticularBranch which) {
  const double sign = which == ParticularBranch::plus ? 1.0 : -1.0;
  const double half_gamma = 0.5 * params.gamma;
  if (classify_regime(params) == DampingRegime::aperiodic_limit)
    return {-half_gamma, 0.0};  // double root
  const double disc = half_gamma * half_gamma - params.omega0 * params.omega0;
  if (disc >= 0.0) return {-half_gamma + sign * std::sqrt(disc), 0.0};
  return {-half_gamma, sign * std::sqrt(-disc)};
}

BernoulliResult riccati_bernoulli(const SystemParams& params, const InitialState& init,
                                  ParticularBranch which, double t) {
  validate(params, init);
  const std::complex<double> part = riccati_particular(params, which);
  const std::complex<double> c0 = initial_riccati(params, init).as_complex();
  const std::complex<double> v0 = c0 - part;
  const double scale = std::max(std::abs(part), std::abs(c0));
  if (std::abs(v0) <= k_degenerate_v0 * scale)
    return {make_riccati(part, Representation::nl), true};

  const std::complex<double> kappa0 = 1.0 / v0;
  const std::complex<double> rate = 2.0 * (part + 0.5 * params.gamma);  // exponent of 1/V
  std::complex<double> v;
  if (rate == 0.0) {
    v = 1.0 / (kappa0 + t);  // aperiodic limit: kappa grows linearly
  } else {
    const std::complex<double> w = rate * t;
    if (w.real() > 690.0) {
      v = 0.0;  // V decayed below double range; C has reached the particular solution
    } else {
      v = 1.0 / (kappa0 * std::exp(w) + cexpm1(w) / rate);
    }
  }
  return {make_riccati(part + v, Representation::nl), false};
}

RiccatiValue transform_representation(const RiccatiValue& value, Representation to, double t,
                                      const SystemParams& params) {
  if (value.representation == to) return value;
  std::complex<double> c = value.as_complex();
  switch (value.representation) {
    case Representation::nl: break;
    case Representation::ck: c *= std::exp(-params.gamma * t); break;
    case Representation::expanding: c -= 0.5 * params.gamma; break;
  }
  switch (to) {
    case Representation::nl: break;
    case Representation::ck: c *= std::exp(params.gamma * t); break;
    case Representation::expanding: c += 0.5 * params.gamma; break;
  }
  return make_riccati(c, to);
}

WidthState transform_width(const WidthState& width, Representation from, Representation to,
                           double t, const SystemParams& params) {
  if (from == to) return width;
  WidthState nl = width;
  if (from == Representation::ck) {
    const double grow = std::exp(0.5 * params.gamma * t);
    nl.alpha = width.alpha * grow;
    nl.alpha_dot = (width.alpha_dot + 0.5 * params.gamma * width.alpha) * grow;
  }
  if (to == Representation::ck) {
    const double decay = std::exp(-0.5 * params.gamma * t);
    return {nl.alpha * decay, (nl.alpha_dot - 0.5 * params.gamma * nl.alpha) * decay};
  }
  return nl;  // nl and expanding widths coincide
}

ComplexTrajectory complex_trajectory(const SystemParams& params, const InitialState& init,
                                     double mean_x, double mean_p, double t) {
  validate(params, init);
  const FundamentalPair fp = fundamental_solutions(params, t);
  const ErmakovConstants k = ermakov_constants(params, init);
  const double cross = -branch_sign(init.branch);

  // Expanding-coordinate point q = x e^{gamma t/2} and its time derivative.
  const double half = std::exp(0.5 * params.gamma * t);
  const double q = mean_x * half;
  const double q_dot = (mean_p / params.mass + 0.5 * params.gamma * mean_x) * half;

  // Constants of the linear motion recovered through the fundamental pair:
  // q = a xi1 + b xi2 and m q' = -(a g1 + b g2), with xi1 g2 - xi2 g1 = -1.
  const double a = -(q * fp.g2 + params.mass * q_dot * fp.xi2);
  const double b = q * fp.g1 + params.mass * q_dot * fp.xi1;

  // The invariant reduces to a constant quadratic form in (a, b). Assembling
  // it from alpha(t) and eta(t) instead differences terms that grow like
  // e^{(gamma/2 + Omega~) t} against an O(1) result.
  const double inv = 0.5 * (k.A * b * b + k.B * a * a - 2.0 * cross * k.C * a * b);
  if (!(inv > 0.0))
    throw std::domain_error("motion invariant vanishes; the zero trajectory has no phase");

  const double c_norm = std::sqrt(params.mass / (2.0 * params.hbar * inv));

  // lambda_R = alpha^2 q' - alpha alpha' q collapses to the same constant
  // coefficients, so the two products never meet in a raw subtraction:
  //   alpha^2 q' - alpha alpha' q = hbar [b (A xi1 + cross C xi2) - a (B xi2 + cross C xi1)]
  // and its time derivative replaces xi_i by -g_i/m.
  const double lam_r = params.hbar * (b * (k.A * fp.xi1 + cross * k.C * fp.xi2) -
                                      a * (k.B * fp.xi2 + cross * k.C * fp.xi1));
  const double lam_r_dot = -params.hbar / params.mass *
                           (b * (k.A * fp.g1 + cross * k.C * fp.g2) -
                            a * (k.B * fp.g2 + cross * k.C * fp.g1));

  ComplexTrajectory traj;
  traj.lambda = {c_norm * lam_r, c_norm * q};
  traj.lambda_tilde = traj.lambda / half;
  traj.lambda_dot = {c_norm * lam_r_dot, c_norm * q_dot};
  traj.phase = std::atan2(traj.lambda.imag(), traj.lambda.real());
  traj.c_norm = c_norm;
  traj.invariant = inv;
  return traj;
}

}  // namespace ermakov
