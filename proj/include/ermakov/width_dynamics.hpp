// Width dynamics of the Gaussian packet: Ermakov solution built from the
// fundamental pair, the complex Riccati variable C(t) = alpha'/alpha - gamma/2
// + i/alpha^2, its Bernoulli linearization around a particular solution, maps
// between the nl/ck/expanding representations, and the complex linearizing
// trajectory lambda(t) = alpha e^{i phi}.

#pragma once

#include <complex>

#include "ermakov/model.hpp"
#include "ermakov/trajectories.hpp"

namespace ermakov {

/// Quadratic-form coefficients of the invariant-based Ermakov solution:
///   alpha^2 = m hbar [A xi1^2 + B xi2^2 -+ 2 C xi1 xi2]
/// with hbar^2 (A B - C^2) = 1. Branch::plus selects the upper (minus) sign of
/// the cross term, matching alpha_dot(0) = +|alphadot0|.
struct ErmakovConstants {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
};

ErmakovConstants ermakov_constants(const SystemParams& params, const InitialState& init);

/// Bilinear combinations of the fundamental pair that feed every closed-form
/// observable. All three are exact quadratic forms with no hidden cancellation.
struct WidthProducts {
  double alpha_sq = 0.0;        // alpha^2
  double alpha_alphadot = 0.0;  // alpha alpha'
  double speed_sq = 0.0;        // alpha'^2 + 1/alpha^2
};

WidthProducts width_products(const SystemParams& params, const InitialState& init,
                             const FundamentalPair& fp);

/// Ermakov width (alpha, alpha') in physical (nl) variables at time t.
WidthState ermakov_alpha(const SystemParams& params, const InitialState& init, double t);

/// C = alpha'/alpha - gamma/2 + i/alpha^2 (nl representation).
RiccatiValue riccati_from_width(const SystemParams& params, const WidthState& width);

/// Initial Riccati value from the width data; real part carries the branch sign.
RiccatiValue initial_riccati(const SystemParams& params, const InitialState& init);

/// Initial Riccati value from measured moments: C0 = (sigma_xp0 + i hbar/2)/(m sigma_x0^2).
RiccatiValue initial_riccati_from_moments(const SystemParams& params, double sigma_x0_sq,
                                          double sigma_xp0);

/// Selects one of the two constant particular solutions C~ = -gamma/2 +- sqrt(gamma^2/4 - omega0^2).
enum class ParticularBranch { plus, minus };

/// Constant particular solution of the nl Riccati equation. Real in the free,
/// aperiodic and overdamped regimes, complex (-gamma/2 +- i Omega) otherwise.
std::complex<double> riccati_particular(const SystemParams& params, ParticularBranch which);

struct BernoulliResult {
  RiccatiValue value;
  bool on_particular = false;  // set when |V0| vanished and C(t) = C~ is returned
};

/// Full Riccati solution via the Bernoulli ansatz C = C~ + V(t) around the
/// chosen particular solution. Either ParticularBranch yields the same C(t).
BernoulliResult riccati_bernoulli(const SystemParams& params, const InitialState& init,
                                  ParticularBranch which, double t);

/// Riccati map between representations at time t:
///   ck = nl * e^{gamma t},  expanding = nl + gamma/2.
RiccatiValue transform_representation(const RiccatiValue& value, Representation to, double t,
                                      const SystemParams& params);

/// Width map between representations at time t. nl and expanding widths agree;
/// ck carries alpha_ck = alpha e^{-gamma t/2}.
WidthState transform_width(const WidthState& width, Representation from, Representation to,
                           double t, const SystemParams& params);

/// Complex linearizing trajectory evaluated from the mean phase-space point
/// (position, momentum) at time t. Throws std::domain_error when the motion
/// invariant vanishes (no phase can be attached to the zero solution).
struct ComplexTrajectory {
  std::complex<double> lambda_tilde;  // solves u'' + gamma u' + omega0^2 u = 0
  std::complex<double> lambda;        // lambda_tilde e^{gamma t/2}, solves u'' + Omega^2 u = 0
  std::complex<double> lambda_dot;    // d lambda/dt
  double phase = 0.0;                 // phi with lambda = alpha e^{i phi}, phi' alpha^2 = 1
  double c_norm = 0.0;                // normalization sqrt(m / (2 hbar I))
  double invariant = 0.0;             // motion invariant I used for the normalization
};

ComplexTrajectory complex_trajectory(const SystemParams& params, const InitialState& init,
                                     double mean_x, double mean_p, double t);

}  // namespace ermakov
