// Closed-form mean trajectories and fundamental solutions of the undamped
// auxiliary equation xi'' + (omega0^2 - gamma^2/4) xi = 0, per damping regime.

#pragma once

#include "ermakov/model.hpp"

namespace ermakov {

struct MeanState {
  double eta = 0.0;      // <x>(t)
  double eta_dot = 0.0;  // d<x>/dt
};

/// Mean position of the packet maximum; solves eta'' + gamma eta' + omega0^2 eta = 0.
MeanState mean_position(const SystemParams& params, const InitialState& init, double t);

/// Fundamental pair with xi1(0) = 0, xi1'(0) = -1/m and xi2(0) = 1, xi2'(0) = 0,
/// plus g_i = -m xi_i' and chi_i = -g_i - m (gamma/2) xi_i. The chi_i are
/// evaluated from explicit exponential forms so the damped combinations stay
/// accurate when gamma t is large.
struct FundamentalPair {
  double xi1 = 0.0;
  double xi2 = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  double chi1 = 0.0;
  double chi2 = 0.0;
};

FundamentalPair fundamental_solutions(const SystemParams& params, double t);

/// Wronskian-type combination xi2 g1 - xi1 g2; identically 1 for exact solutions.
inline double wronskian(const FundamentalPair& fp) {
  return fp.xi2 * fp.g1 - fp.xi1 * fp.g2;
}

/// Free motion settles at eta0 + etadot0/gamma; requires gamma > 0 and omega0 = 0.
double free_motion_position_limit(const SystemParams& params, const InitialState& init);

}  // namespace ermakov
