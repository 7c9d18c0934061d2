// Wigner function of the Gaussian packet, its marginals, the Fokker-Planck
// and Smoluchowski finite-difference residual checks, and the momentum-space
// velocity field.

#pragma once

#include <iosfwd>
#include <vector>

#include "ermakov/model.hpp"

namespace ermakov {

/// Rectangular phase-space grid. values is row-major over x then p:
/// values[ix * np + ip] samples W(x_at(ix), p_at(ip)).
struct PhaseSpaceGrid {
  double x_min = 0.0, x_max = 0.0;
  double p_min = 0.0, p_max = 0.0;
  int nx = 257, np = 257;
  std::vector<double> values;

  double dx() const { return (x_max - x_min) / (nx - 1); }
  double dp() const { return (p_max - p_min) / (np - 1); }
  double x_at(int ix) const { return x_min + ix * dx(); }
  double p_at(int ip) const { return p_min + ip * dp(); }
};

/// Grid centered on the packet mean covering half_width standard deviations
/// per axis (values not yet filled). 6 sigma at 257 points keeps the missed
/// Gaussian mass below 1e-8 while the stencils stay fast.
PhaseSpaceGrid auto_grid(const SystemParams& params, const InitialState& init, double t,
                         int nx = 257, int np = 257, double half_width = 6.0);

/// W(x, p) = (1/pi hbar) exp{-(2/hbar^2)[sigma_p^2 x~^2 - 2 sigma_xp x~ p~ + sigma_x^2 p~^2]}
/// with x~ = x - <x>, p~ = p - <p>. Peak value 1/(pi hbar) at the mean.
double wigner(const SystemParams& params, const InitialState& init, double t, double x,
              double p);

/// The same exponent obtained from the invariant route, 2 e^{-gamma t} I_nl(x~, p~),
/// where I_nl is the moment-form motion invariant evaluated at the displaced
/// phase-space point. Agrees with the quadratic form in wigner.
double wigner_exponent_invariant_form(const SystemParams& params, const InitialState& init,
                                      double t, double x, double p);

/// Fills grid.values with W over the grid.
void fill_wigner(const SystemParams& params, const InitialState& init, double t,
                 PhaseSpaceGrid& grid);

struct Marginals {
  std::vector<double> rho_x;  // position density at the grid x nodes
  std::vector<double> rho_p;  // momentum density at the grid p nodes
  double mass_x = 0.0;        // quadrature of rho_x over x
  double mass_p = 0.0;        // quadrature of rho_p over p
};

/// First and second moments of a filled grid by 2-D Simpson quadrature.
struct GridMoments {
  double mass = 0.0;
  double mean_x = 0.0;
  double mean_p = 0.0;
  double sigma_x2 = 0.0;
  double sigma_p2 = 0.0;
  double sigma_xp = 0.0;
};

GridMoments grid_moments(const PhaseSpaceGrid& grid);

/// Simpson-integrated marginals of a filled grid. Throws std::domain_error
/// when the captured mass falls below 1 - 1e-6 (grid does not cover the
/// packet) and std::invalid_argument for even point counts.
Marginals marginals(const SystemParams& params, const InitialState& init, double t,
                    const PhaseSpaceGrid& grid);

struct FokkerPlanckReport {
  std::vector<double> residual;  // interior points, row-major (nx-2) x (np-2)
  int nx_interior = 0;
  int np_interior = 0;
  double max_norm = 0.0;
  double d_x = 0.0;  // gamma sigma_x^2 / 2
  double d_p = 0.0;  // -gamma sigma_p^2 / 2 (negative, as the identity demands)
  double dt = 0.0;   // time step used for the centered time derivative
};

/// Residual of dW/dt + (p/m) dW/dx - [m omega0^2 x + gamma <p>] dW/dp
///   - D_x d2W/dx2 - D_p d2W/dp2
/// by second-order centered differences; analytically zero for this Gaussian
/// family, so the max-norm must shrink by ~4x per simultaneous halving of
/// dx, dp and dt. Pass dt = 0 to use 1e-4 of the characteristic time.
FokkerPlanckReport fokker_planck_residual(const SystemParams& params, const InitialState& init,
                                          double t, const PhaseSpaceGrid& grid, double dt = 0.0);

/// Momentum-space velocity field -m omega0^2 (sigma_xp / sigma_p^2) p~ + d<p>/dt.
double momentum_velocity_field(const SystemParams& params, const InitialState& init, double t,
                               double p);

/// Same field through the Riccati ratio -omega0^2 (C_R / |C|^2) p~ + d<p>/dt.
double momentum_velocity_field_riccati(const SystemParams& params, const InitialState& init,
                                       double t, double p);

struct SmoluchowskiReport {
  std::vector<double> residual;  // interior points of the 1-D x grid
  double max_norm = 0.0;
  double dx = 0.0;
  double dt = 0.0;
};

/// Residual of the position-space continuity equation
///   drho/dt + d(v_nl rho)/dx - D_x d2rho/dx2 = 0,  v_nl = C_R x~ + eta',
/// on n equispaced points spanning half_width standard deviations. Second-order
/// convergent to zero like the Fokker-Planck check.
SmoluchowskiReport smoluchowski_residual(const SystemParams& params, const InitialState& init,
                                         double t, int n = 257, double half_width = 6.0,
                                         double dt = 0.0);

/// Writes `x,p,w` rows (plus a residual column when given) row-major over x
/// then p, at 17 significant digits.
void write_grid_csv(std::ostream& out, const PhaseSpaceGrid& grid,
                    const std::vector<double>* residual = nullptr);

}  // namespace ermakov
