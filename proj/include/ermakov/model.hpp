// Core types and parameter validation for damped Gaussian wave-packet dynamics.
//
// Notation used throughout the library:
//   m      particle mass
//   hbar   reduced Planck constant (kept symbolic so unit systems stay flexible)
//   omega0 undamped oscillator frequency (0 for free motion)
//   gamma  friction rate of the linear velocity-dependent damping force
//   eta    mean position <x>(t)
//   alpha  dimensionless width variable, sigma_x^2 = hbar*alpha^2/(2m)
//
// The shifted frequencies are Omega^2 = omega0^2 - gamma^2/4 (oscillatory side)
// and Omega~^2 = gamma^2/4 - omega0^2 (overdamped side).

#pragma once

#include <complex>
#include <string>

namespace ermakov {

inline constexpr double k_regime_epsilon = 1e-12;  // relative tolerance for regime splits
inline constexpr double k_regime_floor = 1e-30;    // absolute floor for the split test
inline constexpr double k_blowup_threshold = 1e12; // |C| beyond which integration aborts
inline constexpr double k_degenerate_v0 = 1e-14;   // |V0| below this is "on the particular solution"

struct SystemParams {
  double mass = 1.0;
  double hbar = 1.0;
  double omega0 = 0.0;
  double gamma = 0.0;
};

/// Sign of the initial width velocity: plus means alpha_dot(0) = +|alphadot0|.
enum class Branch { plus, minus };

struct InitialState {
  double eta0 = 0.0;          // <x>(0)
  double etadot0 = 0.0;       // d<x>/dt at t = 0
  double alpha0 = 1.0;        // alpha(0) > 0
  double alphadot0_abs = 0.0; // |alpha_dot(0)|
  Branch branch = Branch::plus;
};

enum class DampingRegime { free_motion, under_critical, aperiodic_limit, over_damped };

/// Wave-packet representation a Riccati or width value refers to.
///   nl        physical variables (nonlinear equation)
///   ck        canonical variables, momentum carries the e^{gamma t} factor
///   expanding coordinate q = x e^{gamma t/2}, shifted frequency Omega
enum class Representation { nl, ck, expanding };

struct RiccatiValue {
  double real_part = 0.0;
  double imag_part = 0.0;
  Representation representation = Representation::nl;

  std::complex<double> as_complex() const { return {real_part, imag_part}; }
};

inline RiccatiValue make_riccati(std::complex<double> c, Representation rep) {
  return {c.real(), c.imag(), rep};
}

/// Width variable and its time derivative in a given representation.
struct WidthState {
  double alpha = 1.0;
  double alpha_dot = 0.0;
};

/// Second central moments of the packet in physical variables.
struct Moments {
  double sigma_x2 = 0.0;
  double sigma_p2 = 0.0;
  double sigma_xp = 0.0;
};

/// +1 for Branch::plus, -1 for Branch::minus.
inline double branch_sign(Branch b) { return b == Branch::plus ? 1.0 : -1.0; }

/// Signed initial width velocity alpha_dot(0).
inline double signed_alphadot0(const InitialState& init) {
  return branch_sign(init.branch) * init.alphadot0_abs;
}

/// Characteristic time 1/max(gamma, omega0, 1); default windows span 10 of these.
double char_time(const SystemParams& params);

/// Regime split on Omega^2 = omega0^2 - gamma^2/4. omega0 = 0 always classifies
/// as free motion; |Omega^2| below the relative epsilon (with absolute floor)
/// lands on the aperiodic limit.
DampingRegime classify_regime(const SystemParams& params);

const char* regime_name(DampingRegime regime);
const char* representation_name(Representation rep);
const char* branch_name(Branch branch);

/// Throws std::invalid_argument listing every violated constraint.
void validate(const SystemParams& params, const InitialState& init);

}  // namespace ermakov
