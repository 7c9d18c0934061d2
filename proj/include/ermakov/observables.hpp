// Physical outputs of the packet dynamics: second central moments and the
// Schroedinger-Robertson product, quantum/classical/total energies with the
// branch gap and its thermal reading, the Ermakov invariant in its two
// equivalent forms, and the probability-current velocity fields.

#pragma once

#include "ermakov/model.hpp"
#include "ermakov/trajectories.hpp"

namespace ermakov {

/// Moments from the xi/chi quadratic forms. This is the primary route: every
/// term is a product of bounded or explicitly damped factors, so it stays
/// accurate at large gamma t where the width-state route cancels.
Moments moments_from_pair(const SystemParams& params, const InitialState& init,
                          const FundamentalPair& fp);

/// Moments at time t (closed form, xi/chi route).
Moments moments(const SystemParams& params, const InitialState& init, double t);

/// Moments from the width state:
///   sigma_x^2 = hbar alpha^2 / 2m
///   sigma_p^2 = (m hbar / 2) [(alpha' - gamma alpha/2)^2 + 1/alpha^2]
///   sigma_xp  = (hbar / 2) alpha (alpha' - gamma alpha/2)
/// The difference alpha' - gamma alpha/2 cancels at large gamma t; prefer the
/// xi/chi route outside a few characteristic times.
Moments moments_from_width(const SystemParams& params, const WidthState& width);

/// Moments from a Riccati value with C_I > 0:
///   sigma_x^2 = hbar / (2 m C_I), sigma_p^2 = (m hbar/2) |C|^2 / C_I,
///   sigma_xp = (hbar/2) C_R / C_I.
/// For the nl representation these are the physical moments; for ck/expanding
/// they refer to the transformed canonical pair. The product below is hbar^2/4
/// for any C_I > 0, so the identity holds in every representation.
Moments moments_from_riccati(const SystemParams& params, const RiccatiValue& value);

/// sigma_x^2 sigma_p^2 - sigma_xp^2. Equals hbar^2/4 for every Gaussian state
/// produced by this library (the relation is saturated); larger values flag
/// externally supplied non-minimal data.
double uncertainty_product(const Moments& m);

/// The same determinant evaluated from the closed forms in extended
/// precision. The covariance entries grow together (like e^{2 Omega~ t} past
/// the critical point) while their determinant stays at hbar^2/4, so once
/// they pass ~1e5 a double-assembled difference is cancellation noise. This
/// path defers every rounding until after the subtraction.
double uncertainty_determinant(const SystemParams& params, const InitialState& init, double t);

/// Late-time limit of sigma_x^2 sigma_p^2 for free motion with gamma > 0:
///   (hbar^2/4) [1 + ((2/hbar)(sigma_p0^2/(m gamma) + sigma_xp0))^2]
/// Branch-independent. Throws std::domain_error unless omega0 = 0, gamma > 0.
double free_motion_product_limit(const SystemParams& params, const InitialState& init);

/// Quantum (uncertainty-borne) energy contribution
///   E~ = sigma_p^2/2m + m omega0^2 sigma_x^2 / 2
///      = (hbar/4) [(alpha' - gamma alpha/2)^2 + 1/alpha^2 + omega0^2 alpha^2].
double quantum_energy(const SystemParams& params, const InitialState& init, double t);

/// Same quantity assembled from a width state (the hbar/4 form above).
double quantum_energy_from_width(const SystemParams& params, const WidthState& width);

/// Initial branch split of the quantum energy,
///   dE~0 = E~_minus(0) - E~_plus(0) = (hbar gamma / 2) |alphadot0| alpha0,
/// evaluated in the algebraically reduced product form (exact, no subtraction).
double energy_gap(const SystemParams& params, const InitialState& init);

/// Initial position-space diffusion coefficient D_x0 = gamma sigma_x0^2 / 2.
double diffusion_x0(const SystemParams& params, const InitialState& init);

/// Bath temperature (as kT) implied by the Einstein relation D = kT / m gamma,
/// i.e. kT = m gamma D_x0. With |alphadot0| = gamma alpha0 / 2 the branch gap
/// equals kT; with |alphadot0| = 0 the friction raises E~(0) by kT/4 over the
/// undamped value.
double einstein_kt(const SystemParams& params, const InitialState& init);

struct EnergyReport {
  double e_total = 0.0;    // E(t)
  double e_quantum = 0.0;  // E~(t)
  double e_classical = 0.0;  // E - E~ = <p>^2/2m + m omega0^2 <x>^2/2
  double gap0 = 0.0;       // dE~0, the initial branch split
};

/// E = <p>^2/2m + m omega0^2 <x>^2/2 + E~ with <p> = m eta'.
EnergyReport total_energy(const SystemParams& params, const InitialState& init, double t);

struct InvariantReport {
  double i_expanding = 0.0;  // (m/2hbar) e^{gamma t} [(eta' alpha - (alpha' - gamma alpha/2) eta)^2 + (eta/alpha)^2]
  double i_moment = 0.0;     // e^{gamma t} [sigma_p^2 <x>^2 - 2 sigma_xp <x><p> + sigma_x^2 <p>^2] / hbar^2
};

/// Ermakov invariant in both equivalent forms; each is constant in t and the
/// two agree to rounding. Zero when the mean starts at rest at the origin.
InvariantReport ermakov_invariant(const SystemParams& params, const InitialState& init, double t);

struct VelocityFields {
  double v_nl = 0.0;     // (alpha'/alpha - gamma/2) x~ + eta'
  double v_diff = 0.0;   // (gamma/2) x~
  double v_total = 0.0;  // eta' + (alpha'/alpha) x~ = v_nl + v_diff
  double v_tun = 0.0;    // (alpha'/alpha) x~, the width-driven (tunnelling) part
};

/// Probability-current velocity fields at position x, with x~ = x - eta(t).
VelocityFields velocity_fields(const SystemParams& params, const InitialState& init, double t,
                               double x);

}  // namespace ermakov
