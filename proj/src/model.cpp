#include "ermakov/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ermakov {

double char_time(const SystemParams& params) {
  return 1.0 / std::max({params.gamma, params.omega0, 1.0});
}

DampingRegime classify_regime(const SystemParams& params) {
  if (params.omega0 == 0.0) return DampingRegime::free_motion;
  const double w2 = params.omega0 * params.omega0;
  const double g2 = 0.25 * params.gamma * params.gamma;
  const double d = w2 - g2;
  const double tol = std::max(k_regime_epsilon * std::max(w2, g2), k_regime_floor);
  if (std::abs(d) <= tol) return DampingRegime::aperiodic_limit;
  return d > 0.0 ? DampingRegime::under_critical : DampingRegime::over_damped;
}

const char* regime_name(DampingRegime regime) {
  switch (regime) {
    case DampingRegime::free_motion: return "free-motion";
    case DampingRegime::under_critical: return "under-critical";
    case DampingRegime::aperiodic_limit: return "aperiodic-limit";
    case DampingRegime::over_damped: return "over-damped";
  }
  return "unknown";
}

const char* representation_name(Representation rep) {
  switch (rep) {
    case Representation::nl: return "nl";
    case Representation::ck: return "ck";
    case Representation::expanding: return "expanding";
  }
  return "unknown";
}

const char* branch_name(Branch branch) {
  return branch == Branch::plus ? "plus" : "minus";
}

void validate(const SystemParams& params, const InitialState& init) {
  std::ostringstream errors;
  auto reject = [&errors](const std::string& msg) {
    if (errors.tellp() > 0) errors << "; ";
    errors << msg;
  };

  if (!(std::isfinite(params.mass) && params.mass > 0.0)) reject("mass must be finite and > 0");
  if (!(std::isfinite(params.hbar) && params.hbar > 0.0)) reject("hbar must be finite and > 0");
  if (!(std::isfinite(params.omega0) && params.omega0 >= 0.0)) reject("omega0 must be finite and >= 0");
  if (!(std::isfinite(params.gamma) && params.gamma >= 0.0)) reject("gamma must be finite and >= 0");
  if (!(std::isfinite(init.alpha0) && init.alpha0 > 0.0)) reject("alpha0 must be finite and > 0");
  if (!(std::isfinite(init.alphadot0_abs) && init.alphadot0_abs >= 0.0))
    reject("alphadot0_abs must be finite and >= 0");
  if (!std::isfinite(init.eta0)) reject("eta0 must be finite");
  if (!std::isfinite(init.etadot0)) reject("etadot0 must be finite");

  if (errors.tellp() > 0) throw std::invalid_argument("invalid configuration: " + errors.str());
}

}  // namespace ermakov
