// Run configurations, bundled presets, and the command entry points the CLI
// drives: trajectory simulation, the gamma scan of the minimum-energy
// branches, the self-verification suite, and Wigner grid dumps.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ermakov/model.hpp"
#include "ermakov/phase_space.hpp"

#include "json.hpp"

namespace ermakov {

struct TimeGrid {
  double t0 = 0.0;
  double t1 = 0.0;
  double dt = 0.0;
};

struct WignerGridSpec {
  int nx = 257;
  int np = 257;
  double half_width = 6.0;
  std::vector<double> times;  // instants at which grids are evaluated
};

struct GammaScan {
  std::vector<double> values;  // finite, non-negative damping rates
};

/// One complete run description. outputs is a subset of
/// {moments, energy, invariant, riccati, wigner, velocity}; the trajectory CSV
/// always carries the full column set, while "wigner" and "velocity" request
/// the corresponding extra files.
struct RunConfig {
  std::string name = "run";
  SystemParams params;
  InitialState initial;
  TimeGrid time;
  std::vector<std::string> outputs;
  std::optional<WignerGridSpec> wigner;
  std::optional<GammaScan> scan;
};

/// Throws std::invalid_argument listing every violated constraint.
void validate_config(const RunConfig& config);

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const RunConfig& config);
RunConfig load_config(const std::string& path);

/// Bundled run descriptions, see preset_names() for the list.
RunConfig preset(const std::string& name);
std::vector<std::string> preset_names();

/// One sampled instant of a run; matches the trajectory CSV columns.
struct SimulationRow {
  double t = 0.0;
  double eta = 0.0;
  double etadot = 0.0;
  double alpha = 0.0;
  double alphadot = 0.0;
  double c_re = 0.0;
  double c_im = 0.0;
  double sigma_x2 = 0.0;
  double sigma_p2 = 0.0;
  double sigma_xp = 0.0;
  double product = 0.0;
  double e_total = 0.0;
  double e_quantum = 0.0;
  double i_ermakov = 0.0;
};

std::vector<double> sample_times(const TimeGrid& time);
SimulationRow simulate_row(const SystemParams& params, const InitialState& init, double t);
std::vector<SimulationRow> simulate_rows(const RunConfig& config);
void write_simulation_csv(std::ostream& out, const std::vector<SimulationRow>& rows);
nlohmann::ordered_json simulation_sidecar(const RunConfig& config,
                                          const std::vector<SimulationRow>& rows);

/// Writes <name>.csv and <name>.json into out_dir, plus the requested extra
/// files. No partial files survive an error. Returns the sidecar.
nlohmann::ordered_json run_simulate(const RunConfig& config, const std::string& out_dir);

/// Initial quantum energies of the three width branches at fixed gamma:
/// zero has alpha_dot(0) = 0, plus and minus start at |alpha_dot(0)| =
/// gamma alpha0 / 2 with the corresponding sign.
struct ScanRow {
  double gamma = 0.0;
  double e_tilde_zero = 0.0;
  double e_tilde_plus = 0.0;
  double e_tilde_minus = 0.0;
};

std::vector<ScanRow> scan_rows(const RunConfig& config);
void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows);
nlohmann::ordered_json run_scan(const RunConfig& config, const std::string& out_dir);

struct VerifyOptions {
  std::string suite = "all";  // "all" or "fast"
  // Test fixture: negates the closed-form covariance before comparison so the
  // suite can prove it detects a wrong sign.
  bool inject_sigma_xp_flip = false;
};

struct VerifyReport {
  bool pass = true;
  int checks = 0;
  double max_product_deviation = 0.0;
  double max_invariant_drift = 0.0;
  double max_oracle_mismatch = 0.0;
  std::vector<std::string> failures;  // first hundred, in discovery order
};

VerifyReport run_verify(const VerifyOptions& options);
nlohmann::ordered_json verify_to_json(const VerifyReport& report);

struct WignerOptions {
  bool fp_residual = false;
  int refine = 1;  // spacing/time-step division factor for the convergence check
};

/// Writes one grid CSV per requested time (mass appended as a `# mass,<v>`
/// footer), residual grids and the convergence ratio when asked for, and a
/// <name>_wigner.json summary. Returns the summary.
nlohmann::ordered_json run_wigner(const RunConfig& config, const WignerOptions& options,
                                  const std::string& out_dir);

}  // namespace ermakov
