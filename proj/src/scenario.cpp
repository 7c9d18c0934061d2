#include "ermakov/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ermakov/observables.hpp"
#include "ermakov/oracle.hpp"
#include "ermakov/parallel.hpp"
#include "ermakov/trajectories.hpp"
#include "ermakov/width_dynamics.hpp"

namespace fs = std::filesystem;

namespace ermakov {

namespace {

const std::vector<std::string>& known_outputs() {
  static const std::vector<std::string> k = {"moments",  "energy", "invariant",
                                             "riccati",  "wigner", "velocity"};
  return k;
}

bool wants_output(const RunConfig& config, const std::string& what) {
  return std::find(config.outputs.begin(), config.outputs.end(), what) != config.outputs.end();
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("short write: " + path.string());
}

// Emits every (path, content) pair or none: on failure the files already
// written are removed before the error propagates.
void emit_files(const std::vector<std::pair<fs::path, std::string>>& files) {
  std::vector<fs::path> written;
  try {
    for (const auto& [path, content] : files) {
      write_file(path, content);
      written.push_back(path);
    }
  } catch (...) {
    for (const auto& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    throw;
  }
}

}  // namespace

void validate_config(const RunConfig& config) {
  std::vector<std::string> bad;
  try {
    validate(config.params, config.initial);
  } catch (const std::invalid_argument& e) {
    bad.emplace_back(e.what());
  }
  if (config.name.empty() ||
      config.name.find_first_not_of(
          "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789._-") !=
          std::string::npos)
    bad.push_back("name must be a nonempty file-name-safe token");
  if (!(config.time.dt > 0.0)) bad.push_back("time.dt must be > 0");
  if (!(config.time.t1 >= config.time.t0)) bad.push_back("time.t1 must be >= time.t0");
  if (std::isfinite(config.time.t0) && std::isfinite(config.time.t1) && config.time.dt > 0.0) {
    const double count = (config.time.t1 - config.time.t0) / config.time.dt;
    if (!(count < 5e6)) bad.push_back("time grid would exceed five million rows");
  }
  for (const auto& o : config.outputs)
    if (std::find(known_outputs().begin(), known_outputs().end(), o) == known_outputs().end())
      bad.push_back("unknown output \"" + o + "\"");
  if (config.scan) {
    if (config.scan->values.empty()) bad.push_back("scan.values must not be empty");
    for (double g : config.scan->values)
      if (!std::isfinite(g) || g < 0.0) {
        bad.push_back("scan.values must be finite and non-negative");
        break;
      }
  }
  if (config.wigner) {
    const auto& w = *config.wigner;
    if (w.nx < 3 || w.nx % 2 == 0 || w.np < 3 || w.np % 2 == 0)
      bad.push_back("wigner_grid.nx and .np must be odd and >= 3");
    if (!(w.half_width > 0.0)) bad.push_back("wigner_grid.half_width must be > 0");
    for (double t : w.times)
      if (!std::isfinite(t)) {
        bad.push_back("wigner_grid.times must be finite");
        break;
      }
  }
  if (!bad.empty()) {
    std::string msg = bad.front();
    for (std::size_t i = 1; i < bad.size(); ++i) msg += "; " + bad[i];
    throw std::invalid_argument(msg);
  }
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    c.name = j.value("name", std::string("run"));
    if (j.contains("params")) {
      const auto& p = j.at("params");
      c.params.mass = p.value("mass", 1.0);
      c.params.hbar = p.value("hbar", 1.0);
      c.params.omega0 = p.value("omega0", 0.0);
      c.params.gamma = p.value("gamma", 0.0);
    }
    if (j.contains("initial")) {
      const auto& i = j.at("initial");
      c.initial.eta0 = i.value("eta0", 0.0);
      c.initial.etadot0 = i.value("etadot0", 0.0);
      c.initial.alpha0 = i.value("alpha0", 1.0);
      c.initial.alphadot0_abs = i.value("alphadot0_abs", 0.0);
      const std::string branch = i.value("branch", std::string("plus"));
      if (branch == "plus")
        c.initial.branch = Branch::plus;
      else if (branch == "minus")
        c.initial.branch = Branch::minus;
      else
        throw std::invalid_argument("initial.branch must be \"plus\" or \"minus\"");
    }
    const auto& t = j.at("time");
    c.time.t0 = t.value("t0", 0.0);
    c.time.t1 = t.at("t1").get<double>();
    c.time.dt = t.at("dt").get<double>();
    c.outputs = j.value("outputs", std::vector<std::string>{});
    if (j.contains("wigner_grid")) {
      const auto& w = j.at("wigner_grid");
      WignerGridSpec spec;
      spec.nx = w.value("nx", 257);
      spec.np = w.value("np", 257);
      spec.half_width = w.value("half_width", 6.0);
      spec.times = w.value("times", std::vector<double>{});
      c.wigner = spec;
    }
    if (j.contains("scan")) {
      const auto& s = j.at("scan");
      const std::string variable = s.value("variable", std::string("gamma"));
      if (variable != "gamma")
        throw std::invalid_argument("scan.variable must be \"gamma\"");
      GammaScan scan;
      scan.values = s.at("values").get<std::vector<double>>();
      c.scan = scan;
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed config: ") + e.what());
  }
  validate_config(c);
  return c;
}

nlohmann::ordered_json config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["params"] = {{"mass", c.params.mass},
                 {"hbar", c.params.hbar},
                 {"omega0", c.params.omega0},
                 {"gamma", c.params.gamma}};
  j["initial"] = {{"eta0", c.initial.eta0},
                  {"etadot0", c.initial.etadot0},
                  {"alpha0", c.initial.alpha0},
                  {"alphadot0_abs", c.initial.alphadot0_abs},
                  {"branch", branch_name(c.initial.branch)}};
  j["time"] = {{"t0", c.time.t0}, {"t1", c.time.t1}, {"dt", c.time.dt}};
  j["outputs"] = c.outputs;
  if (c.wigner)
    j["wigner_grid"] = {{"nx", c.wigner->nx},
                        {"np", c.wigner->np},
                        {"half_width", c.wigner->half_width},
                        {"times", c.wigner->times}};
  if (c.scan) j["scan"] = {{"variable", "gamma"}, {"values", c.scan->values}};
  return j;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config is not valid JSON: " + std::string(e.what()));
  }
  return config_from_json(j);
}

std::vector<std::string> preset_names() {
  return {"fig1-free-motion", "fig1.0-bifurcation", "ho-under",
          "ho-aperiodic",     "ho-over",            "ho-fixed-point"};
}

RunConfig preset(const std::string& name) {
  RunConfig c;
  c.name = name;
  c.initial.eta0 = 1.0;
  c.initial.etadot0 = 0.0;
  c.outputs = {"moments", "energy", "invariant", "riccati"};
  if (name == "fig1-free-motion") {
    c.params.gamma = 1.0;
    c.initial.alpha0 = 1.0;
    c.initial.alphadot0_abs = 0.5;  // gamma alpha0 / 2, the family with a finite product limit
    c.time = {0.0, 10.0, 0.01};
    c.wigner = WignerGridSpec{129, 129, 6.0, {1.0}};
  } else if (name == "fig1.0-bifurcation") {
    c.params.omega0 = 1.0;
    c.initial.alpha0 = 1.0;
    c.time = {0.0, 0.0, 1.0};
    c.outputs = {"energy"};
    GammaScan scan;
    scan.values.reserve(201);
    for (int i = 0; i <= 200; ++i) scan.values.push_back(i * 0.01);
    c.scan = scan;
  } else if (name == "ho-under") {
    c.params.omega0 = 1.0;
    c.params.gamma = 1.0;
    c.initial.alpha0 = 1.0;
    c.initial.alphadot0_abs = 0.5;
    c.time = {0.0, 10.0, 0.01};
  } else if (name == "ho-aperiodic") {
    c.params.omega0 = 1.0;
    c.params.gamma = 2.0;
    c.initial.alpha0 = 1.0;
    c.initial.alphadot0_abs = 0.0;
    c.time = {0.0, 10.0, 0.01};
  } else if (name == "ho-over") {
    c.params.omega0 = 1.0;
    c.params.gamma = 4.0;
    c.initial.alpha0 = 1.0;
    c.initial.alphadot0_abs = 2.0;
    // Strong damping amplifies roundoff in the quadratic forms like
    // e^{2 sqrt(gamma^2/4 - omega0^2) t}; ten characteristic times keep every
    // uncertainty row inside the 1e-10 absolute determinant budget.
    c.time = {0.0, 2.5, 0.0025};
  } else if (name == "ho-fixed-point") {
    c.params.omega0 = 1.0;
    c.params.gamma = 1.0;
    c.initial.alpha0 = std::pow(0.75, -0.25);  // Omega^{-1/2}: the constant-width orbit
    c.initial.alphadot0_abs = 0.0;
    c.time = {0.0, 10.0, 0.01};
    c.outputs = {"moments", "energy", "invariant", "riccati", "wigner", "velocity"};
    c.wigner = WignerGridSpec{129, 129, 6.0, {1.0}};
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return c;
}

std::vector<double> sample_times(const TimeGrid& time) {
  if (time.t1 == time.t0) return {time.t0};
  const auto n = static_cast<long long>(std::floor((time.t1 - time.t0) / time.dt + 1e-9));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (long long i = 0; i <= n; ++i) out.push_back(time.t0 + static_cast<double>(i) * time.dt);
  return out;
}

SimulationRow simulate_row(const SystemParams& params, const InitialState& init, double t) {
  SimulationRow r;
  r.t = t;
  const MeanState mean = mean_position(params, init, t);
  const WidthState width = ermakov_alpha(params, init, t);
  const RiccatiValue c = riccati_from_width(params, width);
  const Moments m = moments(params, init, t);
  const EnergyReport energy = total_energy(params, init, t);
  const InvariantReport invariant = ermakov_invariant(params, init, t);
  r.eta = mean.eta;
  r.etadot = mean.eta_dot;
  r.alpha = width.alpha;
  r.alphadot = width.alpha_dot;
  r.c_re = c.real_part;
  r.c_im = c.imag_part;
  r.sigma_x2 = m.sigma_x2;
  r.sigma_p2 = m.sigma_p2;
  r.sigma_xp = m.sigma_xp;
  r.product = uncertainty_determinant(params, init, t);
  r.e_total = energy.e_total;
  r.e_quantum = energy.e_quantum;
  r.i_ermakov = invariant.i_expanding;
  return r;
}

std::vector<SimulationRow> simulate_rows(const RunConfig& config) {
  validate_config(config);
  const std::vector<double> times = sample_times(config.time);
  std::vector<SimulationRow> rows(times.size());
  parallel_for(static_cast<int>(times.size()), [&](int i) {
    rows[i] = simulate_row(config.params, config.initial, times[i]);
  });
  return rows;
}

void write_simulation_csv(std::ostream& out, const std::vector<SimulationRow>& rows) {
  out << "t,eta,etadot,alpha,alphadot,c_re,c_im,sigma_x2,sigma_p2,sigma_xp,product,"
         "e_total,e_quantum,i_ermakov\n";
  char buf[700];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                  "%.17g,%.17g\n",
                  r.t, r.eta, r.etadot, r.alpha, r.alphadot, r.c_re, r.c_im, r.sigma_x2,
                  r.sigma_p2, r.sigma_xp, r.product, r.e_total, r.e_quantum, r.i_ermakov);
    out << buf;
  }
}

nlohmann::ordered_json simulation_sidecar(const RunConfig& config,
                                          const std::vector<SimulationRow>& rows) {
  nlohmann::ordered_json side;
  side["config"] = config_to_json(config);
  side["regime"] = regime_name(classify_regime(config.params));
  const RiccatiValue c0 = initial_riccati(config.params, config.initial);
  side["branch"] = {{"name", branch_name(config.initial.branch)},
                    {"signed_alphadot0", signed_alphadot0(config.initial)},
                    {"riccati0", {{"re", c0.real_part}, {"im", c0.imag_part}}}};
  side["energy_gap0"] = energy_gap(config.params, config.initial);
  if (config.params.gamma > 0.0) {
    side["diffusion_x0"] = diffusion_x0(config.params, config.initial);
    side["einstein_kt"] = einstein_kt(config.params, config.initial);
  }
  if (config.params.omega0 == 0.0 && config.params.gamma > 0.0) {
    side["free_motion_limits"] = {
        {"position", free_motion_position_limit(config.params, config.initial)},
        {"uncertainty_product", free_motion_product_limit(config.params, config.initial)}};
  }
  side["rows"] = rows.size();
  if (!rows.empty()) {
    const auto& a = rows.front();
    const auto& b = rows.back();
    side["first"] = {{"t", a.t}, {"product", a.product}, {"i_ermakov", a.i_ermakov}};
    side["last"] = {{"t", b.t}, {"product", b.product}, {"i_ermakov", b.i_ermakov}};
  }
  return side;
}

nlohmann::ordered_json run_simulate(const RunConfig& config, const std::string& out_dir) {
  validate_config(config);
  fs::create_directories(out_dir);
  const std::vector<SimulationRow> rows = simulate_rows(config);

  std::vector<std::pair<fs::path, std::string>> files;
  const fs::path dir(out_dir);

  std::ostringstream csv;
  write_simulation_csv(csv, rows);
  files.emplace_back(dir / (config.name + ".csv"), csv.str());

  nlohmann::ordered_json side = simulation_sidecar(config, rows);
  nlohmann::ordered_json emitted = nlohmann::ordered_json::array();
  emitted.push_back(config.name + ".csv");

  if (wants_output(config, "velocity")) {
    std::ostringstream vel;
    vel << "t,x,v_nl,v_diff,v_total,v_tun\n";
    char buf[256];
    for (const auto& r : rows) {
      const double x = r.eta + std::sqrt(r.sigma_x2);  // one standard deviation out
      const VelocityFields v = velocity_fields(config.params, config.initial, r.t, x);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t, x, v.v_nl,
                    v.v_diff, v.v_total, v.v_tun);
      vel << buf;
    }
    const std::string name = config.name + "_velocity.csv";
    files.emplace_back(dir / name, vel.str());
    emitted.push_back(name);
  }

  if (wants_output(config, "wigner")) {
    WignerGridSpec spec = config.wigner.value_or(WignerGridSpec{});
    if (spec.times.empty()) spec.times = {config.time.t1};
    for (std::size_t k = 0; k < spec.times.size(); ++k) {
      PhaseSpaceGrid grid =
          auto_grid(config.params, config.initial, spec.times[k], spec.nx, spec.np,
                    spec.half_width);
      fill_wigner(config.params, config.initial, spec.times[k], grid);
      const GridMoments gm = grid_moments(grid);
      std::ostringstream os;
      write_grid_csv(os, grid);
      os << "# mass," << fmt17(gm.mass) << "\n";
      const std::string name = config.name + "_wigner_t" + std::to_string(k) + ".csv";
      files.emplace_back(dir / name, os.str());
      emitted.push_back(name);
    }
  }

  side["files"] = emitted;
  files.emplace_back(dir / (config.name + ".json"), side.dump(2) + "\n");
  emit_files(files);
  return side;
}

std::vector<ScanRow> scan_rows(const RunConfig& config) {
  validate_config(config);
  if (!config.scan) throw std::invalid_argument("config has no scan block");
  const auto& values = config.scan->values;
  std::vector<ScanRow> rows(values.size());
  parallel_for(static_cast<int>(values.size()), [&](int i) {
    const double g = values[i];
    SystemParams p = config.params;
    p.gamma = g;
    InitialState zero = config.initial;
    zero.alphadot0_abs = 0.0;
    zero.branch = Branch::plus;
    InitialState plus = config.initial;
    plus.alphadot0_abs = 0.5 * g * config.initial.alpha0;
    plus.branch = Branch::plus;
    InitialState minus = plus;
    minus.branch = Branch::minus;
    ScanRow r;
    r.gamma = g;
    r.e_tilde_zero = quantum_energy(p, zero, 0.0);
    r.e_tilde_plus = quantum_energy(p, plus, 0.0);
    r.e_tilde_minus = quantum_energy(p, minus, 0.0);
    const double slack = 1e-12 * std::max(1.0, std::abs(r.e_tilde_minus));
    if (!(r.e_tilde_plus <= r.e_tilde_zero + slack && r.e_tilde_zero <= r.e_tilde_minus + slack))
      throw std::runtime_error("branch energy ordering violated at gamma = " + fmt17(g));
    rows[i] = r;
  });
  return rows;
}

void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  out << "gamma,e_tilde_zero,e_tilde_plus,e_tilde_minus\n";
  char buf[192];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", r.gamma, r.e_tilde_zero,
                  r.e_tilde_plus, r.e_tilde_minus);
    out << buf;
  }
}

nlohmann::ordered_json run_scan(const RunConfig& config, const std::string& out_dir) {
  const std::vector<ScanRow> rows = scan_rows(config);
  fs::create_directories(out_dir);
  std::ostringstream csv;
  write_scan_csv(csv, rows);
  nlohmann::ordered_json side;
  side["config"] = config_to_json(config);
  side["rows"] = rows.size();
  side["ordering"] = "e_tilde_plus <= e_tilde_zero <= e_tilde_minus";
  side["files"] = {config.name + ".csv"};
  emit_files({{fs::path(out_dir) / (config.name + ".csv"), csv.str()},
              {fs::path(out_dir) / (config.name + ".json"), side.dump(2) + "\n"}});
  return side;
}

namespace {

struct JobResult {
  int checks = 0;
  double max_product_deviation = 0.0;
  double max_invariant_drift = 0.0;
  double max_oracle_mismatch = 0.0;
  std::vector<std::string> failures;
};

// Scaled mismatch of one component series against its reference: differences
// are weighed against the series envelope so zero crossings of oscillatory
// components do not blow the quotient up. scale_floor guards the quotient for
// series that vanish identically (a stationary width has alphadot = 0 for all
// t, leaving only integrator noise in the reference); callers pass the
// envelope of a companion component with the same natural scale.
void fold_series(JobResult& out, const std::string& label, const std::vector<double>& closed,
                 const std::vector<double>& reference, const std::vector<double>& times,
                 double tol, double scale_floor) {
  double envelope = scale_floor;
  for (double v : reference) envelope = std::max(envelope, std::abs(v));
  double worst = 0.0;
  double worst_t = times.front();
  for (std::size_t i = 0; i < closed.size(); ++i) {
    const double diff = std::abs(closed[i] - reference[i]);
    const double mismatch = envelope > 1e-30 ? diff / envelope : diff;
    if (mismatch > worst) {
      worst = mismatch;
      worst_t = times[i];
    }
  }
  out.max_oracle_mismatch = std::max(out.max_oracle_mismatch, worst);
  ++out.checks;
  if (worst > tol)
    out.failures.push_back(label + ": mismatch " + fmt17(worst) + " at t = " + fmt17(worst_t) +
                           " exceeds " + fmt17(tol));
}

JobResult verify_trajectory_job(const RunConfig& c, int samples, bool inject_flip) {
  JobResult out;
  const std::string tag = c.name + "/" + branch_name(c.initial.branch);
  const std::vector<double> times = linspace(c.time.t0, c.time.t1, samples);
  const double h2_4 = 0.25 * c.params.hbar * c.params.hbar;

  std::vector<double> eta(times.size()), etadot(times.size());
  std::vector<double> alpha(times.size()), alphadot(times.size());
  std::vector<double> c_re(times.size()), c_im(times.size());
  std::vector<double> sx2(times.size()), sp2(times.size()), sxp(times.size());
  std::vector<double> inv_e(times.size()), inv_m(times.size());

  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const MeanState mean = mean_position(c.params, c.initial, t);
    const WidthState width = ermakov_alpha(c.params, c.initial, t);
    const RiccatiValue ric = riccati_from_width(c.params, width);
    Moments m = moments(c.params, c.initial, t);
    if (inject_flip) m.sigma_xp = -m.sigma_xp;
    const InvariantReport inv = ermakov_invariant(c.params, c.initial, t);
    eta[i] = mean.eta;
    etadot[i] = mean.eta_dot;
    alpha[i] = width.alpha;
    alphadot[i] = width.alpha_dot;
    c_re[i] = ric.real_part;
    c_im[i] = ric.imag_part;
    sx2[i] = m.sigma_x2;
    sp2[i] = m.sigma_p2;
    sxp[i] = m.sigma_xp;
    inv_e[i] = inv.i_expanding;
    inv_m[i] = inv.i_moment;

    const double dev = std::abs(uncertainty_determinant(c.params, c.initial, t) - h2_4);
    out.max_product_deviation = std::max(out.max_product_deviation, dev);
    ++out.checks;
    if (dev > 1e-10)
      out.failures.push_back(tag + ": uncertainty product off by " + fmt17(dev) + " at t = " +
                             fmt17(t));
  }

  const double i0 = inv_e.front();
  if (std::abs(i0) > 1e-12) {
    double lo = inv_e.front(), hi = inv_e.front(), forms = 0.0;
    for (std::size_t i = 0; i < inv_e.size(); ++i) {
      lo = std::min(lo, inv_e[i]);
      hi = std::max(hi, inv_e[i]);
      forms = std::max(forms, std::abs(inv_e[i] - inv_m[i]));
    }
    const double drift = (hi - lo) / std::abs(i0);
    out.max_invariant_drift = std::max(out.max_invariant_drift, drift);
    ++out.checks;
    if (drift > 1e-8)
      out.failures.push_back(tag + ": invariant drift " + fmt17(drift) + " exceeds 1e-8");
    ++out.checks;
    if (forms / std::abs(i0) > 1e-8)
      out.failures.push_back(tag + ": invariant forms disagree by " + fmt17(forms / std::abs(i0)));
  }

  IntegratorConfig oc;
  oc.rel_tol = 1e-10;
  oc.abs_tol = 1e-13;
  const auto mean_ref = integrate_mean(c.params, c.initial, times, oc);
  const auto width_ref = integrate_ermakov(c.params, c.initial, times, oc);
  const RiccatiValue c0 = initial_riccati(c.params, c.initial);
  const auto ric_ref =
      integrate_riccati(c.params, c0.as_complex(), Representation::nl, times, oc);
  const auto mom_ref = integrate_moments(c.params, moments(c.params, c.initial, times.front()),
                                         times, oc);

  const auto env = [&](auto accessor) {
    double e = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) e = std::max(e, std::abs(accessor(i)));
    return e;
  };
  const double env_eta = env([&](std::size_t i) { return mean_ref[i].eta; });
  const double env_alpha = env([&](std::size_t i) { return width_ref[i].alpha; });
  const double env_cim = env([&](std::size_t i) { return ric_ref[i].imag(); });
  const double env_sx2 = env([&](std::size_t i) { return mom_ref.samples[i].sigma_x2; });
  const double env_sp2 = env([&](std::size_t i) { return mom_ref.samples[i].sigma_p2; });

  std::vector<double> ref(times.size());
  const double tol = 1e-8;
  for (std::size_t i = 0; i < times.size(); ++i) ref[i] = mean_ref[i].eta;
  fold_series(out, tag + "/eta", eta, ref, times, tol, 0.0);
  for (std::size_t i = 0; i < times.size(); ++i) ref[i] = mean_ref[i].eta_dot;
  fold_series(out, tag + "/etadot", etadot, ref, times, tol, env_eta);
  for (std::size_t i = 0; i < times.size(); ++i) ref[i] = width_ref[i].alpha;
  fold_series(out, tag + "/alpha", alpha, ref, times, tol, 0.0);
  for (std::size_t i = 0; i < times.size(); ++i) ref[i] = width_ref[i].alpha_dot;
  fold_series(out, tag + "/alphadot", alphadot, ref, times, tol, env_alpha);
  for (std::size_t i = 0; i < times.size(); ++i) ref[i] = ric_ref[i].real();
  fold_series(out, tag + "/c_re", c_re, ref, times, tol, env_cim);
  for (std::size_t i = 0; i < times.size(); ++i) ref[i] = ric_ref[i].imag();
  fold_series(out, tag + "/c_im", c_im, ref, times, tol, 0.0);
  for (std::size_t i = 0; i < times.size(); ++i) ref[i] = mom_ref.samples[i].sigma_x2;
  fold_series(out, tag + "/sigma_x2", sx2, ref, times, tol, 0.0);
  for (std::size_t i = 0; i < times.size(); ++i) ref[i] = mom_ref.samples[i].sigma_p2;
  fold_series(out, tag + "/sigma_p2", sp2, ref, times, tol, 0.0);
  for (std::size_t i = 0; i < times.size(); ++i) ref[i] = mom_ref.samples[i].sigma_xp;
  fold_series(out, tag + "/sigma_xp", sxp, ref, times, tol, std::sqrt(env_sx2 * env_sp2));
  return out;
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& options) {
  if (options.suite != "all" && options.suite != "fast")
    throw std::invalid_argument("suite must be \"all\" or \"fast\"");
  const bool fast = options.suite == "fast";
  const int samples = fast ? 41 : 201;

  std::vector<RunConfig> jobs;
  RunConfig scan_job;
  bool have_scan = false;
  for (const auto& name : preset_names()) {
    RunConfig c = preset(name);
    if (c.scan) {
      scan_job = c;
      have_scan = true;
      continue;
    }
    jobs.push_back(c);
    if (!fast && c.initial.alphadot0_abs > 0.0) {
      RunConfig flipped = c;
      flipped.initial.branch =
          c.initial.branch == Branch::plus ? Branch::minus : Branch::plus;
      jobs.push_back(flipped);
    }
  }

  std::vector<JobResult> results(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), [&](int i) {
    results[i] = verify_trajectory_job(jobs[i], samples, options.inject_sigma_xp_flip);
  });

  VerifyReport report;
  for (const auto& r : results) {
    report.checks += r.checks;
    report.max_product_deviation = std::max(report.max_product_deviation, r.max_product_deviation);
    report.max_invariant_drift = std::max(report.max_invariant_drift, r.max_invariant_drift);
    report.max_oracle_mismatch = std::max(report.max_oracle_mismatch, r.max_oracle_mismatch);
    for (const auto& f : r.failures)
      if (report.failures.size() < 100) report.failures.push_back(f);
  }

  if (have_scan) {
    ++report.checks;
    try {
      scan_rows(scan_job);
    } catch (const std::exception& e) {
      if (report.failures.size() < 100)
        report.failures.push_back(scan_job.name + ": " + e.what());
    }
  }

  report.pass = report.failures.empty();
  return report;
}

nlohmann::ordered_json verify_to_json(const VerifyReport& report) {
  nlohmann::ordered_json j;
  j["pass"] = report.pass;
  j["checks"] = report.checks;
  j["max_product_deviation"] = report.max_product_deviation;
  j["max_invariant_drift"] = report.max_invariant_drift;
  j["max_oracle_mismatch"] = report.max_oracle_mismatch;
  j["failures"] = report.failures;
  return j;
}

nlohmann::ordered_json run_wigner(const RunConfig& config, const WignerOptions& options,
                                  const std::string& out_dir) {
  validate_config(config);
  if (options.refine < 1 || options.refine > 8)
    throw std::invalid_argument("refine must be between 1 and 8");
  WignerGridSpec spec = config.wigner.value_or(WignerGridSpec{});
  if (spec.times.empty()) spec.times = {config.time.t1};

  fs::create_directories(out_dir);
  std::vector<std::pair<fs::path, std::string>> files;
  nlohmann::ordered_json report;
  report["config"] = config_to_json(config);
  report["times"] = nlohmann::ordered_json::array();

  for (std::size_t k = 0; k < spec.times.size(); ++k) {
    const double tau = spec.times[k];
    const Moments m = moments(config.params, config.initial, tau);
    // A strongly squeezed packet concentrates on a diagonal ridge thinner than
    // the cell size; refuse the dump instead of producing garbage quadrature.
    const double det = m.sigma_x2 * m.sigma_p2 - m.sigma_xp * m.sigma_xp;
    const double ridge_x = std::sqrt(det / m.sigma_p2);
    const double ridge_p = std::sqrt(det / m.sigma_x2);
    PhaseSpaceGrid grid = auto_grid(config.params, config.initial, tau, spec.nx, spec.np,
                                    spec.half_width);
    if (grid.dx() > 0.5 * ridge_x || grid.dp() > 0.5 * ridge_p)
      throw std::invalid_argument(
          "grid cannot resolve the packet at t = " + fmt17(tau) +
          "; needs nx >= " + std::to_string(static_cast<long>(2.0 * (grid.x_max - grid.x_min) /
                                                              ridge_x) + 2) +
          ", np >= " + std::to_string(static_cast<long>(2.0 * (grid.p_max - grid.p_min) /
                                                        ridge_p) + 2));
    fill_wigner(config.params, config.initial, tau, grid);
    const GridMoments gm = grid_moments(grid);
    double peak = 0.0;
    for (double v : grid.values) peak = std::max(peak, v);

    std::ostringstream os;
    write_grid_csv(os, grid);
    os << "# mass," << fmt17(gm.mass) << "\n";
    const std::string grid_name = config.name + "_wigner_t" + std::to_string(k) + ".csv";
    files.emplace_back(fs::path(out_dir) / grid_name, os.str());

    nlohmann::ordered_json entry;
    entry["t"] = tau;
    entry["file"] = grid_name;
    entry["peak"] = peak;
    entry["peak_expected"] = 1.0 / (M_PI * config.params.hbar);
    entry["mass"] = gm.mass;
    entry["grid_sigma_x2"] = gm.sigma_x2;
    entry["grid_sigma_p2"] = gm.sigma_p2;
    entry["grid_sigma_xp"] = gm.sigma_xp;

    if (options.fp_residual) {
      const FokkerPlanckReport coarse =
          fokker_planck_residual(config.params, config.initial, tau, grid);
      std::ostringstream rs;
      write_grid_csv(rs, grid, &coarse.residual);
      const std::string res_name = config.name + "_fpresidual_t" + std::to_string(k) + ".csv";
      files.emplace_back(fs::path(out_dir) / res_name, rs.str());
      entry["fp_file"] = res_name;
      entry["fp_max_norm"] = coarse.max_norm;
      entry["fp_dt"] = coarse.dt;
      if (options.refine >= 2) {
        const PhaseSpaceGrid fine_spec = [&] {
          PhaseSpaceGrid g = grid;
          g.nx = options.refine * (grid.nx - 1) + 1;
          g.np = options.refine * (grid.np - 1) + 1;
          g.values.clear();
          return g;
        }();
        const FokkerPlanckReport fine = fokker_planck_residual(
            config.params, config.initial, tau, fine_spec, coarse.dt / options.refine);
        entry["refine"] = options.refine;
        entry["fp_max_norm_refined"] = fine.max_norm;
        entry["fp_ratio"] = fine.max_norm > 0.0 ? coarse.max_norm / fine.max_norm : 0.0;
      }
    }
    report["times"].push_back(entry);
  }

  files.emplace_back(fs::path(out_dir) / (config.name + "_wigner.json"), report.dump(2) + "\n");
  emit_files(files);
  return report;
}

}  // namespace ermakov
