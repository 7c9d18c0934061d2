#include "ermakov/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ermakov/observables.hpp"
#include "ermakov/trajectories.hpp"
#include "ermakov/width_dynamics.hpp"

namespace ermakov {

namespace {

// Frozen Gaussian kernel at one instant, so grid sweeps pay one exp per point.
struct WignerKernel {
  double eta, p_mean;
  double qxx, qxp, qpp;  // exponent = -(qxx x~^2 + qxp x~ p~ + qpp p~^2)
  double norm;

  double operator()(double x, double p) const {
    const double xr = x - eta, pr = p - p_mean;
    return norm * std::exp(-(qxx * xr * xr + qxp * xr * pr + qpp * pr * pr));
  }
};

WignerKernel make_kernel(const SystemParams& params, const InitialState& init, double t) {
  const Moments m = moments(params, init, t);
  const MeanState mean = mean_position(params, init, t);
  const double h2 = params.hbar * params.hbar;
  WignerKernel k;
  k.eta = mean.eta;
  k.p_mean = params.mass * mean.eta_dot;
  k.qxx = 2.0 * m.sigma_p2 / h2;
  k.qxp = -4.0 * m.sigma_xp / h2;
  k.qpp = 2.0 * m.sigma_x2 / h2;
  k.norm = 1.0 / (M_PI * params.hbar);
  return k;
}

void check_odd(int n, const char* axis) {
  if (n < 3 || n % 2 == 0)
    throw std::invalid_argument(std::string("simpson quadrature needs an odd point count >= 3 in ") +
                                axis);
}

double simpson_weight(int i, int n) {
  if (i == 0 || i == n - 1) return 1.0;
  return i % 2 == 1 ? 4.0 : 2.0;
}

double default_dt(const SystemParams& params) { return 1e-4 * char_time(params); }

}  // namespace

PhaseSpaceGrid auto_grid(const SystemParams& params, const InitialState& init, double t, int nx,
                         int np, double half_width) {
  validate(params, init);
  if (nx < 3 || np < 3) throw std::invalid_argument("grid needs at least 3 points per axis");
  const Moments m = moments(params, init, t);
  const MeanState mean = mean_position(params, init, t);
  const double sx = std::sqrt(m.sigma_x2), sp = std::sqrt(m.sigma_p2);
  PhaseSpaceGrid grid;
  grid.x_min = mean.eta - half_width * sx;
  grid.x_max = mean.eta + half_width * sx;
  grid.p_min = params.mass * mean.eta_dot - half_width * sp;
  grid.p_max = params.mass * mean.eta_dot + half_width * sp;
  grid.nx = nx;
  grid.np = np;
  return grid;
}

double wigner(const SystemParams& params, const InitialState& init, double t, double x,
              double p) {
  return make_kernel(params, init, t)(x, p);
}

double wigner_exponent_invariant_form(const SystemParams& params, const InitialState& init,
                                      double t, double x, double p) {
  const Moments m = moments(params, init, t);
  const MeanState mean = mean_position(params, init, t);
  const double xr = x - mean.eta;
  const double pr = p - params.mass * mean.eta_dot;
  const double h2 = params.hbar * params.hbar;
  // Motion invariant of the displaced point, then weighted by 2 e^{-gamma t};
  // the growth factors cancel only in exact arithmetic, which is the point of
  // evaluating the exponent along this second route.
  const double i_nl = std::exp(params.gamma * t) / h2 *
                      (m.sigma_p2 * xr * xr - 2.0 * m.sigma_xp * xr * pr + m.sigma_x2 * pr * pr);
  return 2.0 * std::exp(-params.gamma * t) * i_nl;
}

void fill_wigner(const SystemParams& params, const InitialState& init, double t,
                 PhaseSpaceGrid& grid) {
  const WignerKernel kernel = make_kernel(params, init, t);
  grid.values.assign(static_cast<size_t>(grid.nx) * grid.np, 0.0);
  for (int ix = 0; ix < grid.nx; ++ix) {
    const double x = grid.x_at(ix);
    for (int ip = 0; ip < grid.np; ++ip)
      grid.values[static_cast<size_t>(ix) * grid.np + ip] = kernel(x, grid.p_at(ip));
  }
}

Marginals marginals(const SystemParams& params, const InitialState& init, double t,
                    const PhaseSpaceGrid& grid) {
  check_odd(grid.nx, "x");
  check_odd(grid.np, "p");
  PhaseSpaceGrid filled;
  const PhaseSpaceGrid* g = &grid;
  if (grid.values.size() != static_cast<size_t>(grid.nx) * grid.np) {
    filled = grid;
    fill_wigner(params, init, t, filled);
    g = &filled;
  }
  Marginals out;
  out.rho_x.assign(g->nx, 0.0);
  out.rho_p.assign(g->np, 0.0);
  const double wx = g->dx() / 3.0, wp = g->dp() / 3.0;
  for (int ix = 0; ix < g->nx; ++ix)
    for (int ip = 0; ip < g->np; ++ip) {
      const double w = g->values[static_cast<size_t>(ix) * g->np + ip];
      out.rho_x[ix] += wp * simpson_weight(ip, g->np) * w;
      out.rho_p[ip] += wx * simpson_weight(ix, g->nx) * w;
    }
  for (int ix = 0; ix < g->nx; ++ix) out.mass_x += wx * simpson_weight(ix, g->nx) * out.rho_x[ix];
  for (int ip = 0; ip < g->np; ++ip) out.mass_p += wp * simpson_weight(ip, g->np) * out.rho_p[ip];
  if (out.mass_x < 1.0 - 1e-6 || out.mass_p < 1.0 - 1e-6)
    throw std::domain_error("grid does not cover the packet: captured mass " +
                            std::to_string(std::min(out.mass_x, out.mass_p)));
  return out;
}

GridMoments grid_moments(const PhaseSpaceGrid& grid) {
  check_odd(grid.nx, "x");
  check_odd(grid.np, "p");
  if (grid.values.size() != static_cast<size_t>(grid.nx) * grid.np)
    throw std::invalid_argument("grid values not filled");
  const double wx = grid.dx() / 3.0, wp = grid.dp() / 3.0;
  GridMoments gm;
  double sx = 0.0, sp = 0.0, sxx = 0.0, spp = 0.0, sxp = 0.0;
  for (int ix = 0; ix < grid.nx; ++ix) {
    const double x = grid.x_at(ix);
    const double cx = wx * simpson_weight(ix, grid.nx);
    for (int ip = 0; ip < grid.np; ++ip) {
      const double p = grid.p_at(ip);
      const double c = cx * wp * simpson_weight(ip, grid.np);
      const double w = c * grid.values[static_cast<size_t>(ix) * grid.np + ip];
      gm.mass += w;
      sx += w * x;
      sp += w * p;
      sxx += w * x * x;
      spp += w * p * p;
      sxp += w * x * p;
    }
  }
  gm.mean_x = sx / gm.mass;
  gm.mean_p = sp / gm.mass;
  gm.sigma_x2 = sxx / gm.mass - gm.mean_x * gm.mean_x;
  gm.sigma_p2 = spp / gm.mass - gm.mean_p * gm.mean_p;
  gm.sigma_xp = sxp / gm.mass - gm.mean_x * gm.mean_p;
  return gm;
}

FokkerPlanckReport fokker_planck_residual(const SystemParams& params, const InitialState& init,
                                          double t, const PhaseSpaceGrid& grid, double dt) {
  validate(params, init);
  if (grid.nx < 3 || grid.np < 3)
    throw std::invalid_argument("residual stencil needs at least 3 points per axis");
  if (dt <= 0.0) dt = default_dt(params);

  const WignerKernel now = make_kernel(params, init, t);
  const WignerKernel fwd = make_kernel(params, init, t + dt);
  const WignerKernel bwd = make_kernel(params, init, t - dt);
  const Moments m = moments(params, init, t);
  const MeanState mean = mean_position(params, init, t);
  const double p_mean = params.mass * mean.eta_dot;

  FokkerPlanckReport report;
  report.nx_interior = grid.nx - 2;
  report.np_interior = grid.np - 2;
  report.residual.assign(static_cast<size_t>(report.nx_interior) * report.np_interior, 0.0);
  report.d_x = 0.5 * params.gamma * m.sigma_x2;
  report.d_p = -0.5 * params.gamma * m.sigma_p2;
  report.dt = dt;

  const double hx = grid.dx(), hp = grid.dp();
  for (int ix = 1; ix + 1 < grid.nx; ++ix) {
    const double x = grid.x_at(ix);
    // drift uses the grid position and the mean momentum; with this pairing the
    // residual vanishes identically for the Gaussian family in every regime.
    const double drift = params.mass * params.omega0 * params.omega0 * x + params.gamma * p_mean;
    for (int ip = 1; ip + 1 < grid.np; ++ip) {
      const double p = grid.p_at(ip);
      const double w = now(x, p);
      const double wxp = now(x + hx, p), wxm = now(x - hx, p);
      const double wpp = now(x, p + hp), wpm = now(x, p - hp);
      const double w_t = (fwd(x, p) - bwd(x, p)) / (2.0 * dt);
      const double w_x = (wxp - wxm) / (2.0 * hx);
      const double w_p = (wpp - wpm) / (2.0 * hp);
      const double w_xx = (wxp - 2.0 * w + wxm) / (hx * hx);
      const double w_pp = (wpp - 2.0 * w + wpm) / (hp * hp);
      const double r =
          w_t + p / params.mass * w_x - drift * w_p - report.d_x * w_xx - report.d_p * w_pp;
      report.residual[static_cast<size_t>(ix - 1) * report.np_interior + (ip - 1)] = r;
      report.max_norm = std::max(report.max_norm, std::abs(r));
    }
  }
  return report;
}

double momentum_velocity_field(const SystemParams& params, const InitialState& init, double t,
                               double p) {
  validate(params, init);
  const Moments m = moments(params, init, t);
  const MeanState mean = mean_position(params, init, t);
  const double p_mean = params.mass * mean.eta_dot;
  const double dpdt = -params.gamma * p_mean -
                      params.mass * params.omega0 * params.omega0 * mean.eta;
  return -params.mass * params.omega0 * params.omega0 * m.sigma_xp / m.sigma_p2 * (p - p_mean) +
         dpdt;
}

double momentum_velocity_field_riccati(const SystemParams& params, const InitialState& init,
                                       double t, double p) {
  validate(params, init);
  const RiccatiValue c = riccati_from_width(params, ermakov_alpha(params, init, t));
  const MeanState mean = mean_position(params, init, t);
  const double p_mean = params.mass * mean.eta_dot;
  const double dpdt = -params.gamma * p_mean -
                      params.mass * params.omega0 * params.omega0 * mean.eta;
  const double mod_sq = c.real_part * c.real_part + c.imag_part * c.imag_part;
  return -params.omega0 * params.omega0 * c.real_part / mod_sq * (p - p_mean) + dpdt;
}

SmoluchowskiReport smoluchowski_residual(const SystemParams& params, const InitialState& init,
                                         double t, int n, double half_width, double dt) {
  validate(params, init);
  if (n < 3) throw std::invalid_argument("residual stencil needs at least 3 points");
  if (dt <= 0.0) dt = default_dt(params);

  struct Slice {
    double eta, eta_dot, sigma_x2, c_r;
  };
  const auto slice = [&](double tt) {
    const MeanState mean = mean_position(params, init, tt);
    const Moments m = moments(params, init, tt);
    const WidthState w = ermakov_alpha(params, init, tt);
    return Slice{mean.eta, mean.eta_dot, m.sigma_x2,
                 w.alpha_dot / w.alpha - 0.5 * params.gamma};
  };
  const auto rho = [](const Slice& s, double x) {
    const double xr = x - s.eta;
    return std::exp(-0.5 * xr * xr / s.sigma_x2) / std::sqrt(2.0 * M_PI * s.sigma_x2);
  };

  const Slice now = slice(t), fwd = slice(t + dt), bwd = slice(t - dt);
  const double sx = std::sqrt(now.sigma_x2);
  const double x_min = now.eta - half_width * sx;
  const double hx = 2.0 * half_width * sx / (n - 1);
  const double d_x = 0.5 * params.gamma * now.sigma_x2;

  SmoluchowskiReport report;
  report.dx = hx;
  report.dt = dt;
  report.residual.assign(n - 2, 0.0);
  const auto v_nl = [&](double x) { return now.c_r * (x - now.eta) + now.eta_dot; };
  for (int i = 1; i + 1 < n; ++i) {
    const double x = x_min + i * hx;
    const double r_c = rho(now, x), r_p = rho(now, x + hx), r_m = rho(now, x - hx);
    const double rho_t = (rho(fwd, x) - rho(bwd, x)) / (2.0 * dt);
    const double flux_x = (v_nl(x + hx) * r_p - v_nl(x - hx) * r_m) / (2.0 * hx);
    const double rho_xx = (r_p - 2.0 * r_c + r_m) / (hx * hx);
    const double r = rho_t + flux_x - d_x * rho_xx;
    report.residual[i - 1] = r;
    report.max_norm = std::max(report.max_norm, std::abs(r));
  }
  return report;
}

void write_grid_csv(std::ostream& out, const PhaseSpaceGrid& grid,
                    const std::vector<double>* residual) {
  char buf[160];
  if (residual == nullptr) {
    if (grid.values.size() != static_cast<size_t>(grid.nx) * grid.np)
      throw std::invalid_argument("grid values not filled");
    out << "x,p,w\n";
    for (int ix = 0; ix < grid.nx; ++ix)
      for (int ip = 0; ip < grid.np; ++ip) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", grid.x_at(ix), grid.p_at(ip),
                      grid.values[static_cast<size_t>(ix) * grid.np + ip]);
        out << buf;
      }
    return;
  }
  // Residual rows cover the stencil interior only.
  const int nxi = grid.nx - 2, npi = grid.np - 2;
  if (residual->size() != static_cast<size_t>(nxi) * npi)
    throw std::invalid_argument("residual size does not match the grid interior");
  if (grid.values.size() != static_cast<size_t>(grid.nx) * grid.np)
    throw std::invalid_argument("grid values not filled");
  out << "x,p,w,residual\n";
  for (int ix = 1; ix + 1 < grid.nx; ++ix)
    for (int ip = 1; ip + 1 < grid.np; ++ip) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", grid.x_at(ix), grid.p_at(ip),
                    grid.values[static_cast<size_t>(ix) * grid.np + ip],
                    (*residual)[static_cast<size_t>(ix - 1) * npi + (ip - 1)]);
      out << buf;
    }
}

}  // namespace ermakov
