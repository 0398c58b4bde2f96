#include "adaptlab/regions.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "adaptlab/constants.hpp"

namespace adaptlab {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

[[noreturn]] void domain(const std::string& what) {
  throw std::domain_error(what);
}

// Upper trough face for the planar system: e = (a - b phi) xbar / (a + b phi),
// defined for phi < a/b.
double orm_face(const OrmScalar& s, double phi) {
  return (s.a - s.b * phi) * s.xbar() / (s.a + s.b * phi);
}

// CRM trough face e = x_m (al - b phi)/(al + b phi), phi < al/b, where
// al = a + ell.
double crm_face(const CrmScalar& s, double xm, double phi) {
  const double al = s.a + s.ell;
  return xm * (al - s.b * phi) / (al + s.b * phi);
}

// x_m band of the CRM trough: b rbar / |a + ell| <= x_m <= xbar.
double crm_band_lo(const CrmScalar& s) { return -s.b * s.rbar / (s.a + s.ell); }

}  // namespace

const char* region_name(RegionId id) {
  switch (id) {
    case RegionId::M1: return "M1";
    case RegionId::M2: return "M2";
    case RegionId::M3: return "M3";
    case RegionId::M0Boundary: return "M0_boundary";
    case RegionId::Outside: return "Outside";
  }
  return "?";
}

Vec surface_point(const OrmScalar& sys, SurfaceId surface, double phi) {
  const double ab = sys.a / sys.b;
  switch (surface) {
    case SurfaceId::S1:
      return Vec{-sys.xbar(), phi};
    case SurfaceId::S2:
      if (!(phi < ab))
        domain("S2: phi must be < a/b = " + fmt(ab) + " (got " + fmt(phi) + ")");
      return Vec{orm_face(sys, phi), phi};
    case SurfaceId::S3:
      if (!(phi >= ab && phi < 0.0))
        domain("S3: phi must lie in [a/b, 0) = [" + fmt(ab) + ", 0)");
      return Vec{0.0, phi};
    case SurfaceId::S5: {
      const double den = sys.a + sys.b * phi;
      if (den == 0.0)
        domain("S5: surface is singular at phi = -a/b = " + fmt(-ab));
      return Vec{-sys.xbar() * sys.b * phi / den, phi};
    }
    case SurfaceId::S4:
      domain("S4: the level set is not phi-parameterized; use the V series");
  }
  domain("unknown surface");
}

Vec surface_point(const CrmScalar& sys, SurfaceId surface, double phi) {
  const double al = sys.a + sys.ell;
  const double alb = al / sys.b;
  switch (surface) {
    case SurfaceId::S1:
      if (!(phi < alb))
        domain("S1: phi must be < (a+ell)/b = " + fmt(alb) +
               "; the surface degenerates at phi = " + fmt(alb) + " (got " +
               fmt(phi) + ")");
      return Vec{sys.xbar(), crm_face(sys, sys.xbar(), phi), phi};
    case SurfaceId::S2:
      if (!(phi < 0.0)) domain("S2: phi must be negative");
      return Vec{sys.xbar(), -sys.xbar(), phi};
    case SurfaceId::S3:
      if (!(phi >= alb && phi < 0.0))
        domain("S3: phi must lie in [(a+ell)/b, 0) = [" + fmt(alb) + ", 0)");
      return Vec{sys.xbar(), 0.0, phi};
    case SurfaceId::S5: {
      // Intersection of e-dot = 0 with x_m-dot = 0:
      //   e = -x_m b phi/(a + b phi),  x_m = (ell e - b rbar)/a.
      const double den = sys.a * sys.a + al * sys.b * phi;
      if (den == 0.0)
        domain("S5: surface is singular at phi = -a^2/((a+ell) b) = " +
               fmt(-sys.a * sys.a / (al * sys.b)));
      const double e = sys.b * sys.b * phi * sys.rbar / den;
      const double xm = (sys.ell * e - sys.b * sys.rbar) / sys.a;
      return Vec{xm, e, phi};
    }
    case SurfaceId::S4:
      domain("S4: the level set is not phi-parameterized; use the V series");
  }
  domain("unknown surface");
}

namespace {

bool orm_m3(const OrmScalar& s, double e, double phi, double tol) {
  return e * e + phi * phi / s.gamma < s.xbar() * s.xbar() + tol;
}

bool orm_m1(const OrmScalar& s, double e, double phi, double tol,
            bool closed) {
  const double ab = s.a / s.b;
  if (closed) {
    if (!(phi <= ab + tol)) return false;
    return -s.xbar() - tol <= e && e <= orm_face(s, phi) + tol;
  }
  if (!(phi < ab)) return false;
  return -s.xbar() < e && e < orm_face(s, phi);
}

bool orm_m2(const OrmScalar& s, double e, double phi, double tol,
            bool closed) {
  const double ab = s.a / s.b;
  if (closed) {
    if (!(phi >= ab - tol && phi <= tol)) return false;
    return -s.xbar() - tol <= e && e <= tol;
  }
  if (!(phi >= ab && phi < 0.0)) return false;
  return -s.xbar() < e && e < 0.0;
}

bool crm_m3(const CrmScalar& s, double xm, double e, double phi, double tol) {
  return e * e + phi * phi / s.gamma <= s.xbar() * s.xbar() + tol &&
         -tol <= xm && xm <= 2.0 * s.xbar() + tol;
}

bool crm_band(const CrmScalar& s, double xm, double tol) {
  return crm_band_lo(s) - tol <= xm && xm <= s.xbar() + tol;
}

bool crm_m1(const CrmScalar& s, double xm, double e, double phi, double tol,
            bool closed) {
  const double alb = (s.a + s.ell) / s.b;
  if (!crm_band(s, xm, tol)) return false;
  if (closed ? !(phi <= alb + tol) : !(phi < alb)) return false;
  return -xm - tol <= e && e <= crm_face(s, xm, phi) + tol;
}

bool crm_m2(const CrmScalar& s, double xm, double e, double phi, double tol,
            bool closed) {
  const double alb = (s.a + s.ell) / s.b;
  if (!crm_band(s, xm, tol)) return false;
  if (closed ? !(phi >= alb - tol && phi <= tol) : !(phi >= alb && phi < 0.0))
    return false;
  return -xm - tol <= e && e <= tol;
}

}  // namespace

RegionId classify(const OrmScalar& sys, const Vec& z) {
  if (z.size() != 2)
    throw std::invalid_argument("classify: expected a 2-dimensional state");
  const double e = z[0], phi = z[1];
  if (orm_m3(sys, e, phi, 0.0)) return RegionId::M3;
  if (orm_m1(sys, e, phi, 0.0, false)) return RegionId::M1;
  if (orm_m2(sys, e, phi, 0.0, false)) return RegionId::M2;
  if (inside_m0(sys, z, 0.0)) return RegionId::M0Boundary;
  return RegionId::Outside;
}

RegionId classify(const CrmScalar& sys, const Vec& z) {
  if (z.size() != 3)
    throw std::invalid_argument("classify: expected a 3-dimensional state");
  const double xm = z[0], e = z[1], phi = z[2];
  if (crm_m3(sys, xm, e, phi, 0.0)) return RegionId::M3;
  if (crm_m1(sys, xm, e, phi, 0.0, false)) return RegionId::M1;
  if (crm_m2(sys, xm, e, phi, 0.0, false)) return RegionId::M2;
  if (inside_m0(sys, z, 0.0)) return RegionId::M0Boundary;
  return RegionId::Outside;
}

bool inside_m0(const OrmScalar& sys, const Vec& z, double tol) {
  const double e = z[0], phi = z[1];
  return orm_m3(sys, e, phi, tol) || orm_m1(sys, e, phi, tol, true) ||
         orm_m2(sys, e, phi, tol, true);
}

bool inside_m0(const CrmScalar& sys, const Vec& z, double tol) {
  const double xm = z[0], e = z[1], phi = z[2];
  return crm_m3(sys, xm, e, phi, tol) || crm_m1(sys, xm, e, phi, tol, true) ||
         crm_m2(sys, xm, e, phi, tol, true);
}

double dz_bound(const OrmScalar& sys) {
  const double xb = sys.xbar();
  const double e_rate =
      std::fabs(sys.a * xb) + 2.0 * std::fabs(sys.b * std::sqrt(sys.gamma) * xb * xb);
  const double phi_rate = 2.0 * sys.gamma * xb * xb;
  return std::hypot(e_rate, phi_rate);
}

double dz_bound(const CrmScalar& sys) {
  const double xb = sys.xbar();
  const double al = sys.a + sys.ell;
  const double e_rate =
      std::fabs(al * xb) + 2.0 * sys.b * std::sqrt(sys.gamma) * xb * xb;
  const double phi_rate = 2.0 * sys.gamma * xb * xb;
  const double xm_rate = std::fabs(al * xb) + sys.rbar;
  return std::sqrt(e_rate * e_rate + phi_rate * phi_rate + xm_rate * xm_rate);
}

double t_lower_bound(const Vec& z0_offset, double c, double d_z) {
  if (!(c > 0.0 && c < 1.0))
    throw std::invalid_argument("t_lower_bound: c must be in (0,1)");
  if (!(d_z > 0.0))
    throw std::invalid_argument("t_lower_bound: d_z must be positive");
  return z0_offset.norm() * (1.0 - c) / d_z;
}

namespace {

FlowReport run_flow(const std::vector<FlowSample>& samples, int degenerate) {
  FlowReport rep;
  rep.degenerate = degenerate;
  rep.samples = static_cast<int>(samples.size());
  rep.min_inner_product = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    if (s.inner < rep.min_inner_product) {
      rep.min_inner_product = s.inner;
      rep.worst_point = s.point;
    }
  }
  return rep;
}

}  // namespace

FlowReport boundary_flow_check(const OrmScalar& sys, SurfaceId surface,
                               int n_samples, const SampleRange& range) {
  if (surface != SurfaceId::S1 && surface != SurfaceId::S2 &&
      surface != SurfaceId::S3)
    domain("boundary_flow_check: only S1, S2, S3 bound the trough");
  if (n_samples < 1)
    throw std::invalid_argument("boundary_flow_check: need >= 1 sample");

  SystemModel model = sys;
  std::vector<FlowSample> samples;
  samples.reserve(static_cast<std::size_t>(n_samples));
  int degenerate = 0;
  for (int i = 0; i < n_samples; ++i) {
    const double u = n_samples == 1 ? 0.5
                                    : static_cast<double>(i) /
                                          static_cast<double>(n_samples - 1);
    const double phi = range.phi_min + u * (range.phi_max - range.phi_min);
    const Vec z = surface_point(sys, surface, phi);
    Vec n(2);
    if (surface == SurfaceId::S1) {
      n = Vec{1.0, 0.0};
    } else if (surface == SurfaceId::S3) {
      n = Vec{-1.0, 0.0};
    } else {
      const double dedphi =
          -2.0 * sys.b * sys.xbar() * sys.a / std::pow(sys.a + sys.b * phi, 2);
      n = Vec{-dedphi, 1.0};
    }
    const double len = n.norm();
    if (len < 1e-12) {
      ++degenerate;
      continue;
    }
    n *= 1.0 / len;
    samples.push_back({z, n.dot(rhs(model, 0.0, z))});
  }
  return run_flow(samples, degenerate);
}

FlowReport boundary_flow_check(const CrmScalar& sys, SurfaceId surface,
                               int n_samples, const SampleRange& range) {
  if (surface != SurfaceId::S1 && surface != SurfaceId::S2 &&
      surface != SurfaceId::S3)
    domain("boundary_flow_check: only S1, S2, S3 bound the trough");
  if (n_samples < 1)
    throw std::invalid_argument("boundary_flow_check: need >= 1 sample");

  const double al = sys.a + sys.ell;
  SystemModel model = sys;
  const int n_xm = std::max(1, static_cast<int>(std::lround(
                                   std::sqrt(static_cast<double>(n_samples)))));
  const int n_phi = (n_samples + n_xm - 1) / n_xm;
  std::vector<FlowSample> samples;
  samples.reserve(static_cast<std::size_t>(n_xm) * n_phi);
  int degenerate = 0;
  for (int ip = 0; ip < n_phi; ++ip) {
    const double up =
        n_phi == 1 ? 0.5 : static_cast<double>(ip) / (n_phi - 1);
    const double phi = range.phi_min + up * (range.phi_max - range.phi_min);
    for (int ix = 0; ix < n_xm; ++ix) {
      const double ux =
          n_xm == 1 ? 0.5 : static_cast<double>(ix) / (n_xm - 1);
      const double xm = range.xm_min + ux * (range.xm_max - range.xm_min);
      Vec z(3);
      Vec n(3);
      if (surface == SurfaceId::S1) {
        z = Vec{xm, crm_face(sys, xm, phi), phi};
        // Inward normal of e = g(x_m, phi) with the region on e <= g:
        // the cross product of the two surface tangents.
        const double gx = (al - sys.b * phi) / (al + sys.b * phi);
        const double gp =
            -2.0 * al * sys.b * xm / std::pow(al + sys.b * phi, 2);
        n = Vec{gx, -1.0, gp};
      } else if (surface == SurfaceId::S2) {
        z = Vec{xm, -xm, phi};
        n = Vec{0.0, 1.0, 0.0};
      } else {
        z = Vec{xm, 0.0, phi};
        n = Vec{0.0, -1.0, 0.0};
      }
      const double len = n.norm();
      if (len < 1e-12) {
        ++degenerate;
        continue;
      }
      n *= 1.0 / len;
      samples.push_back({z, n.dot(rhs(model, 0.0, z))});
    }
  }
  return run_flow(samples, degenerate);
}

namespace {

template <typename System>
InvarianceReport invariance_impl(const Trajectory& traj, const System& sys,
                                 const char* want_tag) {
  SystemModel model = sys;
  if (traj.system_tag != system_tag(model))
    throw std::invalid_argument("invariance_check: trajectory tag '" +
                                traj.system_tag + "' does not match '" +
                                want_tag + "'");
  InvarianceReport rep;
  std::size_t i = 0;
  for (; i < traj.size(); ++i) {
    if (inside_m0(sys, traj.states[i], 0.0)) {
      rep.entered_at = traj.times[i];
      break;
    }
  }
  if (!rep.entered_at) return rep;
  for (; i < traj.size(); ++i) {
    if (!inside_m0(sys, traj.states[i], tol::region_boundary_abs)) {
      rep.violated_at = traj.times[i];
      break;
    }
  }
  return rep;
}

}  // namespace

InvarianceReport invariance_check(const Trajectory& traj,
                                  const OrmScalar& sys) {
  return invariance_impl(traj, sys, "orm[2]");
}

InvarianceReport invariance_check(const Trajectory& traj,
                                  const CrmScalar& sys) {
  return invariance_impl(traj, sys, "crm[3]");
}

StickingDiagnostic sticking_scan(const OrmScalar& sys,
                                 const std::vector<double>& phi0_list) {
  StickingDiagnostic diag;
  SystemModel model = sys;
  for (double phi0 : phi0_list) {
    if (!(phi0 < sys.a / sys.b))
      domain("sticking_scan: phi0 must be < a/b = " + fmt(sys.a / sys.b));
    const double delta = 2.0 * sys.a * sys.xbar() / (sys.a + sys.b * phi0);
    const Vec z{-sys.xbar() + 0.5 * delta, phi0};
    diag.phi0_values.push_back(phi0);
    diag.delta_values.push_back(delta);
    diag.phi_dot_abs.push_back(std::fabs(rhs(model, 0.0, z)[1]));
  }
  return diag;
}

StickingDiagnostic sticking_scan(const CrmScalar& sys,
                                 const std::vector<double>& phi0_list) {
  StickingDiagnostic diag;
  SystemModel model = sys;
  const double al = sys.a + sys.ell;
  for (double phi0 : phi0_list) {
    if (!(phi0 < al / sys.b))
      domain("sticking_scan: phi0 must be < (a+ell)/b = " + fmt(al / sys.b));
    const double delta = 2.0 * al * sys.xbar() / (al + sys.b * phi0);
    const Vec z{sys.xbar(), -sys.xbar() + 0.5 * delta, phi0};
    diag.phi0_values.push_back(phi0);
    diag.delta_values.push_back(delta);
    diag.phi_dot_abs.push_back(std::fabs(rhs(model, 0.0, z)[2]));
  }
  return diag;
}

GridSpec default_grid(const OrmScalar& sys) {
  GridSpec g{};
  g.phi_min = -12.0;
  g.phi_max = 1.0;
  g.e_min = -sys.xbar() - 1.0;
  g.e_max = 1.0;
  return g;
}

GridSpec default_grid(const CrmScalar& sys) {
  GridSpec g{};
  g.phi_min = -12.0;
  g.phi_max = 1.0;
  g.e_min = -sys.xbar() - 1.0;
  g.e_max = 1.0;
  g.xm_slice = sys.xbar();
  return g;
}

namespace {

template <typename System, typename MakeState>
void grid_csv(const System& sys, const GridSpec& grid, std::ostream& os,
              const char* header, MakeState make_state) {
  os << header << "\n";
  char buf[96];
  for (int ip = 0; ip < grid.n_phi; ++ip) {
    const double phi =
        grid.phi_min + (grid.phi_max - grid.phi_min) *
                           (grid.n_phi == 1 ? 0.5
                                            : static_cast<double>(ip) /
                                                  (grid.n_phi - 1));
    for (int ie = 0; ie < grid.n_e; ++ie) {
      const double e =
          grid.e_min + (grid.e_max - grid.e_min) *
                           (grid.n_e == 1 ? 0.5
                                          : static_cast<double>(ie) /
                                                (grid.n_e - 1));
      const Vec z = make_state(e, phi);
      if (z.size() == 2)
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,", phi, e);
      else
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,", phi, e, z[0]);
      os << buf << region_name(classify(sys, z)) << "\n";
    }
  }
}

}  // namespace

void region_grid_csv(const OrmScalar& sys, const GridSpec& grid,
                     std::ostream& os) {
  grid_csv(sys, grid, os, "phi,e,region",
           [](double e, double phi) { return Vec{e, phi}; });
}

void region_grid_csv(const CrmScalar& sys, const GridSpec& grid,
                     std::ostream& os) {
  grid_csv(sys, grid, os, "phi,e,xm,region", [&](double e, double phi) {
    return Vec{grid.xm_slice, e, phi};
  });
}

}  // namespace adaptlab
