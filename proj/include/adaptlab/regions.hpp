#pragma once

// Closed-form surfaces and invariant regions for the scalar tracking
// loops, membership classification, the velocity bound d_z, the
// settling-time lower bound, inward-flow sampling and the sticking
// diagnostics.

#include <optional>
#include <ostream>
#include <vector>

#include "adaptlab/integrate.hpp"
#include "adaptlab/numerics.hpp"
#include "adaptlab/systems.hpp"

namespace adaptlab {

enum class RegionId { M1, M2, M3, M0Boundary, Outside };
const char* region_name(RegionId id);

// S1..S3 bound the trough regions, S4 is the Lyapunov level set (CRM
// bookkeeping only) and S5 is the e-dot = 0 locus used to seed initial
// conditions.
enum class SurfaceId { S1, S2, S3, S4, S5 };

// Point on a surface at the given phi. The CRM overload fixes x_m = xbar
// for S1/S2/S3 (reference already settled); S5 solves its defining pair
// in closed form. Throws std::domain_error outside the admissible range,
// naming the excluded value.
Vec surface_point(const OrmScalar& sys, SurfaceId surface, double phi);
Vec surface_point(const CrmScalar& sys, SurfaceId surface, double phi);

// Membership with the printed strict/non-strict inequalities, first match
// in the order M3, M1, M2; points only on the closure of the union
// classify as M0Boundary.
RegionId classify(const OrmScalar& sys, const Vec& z);
RegionId classify(const CrmScalar& sys, const Vec& z);

// Union membership with every inequality relaxed by tol (absolute).
bool inside_m0(const OrmScalar& sys, const Vec& z, double tol);
bool inside_m0(const CrmScalar& sys, const Vec& z, double tol);

// Max state-velocity norm over M0.
double dz_bound(const OrmScalar& sys);
double dz_bound(const CrmScalar& sys);

// ||z0|| (1 - c) / d_z: least time to shed a (1-c) fraction of the
// distance at bounded speed. Pass the offset from the limit point.
double t_lower_bound(const Vec& z0_offset, double c, double d_z);

struct BoundReport {
  double d_z = 0.0;
  double t_lower = 0.0;
  double c = 0.0;
  double z0_norm = 0.0;
};

struct SampleRange {
  double phi_min = 0.0;
  double phi_max = 0.0;
  // CRM surfaces extend in x_m as well; ignored for the planar system.
  double xm_min = 0.0;
  double xm_max = 0.0;
};

struct FlowSample {
  Vec point;
  double inner;
};

struct FlowReport {
  double min_inner_product = 0.0;
  Vec worst_point;
  int degenerate = 0;  // samples skipped for a near-zero normal
  int samples = 0;
};

// Samples the surface over the range, forms the unit inward normal and
// reports the minimum of normal . rhs. S4 is a Lyapunov level set and is
// certified by the V-series instead.
FlowReport boundary_flow_check(const OrmScalar& sys, SurfaceId surface,
                               int n_samples, const SampleRange& range);
FlowReport boundary_flow_check(const CrmScalar& sys, SurfaceId surface,
                               int n_samples, const SampleRange& range);

struct InvarianceReport {
  std::optional<double> entered_at;
  std::optional<double> violated_at;
};

// Finds the first sample inside the union and verifies every later sample
// stays inside, with the boundary inequalities relaxed by the fixed
// absolute tolerance to absorb integration error.
InvarianceReport invariance_check(const Trajectory& traj,
                                  const OrmScalar& sys);
InvarianceReport invariance_check(const Trajectory& traj,
                                  const CrmScalar& sys);

struct StickingDiagnostic {
  std::vector<double> phi0_values;
  std::vector<double> phi_dot_abs;
  std::vector<double> delta_values;
};

// Probes the mid-band point of the trough at each phi0 and evaluates
// |phi_dot| directly from the rhs. The band width Delta shrinks as phi0
// decreases, so the learning rate decays with depth.
StickingDiagnostic sticking_scan(const OrmScalar& sys,
                                 const std::vector<double>& phi0_list);
StickingDiagnostic sticking_scan(const CrmScalar& sys,
                                 const std::vector<double>& phi0_list);

struct GridSpec {
  double phi_min, phi_max;
  double e_min, e_max;
  int n_phi = 240;
  int n_e = 120;
  double xm_slice = 0.0;  // CRM only
};

GridSpec default_grid(const OrmScalar& sys);
GridSpec default_grid(const CrmScalar& sys);

// "phi,e,region" (planar) or "phi,e,xm,region" grids for plotting.
void region_grid_csv(const OrmScalar& sys, const GridSpec& grid,
                     std::ostream& os);
void region_grid_csv(const CrmScalar& sys, const GridSpec& grid,
                     std::ostream& os);

}  // namespace adaptlab
