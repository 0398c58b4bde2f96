#pragma once

// Fixed-step classical Runge-Kutta integration plus settling-time and
// decay-rate diagnostics. A fixed step keeps settling times reproducible
// on the grid; adaptive steppers would stretch steps exactly where the
// dynamics crawl and blur the measurement.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adaptlab/numerics.hpp"
#include "adaptlab/systems.hpp"

namespace adaptlab {

// Raised when the state stops being finite mid-integration.
struct DivergenceError : std::runtime_error {
  explicit DivergenceError(double when)
      : std::runtime_error("integration diverged at t = " +
                           std::to_string(when)),
        t(when) {}
  double t;
};

struct Trajectory {
  std::string system_tag;
  double h = 0.0;
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<Vec> derivs;  // rhs evaluated at each sample

  std::size_t size() const { return times.size(); }
  const Vec& front_state() const { return states.front(); }
  const Vec& back_state() const { return states.back(); }
};

using RhsFn = std::function<Vec(double, const Vec&)>;

// Generic fixed-step RK4 core over an arbitrary right-hand side.
Trajectory rk4_core(const RhsFn& f, const Vec& z0, double t0, double tf,
                    double h, const std::string& tag);

// RK4 over one of the system models. (tf - t0)/h must not exceed 1e8.
Trajectory rk4(const SystemModel& sys, const Vec& z0, double t0, double tf,
               double h);

struct SettlingReport {
  bool settled = false;
  double t_settle = 0.0;  // absolute grid time
  double elapsed = 0.0;   // t_settle - t0
  double c = 0.0;         // contraction fraction used
  double initial_dist = 0.0;
  double nu_hat = 0.0;  // -ln(c)/elapsed; +inf when elapsed == 0
  bool rate_unbounded = false;
};

// Smallest grid time tau such that ||z(t) - z_inf|| <= c * ||z(t0) - z_inf||
// for every grid t >= tau. The all-later-samples criterion matters for
// oscillatory trajectories where a first crossing under-reports.
SettlingReport settling_time(const Trajectory& traj, const Vec& z_inf,
                             double fraction);

struct LyapSample {
  double t;
  double v;
  double vdot;
};

// V and its chain-rule derivative sampled along a trajectory. The
// trajectory must have been produced from the same system (tag check).
std::vector<LyapSample> lyapunov_series(const Trajectory& traj,
                                        const SystemModel& sys);

struct ScanEntry {
  Vec z0;
  SettlingReport report;
  std::string error;  // nonempty if integration failed for this entry
};

// One settling report per initial condition at a fixed fraction c;
// integration failures are recorded per entry without aborting the batch.
std::vector<ScanEntry> decay_rate_scan(const SystemModel& sys,
                                       const std::vector<Vec>& z0_list,
                                       double fraction, double horizon,
                                       double h);

}  // namespace adaptlab
