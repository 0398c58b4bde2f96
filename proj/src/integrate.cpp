#include "adaptlab/integrate.hpp"

#include <cmath>
#include <limits>

namespace adaptlab {

Trajectory rk4_core(const RhsFn& f, const Vec& z0, double t0, double tf,
                    double h, const std::string& tag) {
  if (!(h > 0.0)) throw std::invalid_argument("rk4: h must be positive");
  if (!(tf >= t0)) throw std::invalid_argument("rk4: tf must be >= t0");
  const double steps_real = (tf - t0) / h;
  if (steps_real > 1e8) throw std::invalid_argument("rk4: too many steps");
  const std::size_t steps =
      static_cast<std::size_t>(std::llround(steps_real));

  Trajectory traj;
  traj.system_tag = tag;
  traj.h = h;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.derivs.reserve(steps + 1);

  Vec z = z0;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = t0 + static_cast<double>(i) * h;
    if (!z.all_finite()) throw DivergenceError(t);
    Vec k1 = f(t, z);
    traj.times.push_back(t);
    traj.states.push_back(z);
    traj.derivs.push_back(k1);
    if (i == steps) break;

    Vec k2 = f(t + 0.5 * h, z + (0.5 * h) * k1);
    Vec k3 = f(t + 0.5 * h, z + (0.5 * h) * k2);
    Vec k4 = f(t + h, z + h * k3);
    Vec incr = k1;
    incr += 2.0 * k2;
    incr += 2.0 * k3;
    incr += k4;
    z += (h / 6.0) * incr;
  }
  return traj;
}

Trajectory rk4(const SystemModel& sys, const Vec& z0, double t0, double tf,
               double h) {
  if (z0.size() != state_dim(sys))
    throw std::invalid_argument("rk4: initial state dimension mismatch");
  return rk4_core([&sys](double t, const Vec& z) { return rhs(sys, t, z); },
                  z0, t0, tf, h, system_tag(sys));
}

SettlingReport settling_time(const Trajectory& traj, const Vec& z_inf,
                             double fraction) {
  if (traj.size() == 0)
    throw std::invalid_argument("settling_time: empty trajectory");
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::invalid_argument("settling_time: fraction must be in (0,1)");

  SettlingReport rep;
  rep.c = fraction;
  rep.initial_dist = (traj.states.front() - z_inf).norm();
  const double threshold = fraction * rep.initial_dist;

  // Index of the last sample above threshold; settled from the next one.
  std::ptrdiff_t last_above = -1;
  for (std::size_t i = 0; i < traj.size(); ++i)
    if ((traj.states[i] - z_inf).norm() > threshold)
      last_above = static_cast<std::ptrdiff_t>(i);

  if (last_above + 1 >= static_cast<std::ptrdiff_t>(traj.size())) {
    rep.settled = false;
    return rep;
  }
  rep.settled = true;
  rep.t_settle = traj.times[static_cast<std::size_t>(last_above + 1)];
  rep.elapsed = rep.t_settle - traj.times.front();
  if (rep.elapsed > 0.0) {
    rep.nu_hat = -std::log(fraction) / rep.elapsed;
  } else {
    rep.nu_hat = std::numeric_limits<double>::infinity();
    rep.rate_unbounded = true;
  }
  return rep;
}

std::vector<LyapSample> lyapunov_series(const Trajectory& traj,
                                        const SystemModel& sys) {
  if (traj.system_tag != system_tag(sys))
    throw std::invalid_argument("lyapunov_series: trajectory tag '" +
                                traj.system_tag + "' does not match system '" +
                                system_tag(sys) + "'");
  std::vector<LyapSample> out;
  out.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double v = lyapunov_value(sys, traj.states[i]);
    const double vd =
        lyapunov_gradient(sys, traj.states[i]).dot(traj.derivs[i]);
    out.push_back({traj.times[i], v, vd});
  }
  return out;
}

std::vector<ScanEntry> decay_rate_scan(const SystemModel& sys,
                                       const std::vector<Vec>& z0_list,
                                       double fraction, double horizon,
                                       double h) {
  std::vector<ScanEntry> out;
  out.reserve(z0_list.size());
  const Vec z_inf = equilibrium(sys);
  for (const Vec& z0 : z0_list) {
    ScanEntry entry;
    entry.z0 = z0;
    try {
      Trajectory traj = rk4(sys, z0, 0.0, horizon, h);
      entry.report = settling_time(traj, z_inf, fraction);
    } catch (const std::exception& ex) {
      entry.error = ex.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace adaptlab
