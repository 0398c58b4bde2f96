#include "adaptlab/excitation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "adaptlab/constants.hpp"

namespace adaptlab {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

SampledSignal sample_signal(const VectorSignal& sig, double t0, double tf,
                            double h) {
  require(h > 0.0 && tf > t0, "sample_signal: bad grid");
  const std::size_t steps =
      static_cast<std::size_t>(std::llround((tf - t0) / h));
  SampledSignal out;
  out.times.reserve(steps + 1);
  out.samples.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = t0 + static_cast<double>(i) * h;
    out.times.push_back(t);
    out.samples.push_back(eval(sig, t));
  }
  return out;
}

SampledSignal components(const Trajectory& traj, std::size_t first,
                         std::size_t count) {
  SampledSignal out;
  out.times = traj.times;
  out.samples.reserve(traj.size());
  for (const Vec& z : traj.states) {
    require(first + count <= z.size(), "components: index out of range");
    Vec y(count);
    for (std::size_t i = 0; i < count; ++i) y[i] = z[first + i];
    out.samples.push_back(std::move(y));
  }
  return out;
}

nlohmann::json PeSummary::to_json() const {
  nlohmann::json j;
  j["window_T"] = window_T;
  j["stride"] = stride;
  j["alpha_hat"] = alpha_hat;
  j["beta_hat"] = beta_hat;
  j["u_max_hat"] = u_max_hat;
  nlohmann::json ws = nlohmann::json::array();
  for (const auto& w : windows)
    ws.push_back(
        {{"t", w.t_start}, {"min_eig", w.min_eig}, {"max_eig", w.max_eig}});
  j["windows"] = ws;
  return j;
}

PeSummary pe_scan(const SampledSignal& sig, double window_T, double stride) {
  require(sig.size() >= 2, "pe_scan: need at least two samples");
  require(window_T > 0.0 && stride > 0.0,
          "pe_scan: window_T and stride must be positive");
  const double h = sig.step();
  const double span = sig.times.back() - sig.times.front();
  require(span + 1e-12 >= window_T,
          "pe_scan: signal span is shorter than one window");

  const std::size_t win_steps = static_cast<std::size_t>(
      std::max<long long>(1, std::llround(window_T / h)));
  const std::size_t stride_steps = static_cast<std::size_t>(
      std::max<long long>(1, std::llround(stride / h)));
  require(win_steps < sig.size(), "pe_scan: window longer than the span");

  const std::size_t dim = sig.samples.front().size();
  // Prefix trapezoid sums of the outer-product integrand.
  std::vector<Mat> prefix(sig.size(), Mat(dim, dim));
  std::vector<Mat> gram(sig.size());
  for (std::size_t i = 0; i < sig.size(); ++i)
    gram[i] = Mat::outer(sig.samples[i], sig.samples[i]);
  for (std::size_t i = 1; i < sig.size(); ++i) {
    const double w = 0.5 * (sig.times[i] - sig.times[i - 1]);
    prefix[i] = prefix[i - 1] + w * (gram[i] + gram[i - 1]);
  }

  PeSummary out;
  out.window_T = static_cast<double>(win_steps) * h;
  out.stride = static_cast<double>(stride_steps) * h;
  out.alpha_hat = std::numeric_limits<double>::infinity();
  out.beta_hat = 0.0;
  for (const Vec& y : sig.samples)
    out.u_max_hat = std::max(out.u_max_hat, y.norm());

  for (std::size_t start = 0; start + win_steps < sig.size();
       start += stride_steps) {
    Mat g = prefix[start + win_steps] - prefix[start];
    const EigBounds eb = sym_eig_bounds(g);
    out.windows.push_back({sig.times[start], eb.min_eig, eb.max_eig});
    out.alpha_hat = std::min(out.alpha_hat, eb.min_eig);
    out.beta_hat = std::max(out.beta_hat, eb.max_eig);
  }
  if (out.windows.empty())
    throw std::invalid_argument("pe_scan: no complete window fits the span");
  // The Gram integral is positive semidefinite up to quadrature rounding.
  out.alpha_hat = std::max(out.alpha_hat, 0.0);
  return out;
}

double rcon(double alpha, double T, double u_max) {
  require(alpha > 0.0, "rcon: alpha must be positive");
  require(T > 0.0, "rcon: T must be positive");
  require(u_max > 0.0, "rcon: u_max must be positive");
  require(alpha <= T * u_max * u_max * (1.0 + 1e-12),
          "rcon: alpha exceeds T*u_max^2 (inconsistent excitation data)");
  const double num = 2.0 * alpha * alpha / (u_max * u_max);
  const double den = T * std::pow(1.0 + u_max * u_max * T, 2);
  return 1.0 - num / den;
}

ContractionReport contraction_check(const AlgebraicIdSystem& sys,
                                    const Vec& phi0, double T, int n_windows,
                                    double h) {
  require(T > 0.0 && h > 0.0 && n_windows >= 1,
          "contraction_check: bad window setup");
  ContractionReport rep;
  if (phi0.norm() == 0.0) {
    rep.at_equilibrium = true;
    return rep;
  }

  const std::size_t win_steps = static_cast<std::size_t>(
    std::max<long long>(1, std::llround(T / h)));
  const double t_end =
      static_cast<double>(win_steps) * h * static_cast<double>(n_windows);

  const SampledSignal u = sample_signal(sys.input, 0.0, t_end, h);
  PeSummary pe = pe_scan(u, T, 10.0 * h);
  rep.alpha_hat = pe.alpha_hat;
  rep.u_max_hat = pe.u_max_hat;
  rep.input_pe = pe.alpha_hat > tol::pe_alpha_threshold;
  if (!rep.input_pe) return rep;  // bound vacuous; nothing to certify

  rep.r_con = rcon(pe.alpha_hat, pe.window_T, pe.u_max_hat);

  SystemModel model = sys;
  const Trajectory traj = rk4(model, phi0, 0.0, t_end, h);
  rep.all_within_bound = true;
  for (int k = 0; k < n_windows; ++k) {
    const double v0 =
        lyapunov_value(model, traj.states[static_cast<std::size_t>(k) * win_steps]);
    const double v1 = lyapunov_value(
        model, traj.states[static_cast<std::size_t>(k + 1) * win_steps]);
    const double ratio = v1 / v0;
    rep.windows.push_back({k, ratio});
    if (ratio > rep.r_con + tol::contraction_slack && rep.first_violation < 0) {
      rep.all_within_bound = false;
      rep.first_violation = k;
    }
  }
  return rep;
}

double pmin(double alpha, double T, double beta, double zeta,
            double p_min_eig, double q_min_eig) {
  require(alpha > 0.0 && T > 0.0 && beta > 0.0 && zeta > 0.0 &&
              p_min_eig > 0.0 && q_min_eig > 0.0,
          "pmin: all arguments must be positive");
  const double root = (std::sqrt(zeta / p_min_eig) + 2.0 * beta) *
                      std::sqrt(T * zeta / q_min_eig) / alpha;
  return root * root;
}

double alpha_prime(double p, double alpha, double T, double beta, double zeta,
                   double p_min_eig, double q_min_eig) {
  require(p > 0.0, "alpha_prime: p must be positive");
  require(alpha > 0.0 && T > 0.0 && beta > 0.0 && zeta > 0.0 &&
              p_min_eig > 0.0 && q_min_eig > 0.0,
          "alpha_prime: structural arguments must be positive");
  return p * alpha - (std::sqrt(zeta / p_min_eig) + 2.0 * beta) *
                         std::sqrt(p * T * zeta / q_min_eig);
}

Lemma1Report lemma1_empirical(const MracSystem& sys, const Vec& z0, double T,
                              double p, double horizon, double h) {
  require(T > 0.0 && p > 0.0 && h > 0.0, "lemma1_empirical: bad parameters");
  require(horizon > p * T,
          "lemma1_empirical: horizon must exceed the window length p*T");

  const std::size_t n = sys.dim();
  SystemModel model = sys;
  require(z0.size() == 2 * n, "lemma1_empirical: z0 must have dimension 2n");

  // Reference-state excitation at the requested window.
  SampledSignal xm;
  {
    const std::size_t steps =
        static_cast<std::size_t>(std::llround(horizon / h));
    xm.times.reserve(steps + 1);
    xm.samples.reserve(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
      const double t = static_cast<double>(i) * h;
      xm.times.push_back(t);
      xm.samples.push_back(sys.reference_state(t));
    }
  }
  const PeSummary xm_pe = pe_scan(xm, T, 10.0 * h);
  if (xm_pe.alpha_hat <= tol::pe_alpha_threshold)
    throw std::invalid_argument(
        "lemma1_empirical: x_m is not PE at this window (alpha_hat = " +
        std::to_string(xm_pe.alpha_hat) + ")");

  Lemma1Report rep;
  rep.bounds.alpha = xm_pe.alpha_hat;
  rep.bounds.T = xm_pe.window_T;
  rep.bounds.beta = xm_pe.u_max_hat;  // sup-norm estimate over the horizon
  rep.bounds.zeta = lyapunov_value(model, z0);
  rep.bounds.p_min_eig = sys.p_min_eig();
  rep.bounds.q_min_eig = sys.q_min_eig();
  rep.p = p;
  rep.p_min = rep.bounds.p_min();
  rep.alpha_prime_bound = rep.bounds.alpha_prime_at(p);
  rep.bound_vacuous = rep.alpha_prime_bound <= 0.0;

  // Closed loop; x = e + x_m.
  const Trajectory traj = rk4(model, z0, 0.0, horizon, h);
  SampledSignal x;
  x.times = traj.times;
  x.samples.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    Vec e(n);
    for (std::size_t k = 0; k < n; ++k) e[k] = traj.states[i][k];
    x.samples.push_back(e + xm.samples[i]);
  }
  const PeSummary x_pe = pe_scan(x, p * T, 10.0 * h);
  rep.gram_min_eig = x_pe.alpha_hat;
  rep.satisfied = rep.gram_min_eig >= rep.alpha_prime_bound - tol::gram_slack;
  return rep;
}

DetIdentityResult det_transition_identity(const AlgebraicIdSystem& sys,
                                          double t0, double tf, double h) {
  const std::size_t n = sys.dim();
  // Flatten the matrix flow P' = -u u^T P into an n^2 state.
  auto f = [&](double t, const Vec& z) {
    const Vec u = eval(sys.input, t);
    Vec dz(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += u[i] * u[k] * z[k * n + j];
        dz[i * n + j] = -s;
      }
    return dz;
  };
  Vec id(n * n);
  for (std::size_t i = 0; i < n; ++i) id[i * n + i] = 1.0;
  const Trajectory traj = rk4_core(f, id, t0, tf, h, "transition");

  Mat phi(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) phi(i, j) = traj.back_state()[i * n + j];

  std::vector<double> trace_samples;
  trace_samples.reserve(traj.size());
  for (double t : traj.times) {
    const Vec u = eval(sys.input, t);
    trace_samples.push_back(u.dot(u));
  }
  const double integral = trapezoid_integral(traj.times, trace_samples);
  return {determinant(phi), std::exp(-integral)};
}

}  // namespace adaptlab
