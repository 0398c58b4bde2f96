#pragma once

// Windowed Gram-matrix excitation analysis, the identification
// convergence rate r_con, and the weak-PE bounds p_min / alpha'.

#include <string>
#include <vector>

#include "json.hpp"

#include "adaptlab/integrate.hpp"
#include "adaptlab/numerics.hpp"
#include "adaptlab/signal.hpp"
#include "adaptlab/systems.hpp"

namespace adaptlab {

// A vector signal sampled on a uniform grid.
struct SampledSignal {
  std::vector<double> times;
  std::vector<Vec> samples;

  std::size_t size() const { return times.size(); }
  double step() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

SampledSignal sample_signal(const VectorSignal& sig, double t0, double tf,
                            double h);
// Pull selected state components out of a trajectory as a signal.
SampledSignal components(const Trajectory& traj, std::size_t first,
                         std::size_t count);

struct WindowStat {
  double t_start;
  double min_eig;
  double max_eig;
};

struct PeSummary {
  double window_T = 0.0;  // effective (grid-snapped) window length
  double stride = 0.0;    // effective stride
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  double u_max_hat = 0.0;
  std::vector<WindowStat> windows;

  nlohmann::json to_json() const;
};

// Trapezoid Gram integral over every window start on the stride grid;
// alpha_hat is the min over windows of the smallest Gram eigenvalue.
// Implemented with prefix sums so the scan is O(samples + windows).
PeSummary pe_scan(const SampledSignal& sig, double window_T, double stride);

// 1 - (2 alpha^2 / u_max^2) / (T (1 + u_max^2 T)^2). Always < 1; a value
// <= 0 means the contraction claim V(t+T) <= r_con V(t) is vacuous.
double rcon(double alpha, double T, double u_max);

struct ContractionWindow {
  int k;
  double ratio;  // V((k+1)T) / V(kT)
};

struct ContractionReport {
  bool at_equilibrium = false;
  bool input_pe = false;
  double alpha_hat = 0.0;
  double u_max_hat = 0.0;
  double r_con = 1.0;
  std::vector<ContractionWindow> windows;
  bool all_within_bound = false;
  int first_violation = -1;
};

// Integrates the identification error over n_windows windows of length T
// and checks every per-window Lyapunov ratio against r_con computed from
// the measured excitation of u.
ContractionReport contraction_check(const AlgebraicIdSystem& sys,
                                    const Vec& phi0, double T, int n_windows,
                                    double h);

// ((sqrt(zeta/P_min) + 2 beta) sqrt(T zeta / Q_min) / alpha)^2
double pmin(double alpha, double T, double beta, double zeta,
            double p_min_eig, double q_min_eig);

// p alpha - (sqrt(zeta/P_min) + 2 beta) sqrt(p T zeta / Q_min);
// positive exactly when p > pmin(...).
double alpha_prime(double p, double alpha, double T, double beta, double zeta,
                   double p_min_eig, double q_min_eig);

// Bundle of the weak-PE constants for one level set.
struct Lemma1Bounds {
  double alpha = 0.0;
  double T = 0.0;
  double beta = 0.0;
  double zeta = 0.0;
  double p_min_eig = 0.0;
  double q_min_eig = 0.0;

  double p_min() const {
    return pmin(alpha, T, beta, zeta, p_min_eig, q_min_eig);
  }
  double alpha_prime_at(double p) const {
    return alpha_prime(p, alpha, T, beta, zeta, p_min_eig, q_min_eig);
  }
};

struct Lemma1Report {
  Lemma1Bounds bounds;
  double p = 0.0;
  double p_min = 0.0;
  double alpha_prime_bound = 0.0;
  double gram_min_eig = 0.0;  // worst window of the plant state x
  bool satisfied = false;
  bool bound_vacuous = false;  // alpha' <= 0 (p below p_min)
};

// Integrates the closed loop from z0, reconstructs x = e + x_m, scans
// all pT windows of its Gram integral and compares the worst
// min-eigenvalue against alpha'. Requires x_m to be PE at window T;
// beta is the max sample norm of x_m and zeta = V(z0).
Lemma1Report lemma1_empirical(const MracSystem& sys, const Vec& z0, double T,
                              double p, double horizon, double h);

struct DetIdentityResult {
  double det_phi;
  double exp_neg_int_trace;
};

// Integrates the matrix flow P' = -u u^T P from the identity and compares
// det P(tf) with exp(-integral of trace(u u^T)).
DetIdentityResult det_transition_identity(const AlgebraicIdSystem& sys,
                                          double t0, double tf, double h);

}  // namespace adaptlab
