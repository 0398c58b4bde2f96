#pragma once

// The four dynamical systems under study, as right-hand-side evaluators
// plus their parameters, reference signals, equilibria and Lyapunov
// functions. All values are immutable after construction and rhs is a
// pure function, so concurrent evaluation needs no coordination.

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "adaptlab/numerics.hpp"
#include "adaptlab/signal.hpp"

namespace adaptlab {

// Gradient-based identification of y = u^T theta; the state is the
// parameter error phi with phi_dot = -u u^T phi. theta_true is used
// only to reconstruct theta_hat = phi + theta for output.
struct AlgebraicIdSystem {
  VectorSignal input;  // u(t), one Signal per component
  Vec theta_true;

  AlgebraicIdSystem(VectorSignal u, Vec theta);
  std::size_t dim() const { return input.size(); }
};

// Vector-plant adaptive tracking loop with a scalar command, state
// z = [e; phi] (2n). The reference state x_m(t) is exogenous: it is the
// settled (steady-state) response of x_m_dot = A x_m + B r and is
// evaluated in closed form, so the loop stays a function of (t, z).
class MracSystem {
 public:
  MracSystem(Mat a, Vec b, Vec theta, Mat q, Signal reference);

  const Mat& a() const { return a_; }
  const Vec& b() const { return b_; }
  const Mat& q() const { return q_; }
  const Mat& p() const { return p_; }
  const Vec& c() const { return c_; }  // C = P B
  const Vec& theta_true() const { return theta_; }
  const Signal& reference() const { return ref_; }

  std::size_t dim() const { return b_.size(); }
  Vec reference_state(double t) const;  // x_m(t)
  double p_min_eig() const { return p_min_; }
  double q_min_eig() const { return q_min_; }

 private:
  Mat a_;
  Vec b_;
  Vec theta_;
  Mat q_;
  Mat p_;
  Vec c_;
  Signal ref_;
  double p_min_ = 0.0, q_min_ = 0.0;

  // Precomputed closed-form response pieces.
  struct Harmonic {
    double omega, phase;
    Vec in_phase, quadrature;  // U sin(w t + ph) + W cos(w t + ph)
  };
  Vec const_part_;
  std::vector<Harmonic> harmonics_;
  std::vector<double> seg_starts_;   // piecewise reference only
  std::vector<Vec> seg_states_;      // x_m at each segment start
  std::vector<Vec> seg_targets_;     // equilibrium of each segment
};

// Scalar tracking loop whose reference state is pinned at x_bar; the
// error coordinates z = [e, phi] close on themselves.
struct OrmScalar {
  double a, b, gamma, rbar;

  OrmScalar(double a, double b, double gamma, double rbar);
  double xbar() const { return -b * rbar / a; }
};

// Scalar loop with error feedback -ell*e in the reference model; the
// reference state is part of the state, z = [x_m, e, phi].
struct CrmScalar {
  double a, b, gamma, ell, rbar;

  CrmScalar(double a, double b, double gamma, double ell, double rbar);
  double xbar() const { return -b * rbar / a; }
};

using SystemModel =
    std::variant<AlgebraicIdSystem, MracSystem, OrmScalar, CrmScalar>;

std::size_t state_dim(const SystemModel& sys);
std::string system_tag(const SystemModel& sys);

// Exact right-hand side at (t, z). Throws on dimension mismatch.
Vec rhs(const SystemModel& sys, double t, const Vec& z);

Vec equilibrium(const SystemModel& sys);

// e^T P e + phi^T phi for the vector loop, e^2 + phi^2/gamma for the
// scalar loops (the CRM value ignores x_m), phi^T phi for identification.
double lyapunov_value(const SystemModel& sys, const Vec& z);

// Gradient of lyapunov_value in state coordinates.
Vec lyapunov_gradient(const SystemModel& sys, const Vec& z);

struct VdotPair {
  double actual;  // chain-rule derivative of V along rhs
  double bound;   // 2 a e^2 / 2 (a+ell) e^2 / -e^T Q e
};

VdotPair vdot_bound(const SystemModel& sys, const Vec& z);
VdotPair vdot_bound(const SystemModel& sys, double t, const Vec& z);

// Plain-text config round-trip. Field names:
// {"kind","a","b","gamma","ell","rbar","A","B","Q","theta","signal"}.
nlohmann::json to_json(const SystemModel& sys);
SystemModel system_from_json(const nlohmann::json& j);

nlohmann::json signal_to_json(const Signal& s);
Signal signal_from_json(const nlohmann::json& j);

}  // namespace adaptlab
