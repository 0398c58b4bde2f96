#include "adaptlab/systems.hpp"

#include <cmath>
#include <stdexcept>

#include "adaptlab/constants.hpp"

namespace adaptlab {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

Vec steady_state(const Mat& a, const Vec& b, double drive) {
  // Solves A x = -B * drive.
  Vec rhs_vec(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) rhs_vec[i] = -b[i] * drive;
  return solve_linear(a, rhs_vec);
}

}  // namespace

AlgebraicIdSystem::AlgebraicIdSystem(VectorSignal u, Vec theta)
    : input(std::move(u)), theta_true(std::move(theta)) {
  require(!input.empty(), "algebraic: input signal must have >= 1 component");
  require(theta_true.size() == input.size(),
          "theta: size must match the input dimension");
}

MracSystem::MracSystem(Mat a, Vec b, Vec theta, Mat q, Signal reference)
    : a_(std::move(a)),
      b_(std::move(b)),
      theta_(std::move(theta)),
      q_(std::move(q)),
      ref_(std::move(reference)) {
  require(a_.is_square(), "A: must be square");
  const std::size_t n = a_.rows();
  require(n >= 1, "A: must be at least 1x1");
  require(b_.size() == n, "B: size must match A");
  require(theta_.size() == n, "theta: size must match A");
  require(q_.rows() == n && q_.cols() == n, "Q: shape must match A");
  require(q_.asymmetry() <= tol::symmetry_rel, "Q: must be symmetric");
  require(sym_eig_bounds(q_).min_eig > 0.0, "Q: must be positive definite");

  p_ = solve_lyapunov(a_, q_);  // throws if A is not Hurwitz
  c_ = p_ * b_;
  p_min_ = sym_eig_bounds(p_).min_eig;
  q_min_ = sym_eig_bounds(q_).min_eig;

  // Closed-form x_m(t), started settled (no transient at t = 0).
  if (const auto* c = std::get_if<ConstantSignal>(&ref_.raw())) {
    const_part_ = steady_state(a_, b_, c->value);
  } else if (const auto* s = std::get_if<SinusoidSum>(&ref_.raw())) {
    double dc = 0.0;
    for (const auto& term : s->terms) {
      if (term.omega == 0.0) {
        dc += term.amplitude * std::sin(term.phase);
        continue;
      }
      // Particular solution U sin(wt+ph) + W cos(wt+ph) of
      // x' = A x + B amp sin(wt+ph):  (A^2 + w^2 I) W = -w B amp,
      // U = A W / w.
      Mat shifted = a_ * a_;
      for (std::size_t i = 0; i < n; ++i)
        shifted(i, i) += term.omega * term.omega;
      Vec rhs_vec(n);
      for (std::size_t i = 0; i < n; ++i)
        rhs_vec[i] = -term.omega * b_[i] * term.amplitude;
      Vec w = solve_linear(shifted, rhs_vec);
      Vec u = (1.0 / term.omega) * (a_ * w);
      harmonics_.push_back({term.omega, term.phase, u, w});
    }
    const_part_ = steady_state(a_, b_, dc);
  } else {
    const auto& pw = std::get<PiecewiseConstant>(ref_.raw());
    seg_starts_ = pw.breakpoints;
    seg_targets_.reserve(pw.values.size());
    for (double v : pw.values) seg_targets_.push_back(steady_state(a_, b_, v));
    seg_states_.push_back(seg_targets_.front());
    for (std::size_t i = 1; i < seg_starts_.size(); ++i) {
      const double dt = seg_starts_[i] - seg_starts_[i - 1];
      Mat e_at = expm(dt * a_);
      seg_states_.push_back(seg_targets_[i - 1] +
                            e_at * (seg_states_[i - 1] - seg_targets_[i - 1]));
    }
  }
}

Vec MracSystem::reference_state(double t) const {
  if (!seg_starts_.empty()) {
    std::size_t i = 0;
    while (i + 1 < seg_starts_.size() && t >= seg_starts_[i + 1]) ++i;
    if (t <= seg_starts_[i]) return seg_states_[i];
    Mat e_at = expm((t - seg_starts_[i]) * a_);
    return seg_targets_[i] + e_at * (seg_states_[i] - seg_targets_[i]);
  }
  Vec x = const_part_;
  for (const auto& h : harmonics_) {
    const double arg = h.omega * t + h.phase;
    x += std::sin(arg) * h.in_phase + std::cos(arg) * h.quadrature;
  }
  return x;
}

OrmScalar::OrmScalar(double a_in, double b_in, double gamma_in, double rbar_in)
    : a(a_in), b(b_in), gamma(gamma_in), rbar(rbar_in) {
  require(a < 0.0, "a: must be negative");
  require(b > 0.0, "b: must be positive");
  require(gamma > 0.0, "gamma: must be positive");
  require(rbar != 0.0, "rbar: must be nonzero");
  require(xbar() > 0.0, "rbar: must make xbar = -b*rbar/a positive");
}

CrmScalar::CrmScalar(double a_in, double b_in, double gamma_in, double ell_in,
                     double rbar_in)
    : a(a_in), b(b_in), gamma(gamma_in), ell(ell_in), rbar(rbar_in) {
  require(a < 0.0, "a: must be negative");
  require(b > 0.0, "b: must be positive");
  require(gamma > 0.0, "gamma: must be positive");
  require(ell < 0.0, "ell: must be negative");
  require(a + ell < 0.0, "ell: a + ell must be negative");
  require(rbar != 0.0, "rbar: must be nonzero");
  require(xbar() > 0.0, "rbar: must make xbar = -b*rbar/a positive");
}

std::size_t state_dim(const SystemModel& sys) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, AlgebraicIdSystem>) return s.dim();
        if constexpr (std::is_same_v<T, MracSystem>) return 2 * s.dim();
        if constexpr (std::is_same_v<T, OrmScalar>) return 2;
        if constexpr (std::is_same_v<T, CrmScalar>) return 3;
      },
      sys);
}

std::string system_tag(const SystemModel& sys) {
  const char* kind = std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        (void)s;
        if constexpr (std::is_same_v<T, AlgebraicIdSystem>) return "algebraic";
        if constexpr (std::is_same_v<T, MracSystem>) return "mrac";
        if constexpr (std::is_same_v<T, OrmScalar>) return "orm";
        if constexpr (std::is_same_v<T, CrmScalar>) return "crm";
      },
      sys);
  return std::string(kind) + "[" + std::to_string(state_dim(sys)) + "]";
}

namespace {

void check_dim(const SystemModel& sys, const Vec& z) {
  if (z.size() != state_dim(sys))
    throw std::invalid_argument("state dimension mismatch: expected " +
                                std::to_string(state_dim(sys)) + ", got " +
                                std::to_string(z.size()));
}

}  // namespace

Vec rhs(const SystemModel& sys, double t, const Vec& z) {
  check_dim(sys, z);
  if (const auto* alg = std::get_if<AlgebraicIdSystem>(&sys)) {
    const Vec u = eval(alg->input, t);
    const double proj = u.dot(z);
    Vec dz(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) dz[i] = -u[i] * proj;
    return dz;
  }
  if (const auto* mrac = std::get_if<MracSystem>(&sys)) {
    const std::size_t n = mrac->dim();
    const Vec xm = mrac->reference_state(t);
    Vec e(n), phi(n);
    for (std::size_t i = 0; i < n; ++i) {
      e[i] = z[i];
      phi[i] = z[n + i];
    }
    Vec x = e + xm;
    const double x_phi = x.dot(phi);
    const double c_e = mrac->c().dot(e);
    Vec de = mrac->a() * e;
    for (std::size_t i = 0; i < n; ++i) de[i] += mrac->b()[i] * x_phi;
    Vec dz(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      dz[i] = de[i];
      dz[n + i] = -x[i] * c_e;
    }
    return dz;
  }
  if (const auto* orm = std::get_if<OrmScalar>(&sys)) {
    const double e = z[0], phi = z[1];
    const double x = e + orm->xbar();
    return Vec{orm->a * e + orm->b * phi * x, -orm->gamma * e * x};
  }
  const auto& crm = std::get<CrmScalar>(sys);
  const double xm = z[0], e = z[1], phi = z[2];
  const double x = e + xm;
  return Vec{crm.a * xm + crm.b * crm.rbar - crm.ell * e,
             (crm.a + crm.ell) * e + crm.b * phi * x, -crm.gamma * e * x};
}

Vec equilibrium(const SystemModel& sys) {
  if (const auto* crm = std::get_if<CrmScalar>(&sys))
    return Vec{crm->xbar(), 0.0, 0.0};
  return Vec(state_dim(sys));
}

double lyapunov_value(const SystemModel& sys, const Vec& z) {
  check_dim(sys, z);
  if (std::holds_alternative<AlgebraicIdSystem>(sys)) return z.dot(z);
  if (const auto* mrac = std::get_if<MracSystem>(&sys)) {
    const std::size_t n = mrac->dim();
    Vec e(n), phi(n);
    for (std::size_t i = 0; i < n; ++i) {
      e[i] = z[i];
      phi[i] = z[n + i];
    }
    return e.dot(mrac->p() * e) + phi.dot(phi);
  }
  if (const auto* orm = std::get_if<OrmScalar>(&sys))
    return z[0] * z[0] + z[1] * z[1] / orm->gamma;
  const auto& crm = std::get<CrmScalar>(sys);
  return z[1] * z[1] + z[2] * z[2] / crm.gamma;
}

Vec lyapunov_gradient(const SystemModel& sys, const Vec& z) {
  check_dim(sys, z);
  if (std::holds_alternative<AlgebraicIdSystem>(sys)) return 2.0 * z;
  if (const auto* mrac = std::get_if<MracSystem>(&sys)) {
    const std::size_t n = mrac->dim();
    Vec e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = z[i];
    Vec pe = mrac->p() * e;
    Vec g(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = 2.0 * pe[i];
      g[n + i] = 2.0 * z[n + i];
    }
    return g;
  }
  if (const auto* orm = std::get_if<OrmScalar>(&sys))
    return Vec{2.0 * z[0], 2.0 * z[1] / orm->gamma};
  const auto& crm = std::get<CrmScalar>(sys);
  return Vec{0.0, 2.0 * z[1], 2.0 * z[2] / crm.gamma};
}

VdotPair vdot_bound(const SystemModel& sys, double t, const Vec& z) {
  const Vec dz = rhs(sys, t, z);
  const double actual = lyapunov_gradient(sys, z).dot(dz);
  double bound = 0.0;
  if (const auto* mrac = std::get_if<MracSystem>(&sys)) {
    const std::size_t n = mrac->dim();
    Vec e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = z[i];
    bound = -e.dot(mrac->q() * e);
  } else if (const auto* orm = std::get_if<OrmScalar>(&sys)) {
    bound = 2.0 * orm->a * z[0] * z[0];
  } else if (const auto* crm = std::get_if<CrmScalar>(&sys)) {
    bound = 2.0 * (crm->a + crm->ell) * z[1] * z[1];
  }
  return {actual, bound};
}

VdotPair vdot_bound(const SystemModel& sys, const Vec& z) {
  return vdot_bound(sys, 0.0, z);
}

// --- config serialization ---------------------------------------------

namespace {

using nlohmann::json;

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Vec vec_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument(field + ": expected a nonempty array");
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw std::invalid_argument(field + ": expected numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

Mat mat_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument(field + ": expected a nonempty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0)
    throw std::invalid_argument(field + ": rows must be nonempty arrays");
  Mat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw std::invalid_argument(field + ": ragged rows");
    for (std::size_t k = 0; k < cols; ++k) {
      if (!j[i][k].is_number())
        throw std::invalid_argument(field + ": expected numbers");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

double num_field(const json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_number())
    throw std::invalid_argument(field + ": missing or not a number");
  return j[field].get<double>();
}

}  // namespace

nlohmann::json signal_to_json(const Signal& s) {
  json j;
  if (const auto* c = std::get_if<ConstantSignal>(&s.raw())) {
    j["kind"] = "constant";
    j["value"] = c->value;
  } else if (const auto* ss = std::get_if<SinusoidSum>(&s.raw())) {
    j["kind"] = "sinusoid_sum";
    json terms = json::array();
    for (const auto& t : ss->terms)
      terms.push_back({{"amplitude", t.amplitude},
                       {"omega", t.omega},
                       {"phase", t.phase}});
    j["terms"] = terms;
  } else {
    const auto& pw = std::get<PiecewiseConstant>(s.raw());
    j["kind"] = "piecewise_constant";
    j["breakpoints"] = pw.breakpoints;
    j["values"] = pw.values;
  }
  return j;
}

Signal signal_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw std::invalid_argument("signal: missing kind");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "constant") return Signal::constant(num_field(j, "value"));
  if (kind == "sinusoid_sum") {
    if (!j.contains("terms") || !j["terms"].is_array())
      throw std::invalid_argument("signal.terms: expected an array");
    SinusoidSum s;
    for (const auto& t : j["terms"])
      s.terms.push_back({num_field(t, "amplitude"), num_field(t, "omega"),
                         t.contains("phase") ? num_field(t, "phase") : 0.0});
    return Signal(s);
  }
  if (kind == "piecewise_constant") {
    PiecewiseConstant pw;
    pw.breakpoints = j.value("breakpoints", std::vector<double>{});
    pw.values = j.value("values", std::vector<double>{});
    return Signal(pw);
  }
  throw std::invalid_argument("signal.kind: unknown kind '" + kind + "'");
}

nlohmann::json to_json(const SystemModel& sys) {
  json j;
  if (const auto* alg = std::get_if<AlgebraicIdSystem>(&sys)) {
    j["kind"] = "algebraic";
    j["theta"] = vec_to_json(alg->theta_true);
    json sig = json::array();
    for (const auto& comp : alg->input) sig.push_back(signal_to_json(comp));
    j["signal"] = sig;
  } else if (const auto* mrac = std::get_if<MracSystem>(&sys)) {
    j["kind"] = "mrac";
    j["A"] = mat_to_json(mrac->a());
    j["B"] = vec_to_json(mrac->b());
    j["Q"] = mat_to_json(mrac->q());
    j["theta"] = vec_to_json(mrac->theta_true());
    j["signal"] = signal_to_json(mrac->reference());
  } else if (const auto* orm = std::get_if<OrmScalar>(&sys)) {
    j["kind"] = "orm";
    j["a"] = orm->a;
    j["b"] = orm->b;
    j["gamma"] = orm->gamma;
    j["rbar"] = orm->rbar;
  } else {
    const auto& crm = std::get<CrmScalar>(sys);
    j["kind"] = "crm";
    j["a"] = crm.a;
    j["b"] = crm.b;
    j["gamma"] = crm.gamma;
    j["ell"] = crm.ell;
    j["rbar"] = crm.rbar;
  }
  return j;
}

SystemModel system_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind"))
    throw std::invalid_argument("kind: missing system kind");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "orm")
    return OrmScalar(num_field(j, "a"), num_field(j, "b"),
                     num_field(j, "gamma"), num_field(j, "rbar"));
  if (kind == "crm")
    return CrmScalar(num_field(j, "a"), num_field(j, "b"),
                     num_field(j, "gamma"), num_field(j, "ell"),
                     num_field(j, "rbar"));
  if (kind == "mrac") {
    if (!j.contains("signal"))
      throw std::invalid_argument("signal: missing reference signal");
    return MracSystem(mat_from_json(j.value("A", json()), "A"),
                      vec_from_json(j.value("B", json()), "B"),
                      vec_from_json(j.value("theta", json()), "theta"),
                      mat_from_json(j.value("Q", json()), "Q"),
                      signal_from_json(j["signal"]));
  }
  if (kind == "algebraic") {
    if (!j.contains("signal") || !j["signal"].is_array())
      throw std::invalid_argument("signal: expected an array of signals");
    VectorSignal u;
    for (const auto& comp : j["signal"]) u.push_back(signal_from_json(comp));
    return AlgebraicIdSystem(std::move(u),
                             vec_from_json(j.value("theta", json()), "theta"));
  }
  throw std::invalid_argument("kind: unknown system kind '" + kind + "'");
}

}  // namespace adaptlab
