#include "adaptlab/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "adaptlab/constants.hpp"
#include "adaptlab/io.hpp"

namespace adaptlab::runner {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw ConfigError(what); }

double num_at(const json& j, const std::string& path, const std::string& key,
              double fallback, bool required = false) {
  if (!j.contains(key)) {
    if (required) fail(path + key + ": missing");
    return fallback;
  }
  if (!j[key].is_number()) fail(path + key + ": must be a number");
  return j[key].get<double>();
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

// Accumulates output files so the manifest can list every one of them
// with a content checksum.
class Emitter {
 public:
  explicit Emitter(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void emit(const std::string& rel, const std::string& contents) {
    write_file(dir_ / rel, contents);
    files_.push_back({{"path", rel},
                      {"bytes", contents.size()},
                      {"fnv1a64", fnv1a64_hex(contents)}});
  }

  void finish(const std::string& command, const json& params) {
    json manifest;
    manifest["command"] = command;
    manifest["params"] = params;
    manifest["files"] = files_;
    write_file(dir_ / "manifest.json", manifest.dump(2) + "\n");
  }

 private:
  std::filesystem::path dir_;
  json files_ = json::array();
};

}  // namespace

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) fail("config: expected a JSON object");
  if (!j.contains("system")) fail("system: missing");

  ExperimentConfig cfg;
  cfg.raw = j;
  try {
    cfg.system = system_from_json(j["system"]);
  } catch (const std::invalid_argument& ex) {
    fail(std::string("system.") + ex.what());
  }

  const json integ = j.value("integrator", json::object());
  if (!integ.is_object()) fail("integrator: expected an object");
  cfg.h = num_at(integ, "integrator.", "h", cfg.h);
  cfg.horizon = num_at(integ, "integrator.", "horizon", cfg.horizon);
  if (!(cfg.h > 0.0)) fail("integrator.h: must be positive");
  if (!(cfg.horizon > 0.0)) fail("integrator.horizon: must be positive");
  if (cfg.horizon / cfg.h > 1e8) fail("integrator.horizon: too many steps");
  if (integ.contains("z0")) {
    if (!integ["z0"].is_array()) fail("integrator.z0: expected an array");
    cfg.z0 = Vec(integ["z0"].size());
    for (std::size_t i = 0; i < cfg.z0.size(); ++i) {
      if (!integ["z0"][i].is_number()) fail("integrator.z0: expected numbers");
      cfg.z0[i] = integ["z0"][i].get<double>();
    }
    if (cfg.z0.size() != state_dim(cfg.system))
      fail("integrator.z0: dimension must be " +
           std::to_string(state_dim(cfg.system)));
  } else {
    cfg.z0 = equilibrium(cfg.system);
  }

  const json ana = j.value("analysis", json::object());
  if (!ana.is_object()) fail("analysis: expected an object");
  cfg.window_T = num_at(ana, "analysis.", "window_T", cfg.window_T);
  cfg.stride = num_at(ana, "analysis.", "stride", cfg.stride);
  cfg.fraction = num_at(ana, "analysis.", "fraction", cfg.fraction);
  if (!(cfg.window_T > 0.0)) fail("analysis.window_T: must be positive");
  if (cfg.stride < 0.0) fail("analysis.stride: must be >= 0");
  if (!(cfg.fraction > 0.0 && cfg.fraction < 1.0))
    fail("analysis.fraction: must lie in (0,1)");

  const json out = j.value("output", json::object());
  if (!out.is_object()) fail("output: expected an object");
  if (out.contains("dir")) cfg.out_dir = out["dir"].get<std::string>();
  if (out.contains("trajectory_csv"))
    cfg.trajectory_csv = out["trajectory_csv"].get<std::string>();
  return cfg;
}

json load_json_file(const std::filesystem::path& p) {
  std::ifstream f(p);
  if (!f) fail("config: cannot open " + p.string());
  try {
    return json::parse(f);
  } catch (const json::parse_error& ex) {
    fail("config: " + std::string(ex.what()));
  }
}

void apply_overrides(json& j, const std::vector<std::string>& kvs) {
  for (const std::string& kv : kvs) {
    std::string s = kv;
    while (!s.empty() && s.front() == '-') s.erase(s.begin());
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      fail("override '" + kv + "': expected path.to.field=value");
    const std::string path = s.substr(0, eq);
    const std::string value = s.substr(eq + 1);

    json* node = &j;
    std::size_t start = 0;
    while (true) {
      const auto dot = path.find('.', start);
      const std::string key = path.substr(
          start, dot == std::string::npos ? std::string::npos : dot - start);
      if (key.empty()) fail("override '" + kv + "': empty path segment");
      if (dot == std::string::npos) {
        json parsed = json::parse(value, nullptr, false);
        (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
        break;
      }
      node = &(*node)[key];
      if (!node->is_object() && !node->is_null()) *node = json::object();
      start = dot + 1;
    }
  }
}

std::filesystem::path effective_out_dir(const std::filesystem::path& cli) {
  if (const char* env = std::getenv("ADAPT_LAB_OUT"); env && *env)
    return env;
  return cli;
}

OrmScalar demo_orm() { return OrmScalar(-1.0, 1.0, 1.0, 3.0); }

CrmScalar demo_crm() { return CrmScalar(-1.0, 1.0, 1.0, -1.0, 3.0); }

MracSystem demo_mrac_scalar() {
  Mat a(1, 1);
  a(0, 0) = -1.0;
  Mat q(1, 1);
  q(0, 0) = 2.0;
  return MracSystem(a, Vec{1.0}, Vec{1.0}, q, Signal::constant(3.0));
}

namespace {

// Reference settling times for the bundled demo parameters.
const std::vector<double> kOrmExpectedTs = {5.37, 5.62, 8.19};
const std::vector<double> kCrmExpectedTs = {3.69, 5.85, 12.74};
constexpr double kOrmTsTol = 0.1;
constexpr double kCrmTsTol = 0.6;

struct LabeledIc {
  std::string label;
  bool defined = true;
  std::string error;
  Vec z0;
};

struct ReproData {
  ReproReport report;
  std::vector<std::pair<std::string, Trajectory>> trajectories;
  SystemModel model;
  Vec z_eq;
};

template <typename System>
ReproData run_repro(const System& sys, const std::vector<LabeledIc>& ics,
                    const std::vector<double>& expected_ts, double ts_tol,
                    const std::string& which, const ReproduceOptions& opt) {
  ReproData data;
  data.model = sys;
  data.z_eq = equilibrium(data.model);
  data.report.which = which;
  data.report.d_z = dz_bound(sys);
  data.report.expected_ts = expected_ts;
  data.report.ts_tolerance = ts_tol;

  for (const auto& ic : ics) {
    ReproRecord rec;
    rec.label = ic.label;
    rec.defined = ic.defined;
    rec.error = ic.error;
    if (!ic.defined) {
      data.report.records.push_back(std::move(rec));
      continue;
    }
    rec.z0 = ic.z0;
    rec.region_at_t0 = region_name(classify(sys, ic.z0));
    Trajectory traj = rk4(data.model, ic.z0, 0.0, opt.horizon, opt.h);
    rec.settling = settling_time(traj, data.z_eq, opt.fraction);
    rec.t_lower = t_lower_bound(ic.z0 - data.z_eq, opt.fraction,
                                data.report.d_z);
    const InvarianceReport inv = invariance_check(traj, sys);
    rec.invariance_ok = inv.entered_at.has_value() && !inv.violated_at;
    data.trajectories.emplace_back(ic.label, std::move(traj));
    data.report.records.push_back(std::move(rec));
  }

  // Certify the settling triple z4, z5, z6 against the reference values.
  std::vector<double> ts;
  for (const auto& rec : data.report.records)
    if (rec.defined && (rec.label == "z4" || rec.label == "z5" ||
                        rec.label == "z6"))
      ts.push_back(rec.settling.settled
                       ? rec.settling.elapsed
                       : std::numeric_limits<double>::quiet_NaN());
  data.report.all_ts_within_tolerance =
      ts.size() == expected_ts.size() &&
      [&] {
        for (std::size_t i = 0; i < ts.size(); ++i)
          if (!(std::fabs(ts[i] - expected_ts[i]) <= ts_tol)) return false;
        return true;
      }();
  data.report.monotone_ts = ts.size() >= 2 && [&] {
    for (std::size_t i = 1; i < ts.size(); ++i)
      if (!(ts[i] > ts[i - 1])) return false;
    return true;
  }();

  data.report.all_invariant = true;
  data.report.all_t_lower_ok = true;
  for (const auto& rec : data.report.records) {
    if (!rec.defined) continue;
    data.report.all_invariant =
        data.report.all_invariant && rec.invariance_ok;
    if (rec.settling.settled)
      data.report.all_t_lower_ok =
          data.report.all_t_lower_ok && rec.settling.elapsed >= rec.t_lower;
  }
  data.report.passed =
      data.report.all_ts_within_tolerance && data.report.monotone_ts &&
      data.report.all_invariant && data.report.all_t_lower_ok;
  return data;
}

std::vector<LabeledIc> orm_ics(const OrmScalar& sys) {
  const std::vector<double> phis = {-2.0, -4.0, -8.0};
  const std::vector<SurfaceId> cols = {SurfaceId::S1, SurfaceId::S5,
                                       SurfaceId::S2};
  std::vector<LabeledIc> ics;
  int idx = 1;
  for (SurfaceId col : cols)
    for (double phi : phis) {
      LabeledIc ic;
      ic.label = "z" + std::to_string(idx++);
      ic.z0 = surface_point(sys, col, phi);
      ics.push_back(std::move(ic));
    }
  return ics;
}

std::vector<LabeledIc> crm_ics(const CrmScalar& sys, double s1_delta) {
  const std::vector<double> phis = {-2.0, -4.0, -8.0};
  const std::vector<SurfaceId> cols = {SurfaceId::S1, SurfaceId::S5,
                                       SurfaceId::S2};
  std::vector<LabeledIc> ics;
  int idx = 1;
  for (SurfaceId col : cols)
    for (double phi : phis) {
      LabeledIc ic;
      ic.label = "z" + std::to_string(idx++);
      double use_phi = phi;
      if (col == SurfaceId::S1 && phi == (sys.a + sys.ell) / sys.b) {
        if (s1_delta > 0.0) {
          use_phi = phi - s1_delta;
        } else {
          ic.defined = false;
          ic.error = "undefined (surface degenerates at phi = (a+ell)/b)";
          ics.push_back(std::move(ic));
          continue;
        }
      }
      ic.z0 = surface_point(sys, col, use_phi);
      ics.push_back(std::move(ic));
    }
  return ics;
}

std::string timeseries_csv(const Trajectory& traj, bool crm, double xbar,
                           int decim) {
  std::ostringstream os;
  os << "t,e,phi,x,xm\n";
  char buf[192];
  for (std::size_t i = 0; i < traj.size();
       i += static_cast<std::size_t>(decim)) {
    const Vec& z = traj.states[i];
    const double xm = crm ? z[0] : xbar;
    const double e = crm ? z[1] : z[0];
    const double phi = crm ? z[2] : z[1];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  traj.times[i], e, phi, e + xm, xm);
    os << buf;
  }
  return os.str();
}

std::string phase_csv(const std::vector<std::pair<std::string, Trajectory>>& ts,
                      bool crm, int decim) {
  std::ostringstream os;
  os << (crm ? "label,t,e,phi,xm\n" : "label,t,e,phi\n");
  char buf[192];
  for (const auto& [label, traj] : ts)
    for (std::size_t i = 0; i < traj.size();
         i += static_cast<std::size_t>(decim)) {
      const Vec& z = traj.states[i];
      if (crm)
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g\n",
                      label.c_str(), traj.times[i], z[1], z[2], z[0]);
      else
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g\n", label.c_str(),
                      traj.times[i], z[0], z[1]);
      os << buf;
    }
  return os.str();
}

}  // namespace

json ReproReport::to_json() const {
  json j;
  j["which"] = which;
  j["d_z"] = d_z;
  j["expected_ts"] = expected_ts;
  j["ts_tolerance"] = ts_tolerance;
  json recs = json::array();
  for (const auto& rec : records) {
    json r;
    r["label"] = rec.label;
    if (!rec.defined) {
      r["error"] = rec.error;
    } else {
      r["z0"] = vec_json(rec.z0);
      r["region_at_t0"] = rec.region_at_t0;
      r["settled"] = rec.settling.settled;
      if (rec.settling.settled) {
        r["T_s"] = rec.settling.elapsed;
        r["nu_hat"] = rec.settling.nu_hat;
      } else {
        r["T_s"] = nullptr;
      }
      r["t_lower"] = rec.t_lower;
      r["invariance_ok"] = rec.invariance_ok;
    }
    recs.push_back(std::move(r));
  }
  j["records"] = recs;
  j["all_Ts_within_tolerance"] = all_ts_within_tolerance;
  j["monotone_Ts"] = monotone_ts;
  j["all_invariant"] = all_invariant;
  j["all_t_lower_ok"] = all_t_lower_ok;
  j["passed"] = passed;
  return j;
}

ReproReport reproduce_orm(const ReproduceOptions& opt) {
  const OrmScalar sys = demo_orm();
  return run_repro(sys, orm_ics(sys), kOrmExpectedTs, kOrmTsTol, "orm", opt)
      .report;
}

ReproReport reproduce_crm(const ReproduceOptions& opt) {
  const CrmScalar sys = demo_crm();
  return run_repro(sys, crm_ics(sys, opt.crm_s1_delta), kCrmExpectedTs,
                   kCrmTsTol, "crm", opt)
      .report;
}

json Lemma1Sweep::to_json() const {
  json j;
  j["zetas"] = zetas;
  json reps = json::array();
  for (const auto& r : reports) {
    reps.push_back({{"zeta", r.bounds.zeta},
                    {"alpha", r.bounds.alpha},
                    {"beta", r.bounds.beta},
                    {"T", r.bounds.T},
                    {"p_min", r.p_min},
                    {"p", r.p},
                    {"alpha_prime", r.alpha_prime_bound},
                    {"gram_min_eig", r.gram_min_eig},
                    {"satisfied", r.satisfied},
                    {"bound_vacuous", r.bound_vacuous}});
  }
  j["reports"] = reps;
  j["pmin_monotone"] = pmin_monotone;
  j["all_satisfied"] = all_satisfied;
  j["passed"] = passed;
  return j;
}

Lemma1Sweep lemma1_sweep(const std::vector<double>& zetas, double window_T,
                         double h) {
  const MracSystem sys = demo_mrac_scalar();
  Lemma1Sweep sweep;
  sweep.zetas = zetas;
  for (double zeta : zetas) {
    // V(z0) = e0^2 + phi0^2 with P = 1; split the level evenly.
    const double s = std::sqrt(zeta / 2.0);
    const Vec z0{s, s};

    // Pre-measure the reference excitation to size p = 2 p_min.
    SampledSignal xm;
    const double probe_span = std::max(4.0 * window_T, 8.0);
    const std::size_t steps =
        static_cast<std::size_t>(std::llround(probe_span / h));
    for (std::size_t i = 0; i <= steps; ++i) {
      xm.times.push_back(static_cast<double>(i) * h);
      xm.samples.push_back(sys.reference_state(xm.times.back()));
    }
    const PeSummary pe = pe_scan(xm, window_T, 10.0 * h);
    const double p_min = pmin(pe.alpha_hat, pe.window_T, pe.u_max_hat, zeta,
                              sys.p_min_eig(), sys.q_min_eig());
    const double p = 2.0 * p_min;
    const double horizon = p * pe.window_T * 1.1 + 5.0;
    sweep.reports.push_back(
        lemma1_empirical(sys, z0, window_T, p, horizon, h));
  }
  sweep.pmin_monotone = sweep.reports.size() >= 2;
  for (std::size_t i = 1; i < sweep.reports.size(); ++i)
    sweep.pmin_monotone = sweep.pmin_monotone &&
                          sweep.reports[i].p_min > sweep.reports[i - 1].p_min;
  sweep.all_satisfied = !sweep.reports.empty();
  for (const auto& r : sweep.reports)
    sweep.all_satisfied = sweep.all_satisfied && r.satisfied && !r.bound_vacuous;
  sweep.passed = sweep.pmin_monotone && sweep.all_satisfied;
  return sweep;
}

json StickingReportPair::to_json() const {
  auto diag_json = [](const StickingDiagnostic& d) {
    return json{{"phi0", d.phi0_values},
                {"phi_dot_abs", d.phi_dot_abs},
                {"delta", d.delta_values}};
  };
  json j;
  j["orm"] = diag_json(orm);
  j["crm"] = diag_json(crm);
  j["orm_monotone"] = orm_monotone;
  j["crm_monotone"] = crm_monotone;
  j["orm_small_at_end"] = orm_small_at_end;
  j["passed"] = passed;
  return j;
}

StickingReportPair sticking_report(const std::vector<double>& phi0_ladder) {
  StickingReportPair rep;
  rep.orm = sticking_scan(demo_orm(), phi0_ladder);
  rep.crm = sticking_scan(demo_crm(), phi0_ladder);
  auto monotone = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i] < v[i - 1])) return false;
    return v.size() >= 2;
  };
  rep.orm_monotone = monotone(rep.orm.phi_dot_abs);
  rep.crm_monotone = monotone(rep.crm.phi_dot_abs);
  rep.orm_small_at_end =
      !rep.orm.phi_dot_abs.empty() && rep.orm.phi_dot_abs.back() < 1e-2;
  rep.passed = rep.orm_monotone && rep.crm_monotone && rep.orm_small_at_end;
  return rep;
}

int cmd_simulate(const json& config, std::ostream& diag) {
  ExperimentConfig cfg;
  try {
    cfg = parse_config(config);
  } catch (const ConfigError& ex) {
    diag << "config error: " << ex.what() << "\n";
    return kExitConfig;
  }
  Trajectory traj;
  try {
    traj = rk4(cfg.system, cfg.z0, 0.0, cfg.horizon, cfg.h);
  } catch (const DivergenceError& ex) {
    diag << "integration diverged at t = " << ex.t << "\n";
    return kExitDivergence;
  }
  std::ostringstream csv;
  write_trajectory_csv(traj, csv);

  Emitter emitter(effective_out_dir(cfg.out_dir));
  emitter.emit(cfg.trajectory_csv, csv.str());
  json params = cfg.raw;
  params["effective"] = {{"h", cfg.h},
                         {"horizon", cfg.horizon},
                         {"z0", vec_json(cfg.z0)},
                         {"rows", traj.size()}};
  emitter.finish("simulate", params);
  diag << "wrote " << traj.size() << " samples\n";
  return kExitOk;
}

int cmd_pe(const PeOptions& opt, std::ostream& diag) {
  SampledSignal sig;
  try {
    if (!opt.csv.empty()) {
      std::ifstream f(opt.csv);
      if (!f) {
        diag << "config error: cannot open " << opt.csv.string() << "\n";
        return kExitConfig;
      }
      sig = read_signal_csv(f);
    } else {
      const SystemModel sys = system_from_json(opt.config);
      if (const auto* alg = std::get_if<AlgebraicIdSystem>(&sys)) {
        sig = sample_signal(alg->input, 0.0, opt.horizon, opt.h);
      } else if (const auto* mrac = std::get_if<MracSystem>(&sys)) {
        const std::size_t steps =
            static_cast<std::size_t>(std::llround(opt.horizon / opt.h));
        for (std::size_t i = 0; i <= steps; ++i) {
          sig.times.push_back(static_cast<double>(i) * opt.h);
          sig.samples.push_back(mrac->reference_state(sig.times.back()));
        }
      } else {
        // Scalar loops: the settled reference state is the constant xbar.
        const double xb = std::holds_alternative<OrmScalar>(sys)
                              ? std::get<OrmScalar>(sys).xbar()
                              : std::get<CrmScalar>(sys).xbar();
        sig = sample_signal({Signal::constant(xb)}, 0.0, opt.horizon, opt.h);
      }
    }
  } catch (const CsvParseError& ex) {
    diag << "input error: " << ex.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& ex) {
    diag << "config error: " << ex.what() << "\n";
    return kExitConfig;
  }

  PeSummary summary;
  try {
    const double stride =
        opt.stride > 0.0 ? opt.stride : 10.0 * sig.step();
    summary = pe_scan(sig, opt.window_T, stride);
  } catch (const std::invalid_argument& ex) {
    diag << "config error: " << ex.what() << "\n";
    return kExitConfig;
  }

  Emitter emitter(effective_out_dir(opt.out_dir));
  emitter.emit("pe_report.json", summary.to_json().dump(2) + "\n");
  emitter.finish("pe", {{"window_T", opt.window_T},
                        {"threshold", opt.threshold},
                        {"samples", sig.size()}});
  diag << "alpha_hat = " << summary.alpha_hat << "\n";
  return summary.alpha_hat > opt.threshold ? kExitOk : kExitVerdict;
}

namespace {

struct SurfaceSweep {
  SurfaceId id;
  const char* name;
  double lo, hi;
};

template <typename System>
std::string surfaces_csv(const System& sys,
                         const std::vector<SurfaceSweep>& sweeps, bool crm) {
  std::ostringstream os;
  os << (crm ? "surface,phi,e,xm\n" : "surface,phi,e\n");
  char buf[128];
  for (const auto& sweep : sweeps) {
    const int n = 200;
    for (int i = 0; i < n; ++i) {
      const double phi =
          sweep.lo + (sweep.hi - sweep.lo) * static_cast<double>(i) / (n - 1);
      const Vec z = surface_point(sys, sweep.id, phi);
      if (crm)
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g\n", sweep.name,
                      phi, z[1], z[0]);
      else
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g\n", sweep.name, phi,
                      z[0]);
      os << buf;
    }
  }
  return os.str();
}

std::string surfaces_csv(const OrmScalar& sys) {
  const double eps = 1e-3;
  return surfaces_csv(sys,
                      {{SurfaceId::S1, "S1", -12.0, 1.0},
                       {SurfaceId::S2, "S2", -12.0, sys.a / sys.b - eps},
                       {SurfaceId::S3, "S3", sys.a / sys.b, -eps},
                       {SurfaceId::S5, "S5", -12.0, -eps}},
                      false);
}

std::string surfaces_csv(const CrmScalar& sys) {
  const double eps = 1e-3;
  const double alb = (sys.a + sys.ell) / sys.b;
  return surfaces_csv(sys,
                      {{SurfaceId::S1, "S1", -12.0, alb - eps},
                       {SurfaceId::S2, "S2", -12.0, -eps},
                       {SurfaceId::S3, "S3", alb, -eps},
                       {SurfaceId::S5, "S5", -12.0, -eps}},
                      true);
}

}  // namespace

int cmd_regions(const RegionsOptions& opt, std::ostream& diag) {
  if (opt.kind != "orm" && opt.kind != "crm") {
    diag << "config error: kind: must be 'orm' or 'crm'\n";
    return kExitConfig;
  }
  Emitter emitter(effective_out_dir(opt.out_dir));
  json params{{"kind", opt.kind}};
  if (opt.kind == "orm") {
    const OrmScalar sys = demo_orm();
    GridSpec grid = default_grid(sys);
    grid.n_phi = opt.n_phi;
    grid.n_e = opt.n_e;
    std::ostringstream os;
    region_grid_csv(sys, grid, os);
    emitter.emit("region_grid.csv", os.str());
    emitter.emit("surfaces.csv", surfaces_csv(sys));
    params["d_z"] = dz_bound(sys);
  } else {
    const CrmScalar sys = demo_crm();
    GridSpec grid = default_grid(sys);
    grid.n_phi = opt.n_phi;
    grid.n_e = opt.n_e;
    std::ostringstream os;
    region_grid_csv(sys, grid, os);
    emitter.emit("region_grid.csv", os.str());
    emitter.emit("surfaces.csv", surfaces_csv(sys));
    params["d_z"] = dz_bound(sys);
  }
  emitter.finish("regions", params);
  diag << "wrote region grid for " << opt.kind << "\n";
  return kExitOk;
}

int cmd_reproduce(const ReproduceCliOptions& opt, std::ostream& diag) {
  Emitter emitter(effective_out_dir(opt.out_dir));
  json params{{"which", opt.which},
              {"h", opt.repro.h},
              {"horizon", opt.repro.horizon},
              {"fraction", opt.repro.fraction}};
  bool passed = false;

  try {
    if (opt.which == "orm" || opt.which == "crm") {
      ReproData data;
      if (opt.which == "orm") {
        const OrmScalar sys = demo_orm();
        data = run_repro(sys, orm_ics(sys), kOrmExpectedTs, kOrmTsTol, "orm",
                         opt.repro);
        for (const auto& [label, traj] : data.trajectories)
          emitter.emit("orm_" + label + "_timeseries.csv",
                       timeseries_csv(traj, false, sys.xbar(),
                                      opt.repro.plot_decimation));
        emitter.emit("orm_phase.csv",
                     phase_csv(data.trajectories, false,
                               opt.repro.plot_decimation));
        emitter.emit("orm_report.json", data.report.to_json().dump(2) + "\n");
      } else {
        const CrmScalar sys = demo_crm();
        data = run_repro(sys, crm_ics(sys, opt.repro.crm_s1_delta),
                         kCrmExpectedTs, kCrmTsTol, "crm", opt.repro);
        for (const auto& [label, traj] : data.trajectories)
          emitter.emit("crm_" + label + "_timeseries.csv",
                       timeseries_csv(traj, true, sys.xbar(),
                                      opt.repro.plot_decimation));
        emitter.emit("crm_phase.csv",
                     phase_csv(data.trajectories, true,
                               opt.repro.plot_decimation));
        emitter.emit("crm_report.json", data.report.to_json().dump(2) + "\n");
      }
      passed = data.report.passed;
      for (const auto& rec : data.report.records)
        if (!rec.defined) diag << rec.label << ": " << rec.error << "\n";
      diag << opt.which << " reproduction " << (passed ? "passed" : "FAILED")
           << "\n";
    } else if (opt.which == "lemma1") {
      const Lemma1Sweep sweep = lemma1_sweep({1.0, 10.0, 100.0}, 1.0,
                                             opt.repro.h);
      emitter.emit("lemma1_report.json", sweep.to_json().dump(2) + "\n");
      passed = sweep.passed;
      diag << "lemma1 sweep " << (passed ? "passed" : "FAILED") << "\n";
    } else if (opt.which == "sticking") {
      const StickingReportPair rep = sticking_report(
          {-10.0, -20.0, -50.0, -100.0, -200.0, -500.0, -1000.0});
      emitter.emit("sticking_report.json", rep.to_json().dump(2) + "\n");
      passed = rep.passed;
      diag << "sticking scan " << (passed ? "passed" : "FAILED") << "\n";
    } else {
      diag << "config error: which: must be orm, crm, lemma1 or sticking\n";
      return kExitConfig;
    }
  } catch (const DivergenceError& ex) {
    diag << "integration diverged at t = " << ex.t << "\n";
    return kExitDivergence;
  }

  emitter.finish("reproduce", params);
  return passed ? kExitOk : kExitVerdict;
}

}  // namespace adaptlab::runner
