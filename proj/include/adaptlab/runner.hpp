#pragma once

// Experiment orchestration behind the command-line front end: config
// parsing/validation with field-path diagnostics, the reproduction
// recipes, and file emission with a checksummed run manifest.
//
// Exit-code contract: 0 ok, 2 config/input error, 3 integration
// divergence, 4 negative verdict (a check or threshold failed).

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "adaptlab/excitation.hpp"
#include "adaptlab/integrate.hpp"
#include "adaptlab/regions.hpp"
#include "adaptlab/systems.hpp"

namespace adaptlab::runner {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDivergence = 3;
inline constexpr int kExitVerdict = 4;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  SystemModel system;
  double h = 1e-3;
  double horizon = 50.0;
  Vec z0;  // defaults to the system equilibrium
  double window_T = 1.0;
  double stride = 0.0;  // 0 -> 10 h
  double fraction = 0.05;
  std::filesystem::path out_dir = "out";
  std::string trajectory_csv = "trajectory.csv";
  nlohmann::json raw;
};

// Parses and validates; throws ConfigError naming the offending field
// path (e.g. "system.gamma: must be positive").
ExperimentConfig parse_config(const nlohmann::json& j);

nlohmann::json load_json_file(const std::filesystem::path& p);

// Applies "path.to.field=value" overrides (leading dashes stripped);
// values parse as JSON when possible, else as strings. Flags win over
// the config file.
void apply_overrides(nlohmann::json& j, const std::vector<std::string>& kvs);

// ADAPT_LAB_OUT beats everything else.
std::filesystem::path effective_out_dir(const std::filesystem::path& cli);

// The bundled demo parameters used by the reproduction recipes.
OrmScalar demo_orm();
CrmScalar demo_crm();
MracSystem demo_mrac_scalar();

struct ReproRecord {
  std::string label;
  bool defined = true;
  std::string error;  // set when !defined
  Vec z0;
  std::string region_at_t0;
  SettlingReport settling;
  double t_lower = 0.0;
  bool invariance_ok = false;
};

struct ReproReport {
  std::string which;
  double d_z = 0.0;
  std::vector<ReproRecord> records;
  // Certified settling triple (z4, z5, z6) against the reference values.
  std::vector<double> expected_ts;
  double ts_tolerance = 0.0;
  bool all_ts_within_tolerance = false;
  bool monotone_ts = false;
  bool all_invariant = false;
  bool all_t_lower_ok = false;
  bool passed = false;

  nlohmann::json to_json() const;
};

struct ReproduceOptions {
  double h = 1e-3;
  double horizon = 50.0;
  double fraction = 0.05;
  // When > 0, also emit the CRM z1 row at phi = (a+ell)/b - delta instead
  // of reporting it undefined.
  double crm_s1_delta = 0.0;
  int plot_decimation = 10;
};

ReproReport reproduce_orm(const ReproduceOptions& opt);
ReproReport reproduce_crm(const ReproduceOptions& opt);

struct Lemma1Sweep {
  std::vector<double> zetas;
  std::vector<Lemma1Report> reports;
  bool pmin_monotone = false;
  bool all_satisfied = false;
  bool passed = false;
  nlohmann::json to_json() const;
};

// Scalar closed loop with a constant command; zeta sweep with p = 2 p_min.
Lemma1Sweep lemma1_sweep(const std::vector<double>& zetas, double window_T,
                         double h);

struct StickingReportPair {
  StickingDiagnostic orm;
  StickingDiagnostic crm;
  bool orm_monotone = false;
  bool crm_monotone = false;
  bool orm_small_at_end = false;  // |phi_dot| < 1e-2 at the deepest probe
  bool passed = false;
  nlohmann::json to_json() const;
};

StickingReportPair sticking_report(const std::vector<double>& phi0_ladder);

// Subcommand entry points; diagnostics go to `diag`, outputs to the
// directory resolved from options/env.
int cmd_simulate(const nlohmann::json& config, std::ostream& diag);

struct PeOptions {
  std::filesystem::path csv;      // either a CSV...
  nlohmann::json config;          // ...or a system config
  double window_T = 1.0;
  double stride = 0.0;            // 0 -> span/100 snapped to the grid
  double threshold = 1e-8;
  double horizon = 20.0;          // sampling span for config sources
  double h = 1e-3;
  std::filesystem::path out_dir = "out";
};

int cmd_pe(const PeOptions& opt, std::ostream& diag);

struct RegionsOptions {
  std::string kind = "orm";
  std::filesystem::path out_dir = "out";
  int n_phi = 240;
  int n_e = 120;
};

int cmd_regions(const RegionsOptions& opt, std::ostream& diag);

struct ReproduceCliOptions {
  std::string which = "orm";  // orm | crm | lemma1 | sticking
  ReproduceOptions repro;
  std::filesystem::path out_dir = "out";
};

int cmd_reproduce(const ReproduceCliOptions& opt, std::ostream& diag);

}  // namespace adaptlab::runner
