// Command-line front end: simulate | pe | regions | reproduce.
// Flag overrides use config paths, e.g. --system.gamma=2; the env var
// ADAPT_LAB_OUT overrides every output directory.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "adaptlab/runner.hpp"

using namespace adaptlab;

int main(int argc, char** argv) {
  CLI::App app{"adaptive-system excitation and invariant-region lab"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "integrate a configured system");
  std::string sim_config;
  std::string sim_out;
  sim->add_option("-c,--config", sim_config, "JSON config file")->required();
  sim->add_option("-o,--out", sim_out, "output directory (default: config)");
  sim->allow_extras();  // --path.to.field=value overrides

  // pe
  auto* pe = app.add_subcommand("pe", "windowed excitation scan");
  runner::PeOptions pe_opt;
  std::string pe_csv, pe_config, pe_out = "out";
  pe->add_option("--csv", pe_csv, "signal CSV (t plus components)");
  pe->add_option("-c,--config", pe_config, "system config JSON");
  pe->add_option("-T,--window-T", pe_opt.window_T, "window length")->required();
  pe->add_option("--stride", pe_opt.stride, "window stride (default 10h)");
  pe->add_option("--threshold", pe_opt.threshold, "PE verdict threshold");
  pe->add_option("--horizon", pe_opt.horizon, "sampling span for configs");
  pe->add_option("--h", pe_opt.h, "sampling step for configs");
  pe->add_option("-o,--out", pe_out, "output directory");

  // regions
  auto* reg = app.add_subcommand("regions", "export region/surface grids");
  runner::RegionsOptions reg_opt;
  std::string reg_out = "out";
  reg->add_option("-k,--kind", reg_opt.kind, "orm or crm");
  reg->add_option("--n-phi", reg_opt.n_phi, "grid resolution in phi");
  reg->add_option("--n-e", reg_opt.n_e, "grid resolution in e");
  reg->add_option("-o,--out", reg_out, "output directory");

  // reproduce
  auto* rep = app.add_subcommand("reproduce", "run a bundled recipe");
  runner::ReproduceCliOptions rep_opt;
  std::string rep_out = "out";
  rep->add_option("which", rep_opt.which, "orm | crm | lemma1 | sticking")
      ->required();
  rep->add_option("--h", rep_opt.repro.h, "integration step");
  rep->add_option("--horizon", rep_opt.repro.horizon, "integration horizon");
  rep->add_option("--fraction", rep_opt.repro.fraction, "settling fraction");
  rep->add_option("--crm-s1-delta", rep_opt.repro.crm_s1_delta,
                  "emit the degenerate CRM z1 at phi offset by this");
  rep->add_option("--plot-decimation", rep_opt.repro.plot_decimation,
                  "keep every k-th sample in plot CSVs");
  rep->add_option("-o,--out", rep_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      nlohmann::json config = runner::load_json_file(sim_config);
      std::vector<std::string> overrides;
      for (const std::string& extra : sim->remaining())
        overrides.push_back(extra);
      runner::apply_overrides(config, overrides);
      if (!sim_out.empty()) config["output"]["dir"] = sim_out;
      return runner::cmd_simulate(config, std::cout);
    }
    if (pe->parsed()) {
      if (pe_csv.empty() == pe_config.empty()) {
        std::cout << "config error: pass exactly one of --csv or --config\n";
        return runner::kExitConfig;
      }
      pe_opt.csv = pe_csv;
      if (!pe_config.empty()) {
        nlohmann::json config = runner::load_json_file(pe_config);
        pe_opt.config = config.contains("system") ? config["system"] : config;
      }
      pe_opt.out_dir = pe_out;
      return runner::cmd_pe(pe_opt, std::cout);
    }
    if (reg->parsed()) {
      reg_opt.out_dir = reg_out;
      return runner::cmd_regions(reg_opt, std::cout);
    }
    rep_opt.out_dir = rep_out;
    return runner::cmd_reproduce(rep_opt, std::cout);
  } catch (const runner::ConfigError& ex) {
    std::cout << "config error: " << ex.what() << "\n";
    return runner::kExitConfig;
  } catch (const DivergenceError& ex) {
    std::cout << "integration diverged at t = " << ex.t << "\n";
    return runner::kExitDivergence;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}
