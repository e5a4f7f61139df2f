// kerrslab: blow-up simulations and bound checks for Kerr slabs.
//
//   kerrslab simulate     --config run.json [--out report.json] [--trajectory traj.csv]
//   kerrslab sweep        --config sweep.json [--out table.csv] [--workers N]
//   kerrslab verify-bound --config run.json
//   kerrslab analytic     --config sec.json [--out samples.csv]
//   kerrslab check        --config run.json
//
// Exit codes: 0 success (including runs that do not blow up), 2 invalid
// input, 3 bound inapplicable, 1 internal error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "kerr/error.hpp"
#include "kerr/harness.hpp"

namespace {

using kerr::harness::json;

void emit(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path);
  if (!out) throw std::runtime_error("cannot write '" + *path + "'");
  out << text;
}

void write_trajectory(const std::optional<std::string>& path, const kerr::Trajectory& traj) {
  if (!path) return;
  std::ofstream out(*path);
  if (!out) throw std::runtime_error("cannot write '" + *path + "'");
  kerr::write_trajectory_csv(out, traj);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kerr slab blow-up laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_path;
  std::optional<std::string> trajectory_path;
  int workers = 1;
  std::optional<double> tol;
  bool quiet = false;
  bool timing = false;

  for (const char* name : {"simulate", "sweep", "verify-bound", "analytic", "check"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "config file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "output path (default: stdout)");
    sub->add_option("--trajectory", trajectory_path, "trajectory CSV path");
    sub->add_option("--workers", workers, "sweep worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--tol", tol, "relative tolerance override")->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", quiet, "suppress the summary on stderr");
    sub->add_flag("--timing", timing, "include wall time in the report");
  }
  CLI11_PARSE(app, argc, argv);

  try {
    const std::string cmd = app.get_subcommands().front()->get_name();
    kerr::harness::RunConfig cfg =
        kerr::harness::load_config(config_path, kerr::harness::parse_mode(cmd));
    if (tol) cfg.integrator.rel_tol = *tol;
    if (!out_path) out_path = cfg.output.report;
    if (!trajectory_path) trajectory_path = cfg.output.trajectory;

    switch (cfg.mode) {
      case kerr::harness::Mode::Simulate: {
        const auto res = kerr::harness::cmd_simulate(cfg, timing);
        emit(out_path, res.report.dump(2) + "\n");
        write_trajectory(trajectory_path, res.blowup.trajectory);
        if (!quiet) {
          std::cerr << "blew_up=" << std::boolalpha << res.blowup.blew_up
                    << " reason=" << kerr::to_string(res.blowup.reason);
          if (res.blowup.z_star_estimate) std::cerr << " z_star=" << *res.blowup.z_star_estimate;
          std::cerr << '\n';
        }
        break;
      }
      case kerr::harness::Mode::Sweep:
        emit(out_path, kerr::harness::cmd_sweep(cfg, workers));
        break;
      case kerr::harness::Mode::VerifyBound: {
        const auto res = kerr::harness::cmd_verify_bound(cfg);
        emit(out_path, res.report.dump(2) + "\n");
        if (res.blowup) write_trajectory(trajectory_path, res.blowup->trajectory);
        if (!quiet)
          std::cerr << "ordering " << (res.ordering_passed ? "passed" : "FAILED") << '\n';
        break;
      }
      case kerr::harness::Mode::Analytic: {
        const auto res = kerr::harness::cmd_analytic(cfg);
        std::ostringstream summary;
        for (const auto& [key, value] : res.summary.items()) summary << key << " = " << value << '\n';
        if (out_path) {
          std::cout << summary.str();
          emit(out_path, res.csv);
        } else {
          std::cout << summary.str() << '\n' << res.csv;
        }
        break;
      }
      case kerr::harness::Mode::Check:
        emit(out_path, kerr::harness::cmd_check(cfg).dump(2) + "\n");
        break;
    }
  } catch (const kerr::harness::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const kerr::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const kerr::InapplicableBound& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
