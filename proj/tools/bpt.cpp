// bpt — broadband pseudothermal light pipeline.
//
// Subcommands:
//   bpt run --config <file> --out <dir>   run one scenario from a JSON config
//   bpt table1 --out <dir>                run the three built-in scenarios
//   bpt validate --config <file>          check a config without running it
//
// Exit codes: 0 ok, 2 config error, 3 numeric failure, 4 I/O error.

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bpt/errors.hpp"
#include "bpt/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

int run_guarded(bool config_stage, const std::function<int()>& body) {
  try {
    return body();
  } catch (const bpt::ConfigError& e) {
    if (e.field().empty())
      std::cerr << "config error: " << e.what() << "\n";
    else
      std::cerr << "config error in field '" << e.field() << "': " << e.what() << "\n";
    return kExitConfig;
  } catch (const bpt::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitIo;
  } catch (const bpt::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const bpt::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << (config_stage ? "config error: " : "numeric failure: ") << e.what() << "\n";
    return config_stage ? kExitConfig : kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

void print_summary_line(const bpt::ScenarioResult& r) {
  std::cout << r.name << ": K=" << r.schmidt_k << " g2_int=" << r.g2_time_integrated
            << " n_bar=" << r.total_n_bar << " coherence_fwhm=" << r.coherence_fwhm_s << " s"
            << (r.stationary ? " [stationary]" : "") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Broadband pseudothermal light: Schmidt modes, photon statistics, and "
               "first/second-order coherence"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "Cap on concurrently running scenarios")
      ->envname("BPT_THREADS");

  std::string run_config, run_out;
  CLI::App* run = app.add_subcommand("run", "Run one scenario from a JSON config");
  run->fallthrough();  // let --threads appear after the subcommand
  run->add_option("--config", run_config, "Scenario config file")->required();
  run->add_option("--out", run_out, "Output directory")->required();

  std::string table_out;
  CLI::App* table1 = app.add_subcommand("table1", "Run the built-in shorter/longer/cw scenarios");
  table1->fallthrough();
  table1->add_option("--out", table_out, "Output directory")->required();

  std::string validate_config;
  CLI::App* validate = app.add_subcommand("validate", "Validate a config file");
  validate->fallthrough();
  validate->add_option("--config", validate_config, "Scenario config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  if (validate->parsed()) {
    return run_guarded(true, [&] {
      const bpt::ScenarioConfig c = bpt::load_scenario_config(validate_config);
      std::cout << "ok: scenario '" << c.name << "'\n";
      return kExitOk;
    });
  }
  if (run->parsed()) {
    bpt::ScenarioConfig config;
    const int rc = run_guarded(true, [&] {
      config = bpt::load_scenario_config(run_config);
      return kExitOk;
    });
    if (rc != kExitOk) return rc;
    return run_guarded(false, [&] {
      const bpt::ScenarioResult result = bpt::run_scenario(config, run_out);
      print_summary_line(result);
      std::cout << "wrote " << result.files.size() << " files to " << result.out_dir << "\n";
      return kExitOk;
    });
  }
  // table1
  return run_guarded(false, [&] {
    const bpt::Table1Result result = bpt::run_table1(table_out, threads);
    for (const bpt::ScenarioResult& r : result.scenarios) print_summary_line(r);
    std::cout << "comparison report: " << result.comparison_path << "\n";
    return kExitOk;
  });
}
