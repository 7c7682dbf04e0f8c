#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "bpt/heatmap.hpp"
#include "bpt/scenario.hpp"

using namespace bpt;
using Catch::Approx;
namespace fs = std::filesystem;

namespace {

nlohmann::json base_config() {
  return nlohmann::json{{"version", 1},
                        {"name", "shorter"},
                        {"pump", "pulsed"},
                        {"sigma_p", 2.0e12},
                        {"sigma_c", 2.0e12}};
}

std::string fresh_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir.string();
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("config parsing applies documented defaults") {
  const ScenarioConfig c = parse_scenario_config(base_config());
  REQUIRE(c.name == "shorter");
  REQUIRE(c.pump == PumpKind::pulsed);
  REQUIRE(c.amplitude == 0.1);
  REQUIRE(c.grid.n == 256);
  REQUIRE(c.grid.span == 0.0);  // resolved to 12*max(sigma) at run time
  REQUIRE(c.outputs == ScenarioConfig::all_outputs());
}

TEST_CASE("config validation names the offending field") {
  SECTION("cw pump forbids sigma_p") {
    nlohmann::json j = base_config();
    j["pump"] = "cw";
    try {
      parse_scenario_config(j);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      REQUIRE(e.field() == "sigma_p");
    }
  }
  SECTION("pulsed pump requires sigma_p") {
    nlohmann::json j = base_config();
    j.erase("sigma_p");
    try {
      parse_scenario_config(j);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      REQUIRE(e.field() == "sigma_p");
    }
  }
  SECTION("unknown fields are rejected") {
    nlohmann::json j = base_config();
    j["sigmap"] = 1.0;
    try {
      parse_scenario_config(j);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      REQUIRE(e.field() == "sigmap");
    }
  }
  SECTION("unknown grid fields are rejected") {
    nlohmann::json j = base_config();
    j["grid"] = {{"n", 64}, {"width", 2.0}};
    REQUIRE_THROWS_AS(parse_scenario_config(j), ConfigError);
  }
  SECTION("grid size must be a power of two in range") {
    for (const int n : {100, 16, 8192, 0}) {
      nlohmann::json j = base_config();
      j["grid"] = {{"n", n}};
      try {
        parse_scenario_config(j);
        FAIL("expected ConfigError");
      } catch (const ConfigError& e) {
        REQUIRE(e.field() == "grid.n");
      }
    }
  }
  SECTION("version is mandatory and fixed") {
    nlohmann::json j = base_config();
    j["version"] = 2;
    REQUIRE_THROWS_AS(parse_scenario_config(j), ConfigError);
    j.erase("version");
    REQUIRE_THROWS_AS(parse_scenario_config(j), ConfigError);
  }
  SECTION("unknown outputs are rejected") {
    nlohmann::json j = base_config();
    j["outputs"] = {"jsa", "spectra"};
    try {
      parse_scenario_config(j);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      REQUIRE(e.field() == "outputs");
    }
  }
  SECTION("non-positive physics parameters are rejected") {
    nlohmann::json j = base_config();
    j["sigma_c"] = -1.0e12;
    REQUIRE_THROWS_AS(parse_scenario_config(j), ConfigError);
    j = base_config();
    j["amplitude"] = 0.0;
    REQUIRE_THROWS_AS(parse_scenario_config(j), ConfigError);
  }
}

TEST_CASE("separable scenario reports unit schmidt number and flat g2") {
  ScenarioConfig c = parse_scenario_config(base_config());
  c.shots = 100;
  const std::string dir = fresh_dir("bpt_test_shorter");
  const ScenarioResult r = run_scenario(c, dir);
  REQUIRE(r.schmidt_k == Approx(1.0).margin(1e-4));
  REQUIRE(r.g2_time_integrated == Approx(2.0).margin(1e-4));
  REQUIRE_FALSE(r.stationary);

  // Manifest lists every written file exactly once, with matching checksums.
  const nlohmann::json manifest =
      nlohmann::json::parse(read_bytes(fs::path(dir) / "manifest.json"));
  REQUIRE(manifest["files"].size() == r.files.size());
  std::set<std::string> listed;
  for (const auto& f : manifest["files"]) {
    const std::string name = f["name"].get<std::string>();
    REQUIRE(listed.insert(name).second);  // unique
    const std::string bytes = read_bytes(fs::path(dir) / name);
    REQUIRE(f["bytes"].get<std::uint64_t>() == bytes.size());
    REQUIRE(f["fnv1a64"].get<std::string>() ==
            scenario_detail::to_hex(scenario_detail::fnv1a64(bytes)));
  }
  for (const char* name : {"jsa.csv", "jsa.ppm", "schmidt.csv", "spectrum.csv", "g1_diag.csv",
                           "g1_normalized.csv", "g1_abs.ppm", "g2_normalized.csv", "g2.ppm",
                           "samples.csv", "summary.json"})
    REQUIRE(listed.count(name) == 1);

  // Summary JSON numbers survive a parse round trip without precision loss.
  const nlohmann::json summary =
      nlohmann::json::parse(read_bytes(fs::path(dir) / "summary.json"));
  REQUIRE(summary["K"].get<double>() == r.schmidt_k);
  REQUIRE(summary["g2_time_integrated"].get<double>() == r.g2_time_integrated);
  REQUIRE(summary["total_n_bar"].get<double>() == r.total_n_bar);
  REQUIRE(summary["coherence_fwhm_s"].get<double>() == r.coherence_fwhm_s);
  REQUIRE(summary["stationary"].get<bool>() == r.stationary);
  REQUIRE(summary["schmidt_coefficients"].size() ==
          static_cast<std::size_t>(r.schmidt_coefficients.size()));
  REQUIRE(summary["schmidt_coefficients"][0].get<double>() == r.schmidt_coefficients[0]);
}

TEST_CASE("cw scenario is flagged stationary") {
  nlohmann::json j = base_config();
  j["name"] = "cw";
  j["pump"] = "cw";
  j.erase("sigma_p");
  j["sigma_c"] = 3.0e12;
  j["outputs"] = {"summary"};
  ScenarioConfig c = parse_scenario_config(j);
  const ScenarioResult r = run_scenario(c, fresh_dir("bpt_test_cw"));
  REQUIRE(r.stationary);
  REQUIRE(r.schmidt_k > 2.0);
  REQUIRE(r.files.size() == 1);
  REQUIRE(r.files[0].name == "summary.json");
}

TEST_CASE("identical configs produce byte-identical outputs") {
  nlohmann::json j = base_config();
  j["grid"] = {{"n", 64}};
  j["shots"] = 200;
  const ScenarioConfig c = parse_scenario_config(j);
  const std::string dir1 = fresh_dir("bpt_test_det1");
  const std::string dir2 = fresh_dir("bpt_test_det2");
  const ScenarioResult r1 = run_scenario(c, dir1);
  const ScenarioResult r2 = run_scenario(c, dir2);
  REQUIRE(r1.files.size() == r2.files.size());
  for (std::size_t i = 0; i < r1.files.size(); ++i) {
    REQUIRE(r1.files[i].name == r2.files[i].name);
    REQUIRE(r1.files[i].fnv1a64 == r2.files[i].fnv1a64);
    REQUIRE(read_bytes(fs::path(dir1) / r1.files[i].name) ==
            read_bytes(fs::path(dir2) / r2.files[i].name));
  }
}

TEST_CASE("table1 writes three scenario directories and a comparison") {
  const std::string dir = fresh_dir("bpt_test_table1");
  const Table1Result t = run_table1(dir, 2);
  REQUIRE(t.scenarios.size() == 3);
  for (const char* name : {"shorter", "longer", "cw"})
    REQUIRE(fs::exists(fs::path(dir) / name / "manifest.json"));
  const nlohmann::json cmp = nlohmann::json::parse(read_bytes(t.comparison_path));
  REQUIRE(cmp["k_ordering_increasing"].get<bool>());
  REQUIRE(cmp["fwhm_ordering_decreasing"].get<bool>());
  REQUIRE(cmp["scenarios"].size() == 3);
}

TEST_CASE("heatmap renders exact grayscale bytes") {
  const std::string path =
      (fs::temp_directory_path() / "bpt_test_heatmap.ppm").string();
  SECTION("linear endpoints") {
    Eigen::MatrixXd m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    render_heatmap(m, path);
    const std::string bytes = read_bytes(path);
    const std::string expected = std::string("P6\n2 2\n255\n") +
                                 std::string("\x00\x00\x00\xff\xff\xff\xff\xff\xff\x00\x00\x00", 12);
    REQUIRE(bytes == expected);
  }
  SECTION("degenerate range maps to mid-gray") {
    render_heatmap(Eigen::MatrixXd::Constant(3, 2, 4.2), path);
    const std::string bytes = read_bytes(path);
    const std::string header = "P6\n2 3\n255\n";
    REQUIRE(bytes.substr(0, header.size()) == header);
    REQUIRE(bytes.size() == header.size() + 18);
    for (std::size_t i = header.size(); i < bytes.size(); ++i)
      REQUIRE(static_cast<unsigned char>(bytes[i]) == 128);
  }
  SECTION("non-finite entries are rejected") {
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::infinity();
    REQUIRE_THROWS_AS(render_heatmap(bad, path), std::invalid_argument);
  }
}

TEST_CASE("fwhm helper interpolates half crossings") {
  Eigen::VectorXd triangle(5);
  triangle << 0.0, 0.5, 1.0, 0.5, 0.0;
  REQUIRE(scenario_detail::fwhm_of_slice(triangle, 1.0, 2) == Approx(2.0).margin(1e-12));
  const Eigen::VectorXd flat = Eigen::VectorXd::Ones(9);
  REQUIRE(scenario_detail::fwhm_of_slice(flat, 0.5, 4) == Approx(4.0).margin(1e-12));
}

TEST_CASE("toeplitz residual separates stationary from pulsed matrices") {
  Eigen::MatrixXcd toeplitz(3, 3);
  toeplitz << 1.0, 2.0, 3.0, 4.0, 1.0, 2.0, 5.0, 4.0, 1.0;
  REQUIRE(scenario_detail::toeplitz_residual(toeplitz) == 0.0);
  Eigen::MatrixXcd ramp(3, 3);
  ramp << 1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 3.0;
  REQUIRE(scenario_detail::toeplitz_residual(ramp) > 0.1);
}

TEST_CASE("config loader distinguishes io and syntax failures") {
  REQUIRE_THROWS_AS(load_scenario_config("/nonexistent/bpt config.json"), IoError);
  const fs::path bad = fs::temp_directory_path() / "bpt_test_bad.json";
  std::ofstream(bad) << "{ not json";
  REQUIRE_THROWS_AS(load_scenario_config(bad.string()), ConfigError);
}
