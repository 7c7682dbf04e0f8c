#include <catch2/catch_amalgamated.hpp>

#include <Eigen/SVD>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "bpt/io.hpp"
#include "bpt/jsa.hpp"

using namespace bpt;
using Catch::Approx;

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("equal widths give a numerically separable kernel") {
  const FrequencyGrid g = make_frequency_grid(0.0, 24.0, 128);
  const TabulatedJsa jsa = build_gaussian_jsa({0.1, 2.0, 2.0}, g, g);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(jsa.values);
  const Eigen::VectorXd s = svd.singularValues();
  REQUIRE(s[1] / s[0] <= 1e-10);
}

TEST_CASE("kernel value at the center equals the amplitude") {
  const FrequencyGrid g = make_frequency_grid(7.0, 24.0, 65);  // odd count: exact center sample
  const TabulatedJsa jsa = build_gaussian_jsa({0.37, 1.0, 3.0}, g, g);
  REQUIRE(jsa.values(32, 32).real() == 0.37);
  REQUIRE(jsa.values(32, 32).imag() == 0.0);
}

TEST_CASE("gaussian kernel is symmetric under beam exchange") {
  const FrequencyGrid g = make_frequency_grid(0.0, 20.0, 48);
  const TabulatedJsa jsa = build_gaussian_jsa({0.1, 1.5, 2.4}, g, g);
  REQUIRE((jsa.values - jsa.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cw profile hits the amplitude at zero offset and decays as specified") {
  const CwProfileParams params{0.1, 3.0};
  const FrequencyGrid g = make_frequency_grid(0.0, 12.0, 17);  // spacing 0.75, offset 1.5 on-grid
  const Eigen::ArrayXd r = build_cw_profile(params, g);
  REQUIRE(r[8] == 0.1);  // center sample
  // r(sigma_c/2) / r(0) = exp(-1/2)
  REQUIRE(r[10] / r[8] == Approx(std::exp(-0.5)).epsilon(1e-14));
  for (int i = 0; i < g.count; ++i) {
    REQUIRE(r[i] >= 0.0);
    REQUIRE(r[i] == r[g.count - 1 - i]);  // even function
  }
}

TEST_CASE("cw jsa is the profile on the antidiagonal weighted by 1/dw") {
  const FrequencyGrid g = make_frequency_grid(0.0, 8.0, 9);
  const Eigen::ArrayXd r = build_cw_profile({0.2, 2.0}, g);
  const TabulatedJsa jsa = build_cw_jsa(r, g);
  for (int i = 0; i < g.count; ++i)
    for (int j = 0; j < g.count; ++j) {
      if (j == g.count - 1 - i)
        REQUIRE(jsa.values(i, j).real() == Approx(r[i] / g.spacing).epsilon(1e-15));
      else
        REQUIRE(jsa.values(i, j) == std::complex<double>(0.0, 0.0));
    }
}

TEST_CASE("invalid jsa parameters are rejected") {
  const FrequencyGrid g = make_frequency_grid(0.0, 8.0, 8);
  REQUIRE_THROWS_AS(build_gaussian_jsa({-0.1, 1.0, 1.0}, g, g), std::invalid_argument);
  REQUIRE_THROWS_AS(build_gaussian_jsa({0.1, 0.0, 1.0}, g, g), std::invalid_argument);
  REQUIRE_THROWS_AS(build_gaussian_jsa({0.1, 1.0, -2.0}, g, g), std::invalid_argument);
  REQUIRE_THROWS_AS(build_cw_profile({0.1, 0.0}, g), std::invalid_argument);
}

TEST_CASE("jsa csv round trip is value-exact") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> nd;
  TabulatedJsa jsa;
  jsa.grid_a = make_frequency_grid(-0.25, 5.0, 3);
  jsa.grid_b = make_frequency_grid(1.75e3, 7.0, 3);
  jsa.values.resize(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      jsa.values(i, j) = std::complex<double>(nd(rng) * std::pow(10.0, i - 1), nd(rng) * 1e-7);

  const std::string path = temp_path("bpt_jsa_roundtrip.csv");
  save_jsa(jsa, path);
  const TabulatedJsa back = load_jsa(path);
  REQUIRE(back.grid_a.count == 3);
  REQUIRE(back.grid_b.count == 3);
  REQUIRE(back.grid_a.spacing == jsa.grid_a.spacing);
  REQUIRE(back.grid_b.center == jsa.grid_b.center);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) REQUIRE(back.values(i, j) == jsa.values(i, j));
}

TEST_CASE("malformed jsa rows are reported with their line number") {
  const std::string path = temp_path("bpt_jsa_malformed.csv");
  {
    std::ofstream out(path);
    out << "# jsa v1 na=2 nb=2 dwa=1 dwb=1 ca=0 cb=0\n";
    out << "1+0j,2+0j\n";
    out << "3+0j\n";  // short row
  }
  try {
    load_jsa(path);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    REQUIRE(e.line() == 3);
  }
}

TEST_CASE("jsa loader rejects bad headers and missing files") {
  const std::string path = temp_path("bpt_jsa_badheader.csv");
  {
    std::ofstream out(path);
    out << "# wrong v1 na=2 nb=2\n";
  }
  REQUIRE_THROWS_AS(load_jsa(path), ParseError);
  REQUIRE_THROWS_AS(load_jsa(temp_path("bpt_does_not_exist.csv")), IoError);
}

TEST_CASE("golden shorter-pulse kernel matches the builder") {
  const TabulatedJsa golden = load_jsa(std::string(BPT_TEST_DATA_DIR) + "/jsa_shorter_golden.csv");
  const TabulatedJsa built =
      build_gaussian_jsa({0.1, 2.0, 2.0}, golden.grid_a, golden.grid_b);
  REQUIRE((golden.values - built.values).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("profile csv round trip is value-exact") {
  const FrequencyGrid g = make_frequency_grid(0.5, 6.0, 13);
  const Eigen::ArrayXd r = build_cw_profile({0.31, 1.7}, g);
  const std::string path = temp_path("bpt_profile_roundtrip.csv");
  save_profile(r, g, path);
  const auto [back, grid] = load_profile(path);
  REQUIRE(grid.count == g.count);
  REQUIRE(grid.spacing == g.spacing);
  REQUIRE(grid.center == g.center);
  for (int i = 0; i < g.count; ++i) REQUIRE(back[i] == r[i]);
}
