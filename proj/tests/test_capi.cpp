#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <numbers>
#include <string>
#include <vector>

#include "fracspec/fracspec.h"

namespace {

fs_problem problem(double alpha, double beta, int n) {
  fs_problem p = fs_problem_default();
  p.alpha = alpha;
  p.beta = beta;
  p.elements = n;
  return p;
}

}  // namespace

TEST_CASE("defaults") {
  const fs_problem p = fs_problem_default();
  CHECK(p.alpha == 1.0);
  CHECK(p.beta == 1.0);
  CHECK(p.a == 0.0);
  CHECK(p.b == 1.0);
  CHECK(p.elements == 200);
  CHECK(p.vector_count < 0);
  CHECK(std::string(fs_version()).size() > 0);
}

TEST_CASE("laplacian spectrum through the handle") {
  const fs_problem p = problem(1.0, 1.0, 200);
  fs_spectrum* s = nullptr;
  REQUIRE(fs_solve(&p, &s) == FS_OK);
  CHECK(std::string(fs_last_error()).empty());
  size_t n = 0;
  REQUIRE(fs_spectrum_size(s, &n) == FS_OK);
  CHECK(n == 199);
  for (size_t j = 1; j <= 4; ++j) {
    double re = 0.0, im = 1.0;
    REQUIRE(fs_spectrum_eigenvalue(s, j, &re, &im) == FS_OK);
    const double exact = static_cast<double>(j * j) * std::numbers::pi * std::numbers::pi;
    CHECK(std::abs(re - exact) / exact <= 1e-2);
    CHECK(im == 0.0);
    double res = 1.0;
    REQUIRE(fs_spectrum_residual(s, j, &res) == FS_OK);
    CHECK(res <= 1e-8);
  }
  fs_summary sum{};
  REQUIRE(fs_spectrum_summary(s, &sum) == FS_OK);
  CHECK(sum.eigenvalue_count == 199);
  CHECK(sum.real_count == 199);
  CHECK(sum.complex_pair_count == 0);
  CHECK(sum.principal_positive == 1);
  CHECK(sum.vectors_unconverged == 0);
  fs_spectrum_free(s);
}

TEST_CASE("eigenfunction arrays include endpoints and respect capacity") {
  const fs_problem p = problem(1.0, 1.0, 20);
  fs_spectrum* s = nullptr;
  REQUIRE(fs_solve(&p, &s) == FS_OK);
  size_t nodes = 0;
  REQUIRE(fs_spectrum_eigenfunction(s, 1, nullptr, nullptr, nullptr, 0, &nodes) == FS_OK);
  CHECK(nodes == 21);
  std::vector<double> x(nodes), re(nodes), im(nodes);
  REQUIRE(fs_spectrum_eigenfunction(s, 1, x.data(), re.data(), im.data(), nodes, &nodes) == FS_OK);
  CHECK(x.front() == 0.0);
  CHECK(x.back() == 1.0);
  CHECK(re.front() == 0.0);
  CHECK(re.back() == 0.0);
  for (size_t i = 1; i + 1 < nodes; ++i) CHECK(re[i] > 0.0);

  std::vector<double> few(3, -7.0);
  REQUIRE(fs_spectrum_eigenfunction(s, 1, few.data(), nullptr, nullptr, 2, &nodes) == FS_OK);
  CHECK(few[2] == -7.0);
  fs_spectrum_free(s);
}

TEST_CASE("error codes and messages") {
  fs_spectrum* s = nullptr;
  CHECK(fs_solve(nullptr, &s) == FS_ERR_NULL);
  CHECK(std::string(fs_last_error()).find("fs_solve") != std::string::npos);

  fs_problem bad = problem(0.2, 0.3, 10);
  CHECK(fs_solve(&bad, &s) == FS_ERR_DOMAIN);
  CHECK(s == nullptr);
  CHECK(std::string(fs_last_error()).find("alpha + beta") != std::string::npos);

  bad = problem(0.6, 0.9, 0);
  CHECK(fs_solve(&bad, &s) == FS_ERR_DOMAIN);

  const fs_problem p = problem(0.6, 0.9, 10);
  fs_problem some = p;
  some.vector_count = 1;
  REQUIRE(fs_solve(&some, &s) == FS_OK);
  double re = 0.0, im = 0.0;
  CHECK(fs_spectrum_eigenvalue(s, 0, &re, &im) == FS_ERR_DOMAIN);
  CHECK(fs_spectrum_eigenvalue(s, 10, &re, &im) == FS_ERR_DOMAIN);
  size_t nodes = 0;
  CHECK(fs_spectrum_eigenfunction(s, 2, nullptr, nullptr, nullptr, 0, &nodes) == FS_ERR_DOMAIN);
  CHECK(std::string(fs_last_error()).find("not computed") != std::string::npos);
  CHECK(fs_spectrum_write(s, "/nonexistent-dir/x.csv", FS_FORMAT_CSV) == FS_ERR_IO);
  fs_spectrum_free(s);

  fs_format f{};
  CHECK(fs_parse_format("json", &f) == FS_OK);
  CHECK(f == FS_FORMAT_JSON);
  CHECK(fs_parse_format("xml", &f) == FS_ERR_CONFIG);
  CHECK(std::strcmp(fs_status_name(FS_ERR_NOT_SPD), "matrix not SPD") == 0);
  fs_spectrum_free(nullptr);
}

TEST_CASE("sweep handle") {
  fs_range r{};
  REQUIRE(fs_parse_range("0.5:0.9:3", &r) == FS_OK);
  CHECK(r.lo == 0.5);
  CHECK(r.hi == 0.9);
  CHECK(r.steps == 3);
  CHECK(fs_parse_range("0.5:0.9", &r) == FS_ERR_CONFIG);
  CHECK(fs_parse_range("a:b:c", &r) == FS_ERR_CONFIG);

  fs_sweep_config cfg{};
  cfg.kind = FS_SWEEP_GRID;
  cfg.alpha = fs_range{0.3, 0.9, 3};
  cfg.beta = fs_range{0.3, 0.9, 3};
  cfg.b = 1.0;
  cfg.elements = 16;
  fs_sweep* sw = nullptr;
  REQUIRE(fs_sweep_run(&cfg, &sw) == FS_OK);
  size_t rows = 0, skipped = 0;
  REQUIRE(fs_sweep_size(sw, &rows) == FS_OK);
  REQUIRE(fs_sweep_skipped(sw, 0, nullptr, nullptr, &skipped) == FS_OK);
  CHECK(rows == 6);
  CHECK(skipped == 3);
  double a = 0.0, b = 0.0;
  REQUIRE(fs_sweep_skipped(sw, 0, &a, &b, &skipped) == FS_OK);
  CHECK(a + b <= 1.0 + 1e-12);
  a = -1.0;
  CHECK(fs_sweep_skipped(sw, 3, &a, &b, &skipped) == FS_OK);
  CHECK(skipped == 3);
  CHECK(a == -1.0);
  double prev_a = -1.0, prev_b = -1.0;
  for (size_t i = 0; i < rows; ++i) {
    fs_sweep_row row{};
    REQUIRE(fs_sweep_row_at(sw, i, &row) == FS_OK);
    CHECK(row.error == nullptr);
    CHECK(row.lambda1_re > 0.0);
    CHECK((row.alpha > prev_a || (row.alpha == prev_a && row.beta > prev_b)));
    prev_a = row.alpha;
    prev_b = row.beta;
  }
  fs_sweep_free(sw);
}

TEST_CASE("sweep records per-point failures without aborting") {
  fs_sweep_config cfg{};
  cfg.kind = FS_SWEEP_DIAGONAL;
  cfg.alpha = fs_range{0.6, 0.8, 2};
  cfg.b = 1.0;
  cfg.elements = 1;
  fs_sweep* sw = nullptr;
  REQUIRE(fs_sweep_run(&cfg, &sw) == FS_OK);
  size_t rows = 0;
  REQUIRE(fs_sweep_size(sw, &rows) == FS_OK);
  CHECK(rows == 2);
  for (size_t i = 0; i < rows; ++i) {
    fs_sweep_row row{};
    REQUIRE(fs_sweep_row_at(sw, i, &row) == FS_OK);
    REQUIRE(row.error != nullptr);
    CHECK(std::string(row.error).find("N >= 2") != std::string::npos);
    CHECK(std::isnan(row.lambda1_re));
  }
  fs_sweep_free(sw);
}
