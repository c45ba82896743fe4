#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Table {
  std::string header;
  std::vector<std::vector<std::string>> rows;

  double num(std::size_t row, std::size_t col) const { return std::stod(rows.at(row).at(col)); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') quoted = !quoted;
    else if (ch == ',' && !quoted) out.push_back(std::move(cell)), cell.clear();
    else cell += ch;
  }
  out.push_back(cell);
  return out;
}

Table read_csv(const fs::path& p) {
  std::ifstream in(p);
  Table t;
  std::getline(in, t.header);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) t.rows.push_back(split(line));
  return t;
}

class Workdir {
 public:
  explicit Workdir(const std::string& name) : dir_(fs::temp_directory_path() / ("fracspec_cli_" + name)) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Workdir() { fs::remove_all(dir_); }

  fs::path operator/(const std::string& f) const { return dir_ / f; }

  int run(const std::string& args) const {
    const std::string cmd = "cd '" + dir_.string() + "' && '" FRACSPEC_CLI "' " + args + " 2>stderr.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

 private:
  fs::path dir_;
};

}  // namespace

TEST_CASE("solve writes spectrum, report and vectors") {
  Workdir w("solve");
  REQUIRE(w.run("solve --alpha 1 --beta 1 --n 200 --count 2") == 0);
  const Table t = read_csv(w / "spectrum.csv");
  CHECK(t.header == "index,re_lambda,im_lambda,residual,is_real,region,cone_margin");
  REQUIRE(t.rows.size() == 199);
  for (std::size_t j = 1; j <= 4; ++j) {
    const double exact = static_cast<double>(j * j) * std::numbers::pi * std::numbers::pi;
    CHECK(std::abs(t.num(j - 1, 1) - exact) / exact <= 1e-2);
    CHECK(t.rows[j - 1][4] == "1");
  }
  CHECK(fs::exists(w / "spectrum_report.json"));
  const Table v = read_csv(w / "spectrum_vectors.csv");
  CHECK(v.header == "x,re_u1,im_u1,re_u2,im_u2");
  CHECK(v.rows.size() == 201);
}

TEST_CASE("solve report counts the symmetric case as all real") {
  Workdir w("symmetric");
  REQUIRE(w.run("solve --alpha 0.75 --beta 0.75 --n 60 --out s.json --format json") == 0);
  const std::string report = slurp(w / "s_report.json");
  CHECK(report.find("\"eigenvalue_count\": 59") != std::string::npos);
  CHECK(report.find("\"real_count\": 59") != std::string::npos);
  CHECK(slurp(w / "s.json").front() == '{');
}

TEST_CASE("solve cone margin at a strongly nonsymmetric pair") {
  Workdir w("cone");
  REQUIRE(w.run("solve --alpha 0.2 --beta 0.9 --n 100") == 0);
  const Table t = read_csv(w / "spectrum.csv");
  REQUIRE(t.rows.size() == 99);
  double worst = -1e300;
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    if (t.rows[i][5] == "accurate") worst = std::max(worst, t.num(i, 6));
  CHECK(worst <= 0.02);
}

TEST_CASE("identical runs produce identical files") {
  Workdir w("determinism");
  REQUIRE(w.run("solve --alpha 0.4 --beta 0.9 --n 80 --seed 7 --out a.csv") == 0);
  REQUIRE(w.run("solve --alpha 0.4 --beta 0.9 --n 80 --seed 7 --out b.csv") == 0);
  CHECK(slurp(w / "a.csv") == slurp(w / "b.csv"));
}

TEST_CASE("eigenfunction traces") {
  Workdir w("eigenfunction");
  REQUIRE(w.run("eigenfunction --alpha 0.2 --beta 0.9 --count 2 --out ef.csv") == 0);
  double max_im[2] = {0.0, 0.0};
  for (int j = 1; j <= 2; ++j) {
    const Table t = read_csv(w / ("ef_j" + std::to_string(j) + ".csv"));
    CHECK(t.header == "x,re_u,im_u,abs_u");
    REQUIRE(t.rows.size() == 201);
    for (std::size_t i = 0; i < t.rows.size(); ++i) max_im[j - 1] = std::max(max_im[j - 1], std::abs(t.num(i, 2)));
  }
  CHECK(max_im[0] <= 1e-6);
  CHECK(max_im[1] > 1e-3);

  REQUIRE(w.run("eigenfunction --alpha 1 --beta 1 --index 1 --out lap.csv") == 0);
  const Table t = read_csv(w / "lap_j1.csv");
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double u = t.num(i, 1);
    const double v = std::sqrt(2.0) * std::sin(std::numbers::pi * t.num(i, 0));
    uv += u * v;
    uu += u * u;
    vv += v * v;
  }
  CHECK(uv / std::sqrt(uu * vv) >= 0.999);

  CHECK(w.run("eigenfunction --alpha 1 --beta 1 --n 10 --index 10") == 2);
}

TEST_CASE("sweep grid, diagonal and fixed sum") {
  Workdir w("sweep");
  REQUIRE(w.run("sweep --alpha-range 0.5:0.9:3 --beta-range 0.7:0.9:3 --n 40 --out grid.csv") == 0);
  const Table g = read_csv(w / "grid.csv");
  CHECK(g.header == "alpha,beta,lambda1_re,lambda1_im,real_count,cone_margin,error");
  CHECK(g.rows.size() == 9);

  REQUIRE(w.run("sweep --alpha-range 0.5:1:6 --n 100 --out diag.csv") == 0);
  const Table d = read_csv(w / "diag.csv");
  REQUIRE(d.rows.size() == 5);
  CHECK(slurp(w / "stderr.txt").find("skipped infeasible point") != std::string::npos);
  for (std::size_t i = 1; i < d.rows.size(); ++i) CHECK(d.num(i, 2) > d.num(i - 1, 2));
  CHECK(std::abs(d.num(4, 2) - std::numbers::pi * std::numbers::pi) <= 1e-2);

  REQUIRE(w.run("sweep --alpha-range 0.2:1:9 --sum-fixed 1.2 --n 60 --out sum.csv") == 0);
  const Table s = read_csv(w / "sum.csv");
  REQUIRE(s.rows.size() == 9);
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.rows.size(); ++i)
    if (s.num(i, 4) > s.num(best, 4)) best = i;
  CHECK(std::abs(s.num(best, 0) - 0.6) <= 1e-12);
  CHECK(std::abs(s.num(best, 1) - 0.6) <= 1e-12);

  REQUIRE(w.run("sweep --alpha-range 0.6:0.8:2 --n 1 --out bad.csv") == 0);
  const Table b = read_csv(w / "bad.csv");
  REQUIRE(b.rows.size() == 2);
  CHECK(!b.rows[0].back().empty());
}

TEST_CASE("configuration errors exit nonzero") {
  Workdir w("config");
  CHECK(w.run("solve --alpha 0.1 --beta 0.2") == 2);
  CHECK(slurp(w / "stderr.txt").find("alpha + beta") != std::string::npos);
  CHECK(w.run("solve --alpha 1") == 2);
  CHECK(w.run("solve --alpha 1 --beta 1 --format xml") == 2);
  CHECK(w.run("sweep --alpha-range 0.5:1") == 2);
  CHECK(w.run("sweep --alpha-range 0.5:1:3 --beta-range 0.5:1:3 --sum-fixed 1.2") == 2);
  CHECK(w.run("frobnicate") == 2);
}

TEST_CASE("validate is reproducible and can fail") {
  Workdir w("validate");
  CHECK(w.run("validate --seed 3 --out r1.json") == 0);
  CHECK(w.run("validate --seed 3 --out r2.json") == 0);
  const std::string r1 = slurp(w / "r1.json");
  CHECK(!r1.empty());
  CHECK(r1 == slurp(w / "r2.json"));
  CHECK(r1.find("\"all_pass\": true") != std::string::npos);

  CHECK(w.run("validate --seed 3 --perturb-k 1e-3 --out bad.json") == 1);
  CHECK(slurp(w / "bad.json").find("\"all_pass\": false") != std::string::npos);
}
