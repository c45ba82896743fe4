#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracspec/fracspec.h"

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Common {
  double a = 0.0;
  double b = 1.0;
  int n = 200;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 0;
};

struct CliError {
  int code;
};

int exit_code(fs_status status) {
  return (status == FS_ERR_CONFIG || status == FS_ERR_DOMAIN) ? kExitConfig : kExitRuntime;
}

void check(fs_status status, const char* context) {
  if (status == FS_OK) return;
  std::fprintf(stderr, "fracspec: %s: %s\n", context, fs_last_error());
  throw CliError{exit_code(status)};
}

fs_format parse_format(const std::string& name) {
  fs_format f{};
  check(fs_parse_format(name.c_str(), &f), "--format");
  return f;
}

const char* extension(fs_format f) { return f == FS_FORMAT_JSON ? ".json" : ".csv"; }

std::string with_suffix(const std::string& path, const std::string& suffix, const std::string& ext) {
  const std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix + ext)).string();
}

std::string default_out(const std::string& out, const char* stem, fs_format f) {
  return out.empty() ? std::string(stem) + extension(f) : out;
}

void add_common(CLI::App* cmd, Common& c, bool with_format = true) {
  cmd->add_option("--a", c.a, "Left end of the interval")->capture_default_str();
  cmd->add_option("--b", c.b, "Right end of the interval")->capture_default_str();
  cmd->add_option("--n", c.n, "Number of uniform elements")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "Output path");
  if (with_format)
    cmd->add_option("--format", c.format, "Output format")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", c.seed, "Seed for inverse-iteration start vectors")->capture_default_str();
}

struct Spectrum {
  fs_spectrum* handle = nullptr;
  ~Spectrum() { fs_spectrum_free(handle); }
};

struct Sweep {
  fs_sweep* handle = nullptr;
  ~Sweep() { fs_sweep_free(handle); }
};

struct Validation {
  fs_validation* handle = nullptr;
  ~Validation() { fs_validation_free(handle); }
};

fs_problem problem_from(const Common& c, double alpha, double beta, long vectors) {
  fs_problem p = fs_problem_default();
  p.alpha = alpha;
  p.beta = beta;
  p.a = c.a;
  p.b = c.b;
  p.elements = c.n;
  p.vector_count = vectors;
  p.seed = c.seed;
  return p;
}

int run_solve(const Common& c, double alpha, double beta, int count) {
  const fs_format f = parse_format(c.format);
  const std::string out = default_out(c.out, "spectrum", f);
  Spectrum s;
  const fs_problem p = problem_from(c, alpha, beta, -1);
  check(fs_solve(&p, &s.handle), "solve");
  check(fs_spectrum_write(s.handle, out.c_str(), f), "writing spectrum");
  const std::string report = with_suffix(out, "_report", ".json");
  check(fs_report_write(s.handle, report.c_str()), "writing report");
  if (count > 0) {
    const std::string vectors = with_suffix(out, "_vectors", ".csv");
    check(fs_vectors_write(s.handle, static_cast<size_t>(count), vectors.c_str()), "writing eigenvectors");
  }
  fs_summary sum{};
  check(fs_spectrum_summary(s.handle, &sum), "summary");
  std::fprintf(stderr, "%zu eigenvalues, %zu real, %zu complex pairs, cone margin %.6g -> %s\n",
               sum.eigenvalue_count, sum.real_count, sum.complex_pair_count, sum.cone_margin, out.c_str());
  if (sum.vectors_unconverged > 0)
    std::fprintf(stderr, "warning: %zu eigenvectors did not converge\n", sum.vectors_unconverged);
  return 0;
}

int run_eigenfunction(const Common& c, double alpha, double beta, std::vector<int> indices, int count) {
  const fs_format f = parse_format(c.format);
  if (indices.empty()) {
    for (int j = 1; j <= std::max(count, 1); ++j) indices.push_back(j);
  }
  int highest = 0;
  for (int j : indices) {
    if (j < 1) {
      std::fprintf(stderr, "fracspec: eigenfunction index must be positive, got %d\n", j);
      throw CliError{kExitConfig};
    }
    highest = std::max(highest, j);
  }
  Spectrum s;
  const fs_problem p = problem_from(c, alpha, beta, highest);
  check(fs_solve(&p, &s.handle), "solve");
  size_t size = 0;
  check(fs_spectrum_size(s.handle, &size), "spectrum size");
  if (static_cast<size_t>(highest) > size) {
    std::fprintf(stderr, "fracspec: eigenfunction index %d out of range (spectrum has %zu)\n", highest, size);
    throw CliError{kExitConfig};
  }
  const std::string base = default_out(c.out, "eigenfunction", f);
  const std::string ext = std::filesystem::path(base).has_extension()
                              ? std::filesystem::path(base).extension().string()
                              : std::string(extension(f));
  for (int j : indices) {
    const std::string path = with_suffix(base, "_j" + std::to_string(j), ext);
    check(fs_eigenfunction_write(s.handle, static_cast<size_t>(j), path.c_str(), f), "writing eigenfunction");
    std::fprintf(stderr, "eigenfunction %d -> %s\n", j, path.c_str());
  }
  return 0;
}

fs_range parse_range(const std::string& text, const char* flag) {
  fs_range r{};
  check(fs_parse_range(text.c_str(), &r), flag);
  return r;
}

int run_sweep(const Common& c, const std::string& alpha_range, const std::string& beta_range, double sum,
              bool has_sum) {
  const fs_format f = parse_format(c.format);
  if (!beta_range.empty() && has_sum) {
    std::fprintf(stderr, "fracspec: --beta-range and --sum-fixed are mutually exclusive\n");
    throw CliError{kExitConfig};
  }
  fs_sweep_config cfg{};
  cfg.alpha = parse_range(alpha_range, "--alpha-range");
  cfg.a = c.a;
  cfg.b = c.b;
  cfg.elements = c.n;
  if (!beta_range.empty()) {
    cfg.kind = FS_SWEEP_GRID;
    cfg.beta = parse_range(beta_range, "--beta-range");
  } else if (has_sum) {
    cfg.kind = FS_SWEEP_FIXED_SUM;
    cfg.sum = sum;
  } else {
    cfg.kind = FS_SWEEP_DIAGONAL;
  }
  Sweep s;
  check(fs_sweep_run(&cfg, &s.handle), "sweep");
  size_t skipped = 0;
  check(fs_sweep_skipped(s.handle, 0, nullptr, nullptr, &skipped), "sweep");
  for (size_t i = 0; i < skipped; ++i) {
    double a = 0.0, b = 0.0;
    check(fs_sweep_skipped(s.handle, i, &a, &b, &skipped), "sweep");
    std::fprintf(stderr, "skipped infeasible point alpha=%.17g beta=%.17g\n", a, b);
  }
  const std::string out = default_out(c.out, "sweep", f);
  check(fs_sweep_write(s.handle, out.c_str(), f), "writing sweep");
  size_t rows = 0, failed = 0;
  check(fs_sweep_size(s.handle, &rows), "sweep");
  for (size_t i = 0; i < rows; ++i) {
    fs_sweep_row row{};
    check(fs_sweep_row_at(s.handle, i, &row), "sweep");
    if (row.error) {
      ++failed;
      std::fprintf(stderr, "point alpha=%.17g beta=%.17g failed: %s\n", row.alpha, row.beta, row.error);
    }
  }
  std::fprintf(stderr, "%zu points, %zu failed, %zu skipped -> %s\n", rows, failed, skipped, out.c_str());
  return 0;
}

int run_validate(const Common& c, double perturb_k) {
  Validation v;
  check(fs_validate(c.seed, perturb_k, &v.handle), "validate");
  size_t count = 0;
  check(fs_validation_count(v.handle, &count), "validate");
  for (size_t i = 0; i < count; ++i) {
    int id = 0, pass = 0;
    const char* name = nullptr;
    const char* detail = nullptr;
    check(fs_validation_criterion(v.handle, i, &id, &name, &pass, &detail), "validate");
    std::fprintf(stderr, "%s %2d %s%s%s\n", pass ? "PASS" : "FAIL", id, name, *detail ? ": " : "", detail);
  }
  if (c.out.empty() || c.out == "-") {
    const char* json = nullptr;
    check(fs_validation_json(v.handle, &json), "validate");
    std::fputs(json, stdout);
    std::fputc('\n', stdout);
  } else {
    check(fs_validation_write(v.handle, c.out.c_str()), "writing report");
  }
  int all = 0;
  check(fs_validation_all_pass(v.handle, &all), "validate");
  return all ? 0 : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of two-sided fractional Dirichlet eigenproblems by linear finite elements"};
  app.set_version_flag("--version", std::string(fs_version()));
  app.require_subcommand(1);

  Common common;
  double alpha = 1.0, beta = 1.0;
  int count = 0;

  auto* solve = app.add_subcommand("solve", "Full spectrum with residuals and classification");
  add_common(solve, common);
  solve->add_option("--alpha", alpha, "Order of the left derivative")->required();
  solve->add_option("--beta", beta, "Order of the right derivative")->required();
  solve->add_option("--count", count, "Eigenvectors to export alongside the spectrum")->check(CLI::NonNegativeNumber);

  std::vector<int> indices;
  auto* eigf = app.add_subcommand("eigenfunction", "Nodal traces of selected eigenfunctions");
  add_common(eigf, common);
  eigf->add_option("--alpha", alpha, "Order of the left derivative")->required();
  eigf->add_option("--beta", beta, "Order of the right derivative")->required();
  eigf->add_option("--index", indices, "Eigenpair index (1-based, repeatable)");
  eigf->add_option("--count", count, "Export indices 1..count")->check(CLI::PositiveNumber);

  std::string alpha_range, beta_range;
  double sum = 0.0;
  auto* sweep = app.add_subcommand("sweep", "Principal eigenvalue and real count over a parameter family");
  add_common(sweep, common);
  sweep->add_option("--alpha-range", alpha_range, "lo:hi:steps")->required();
  auto* beta_opt = sweep->add_option("--beta-range", beta_range, "lo:hi:steps; gives a full grid");
  auto* sum_opt = sweep->add_option("--sum-fixed", sum, "Keep alpha + beta = S");
  sum_opt->excludes(beta_opt);

  double perturb_k = 0.0;
  auto* validate = app.add_subcommand("validate", "Run the acceptance suite");
  add_common(validate, common, false);
  validate->add_option("--perturb-k", perturb_k, "Relative stiffness perturbation")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*solve) return run_solve(common, alpha, beta, count);
    if (*eigf) return run_eigenfunction(common, alpha, beta, indices, count);
    if (*sweep) return run_sweep(common, alpha_range, beta_range, sum, sum_opt->count() > 0);
    if (*validate) return run_validate(common, perturb_k);
  } catch (const CliError& e) {
    return e.code;
  }
  return kExitConfig;
}
