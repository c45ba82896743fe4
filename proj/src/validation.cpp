#include "fracspec/validation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

#include "fracspec/assembly.hpp"
#include "fracspec/directsolver.hpp"
#include "fracspec/eigensolver.hpp"
#include "fracspec/errors.hpp"
#include "fracspec/fracops.hpp"
#include "fracspec/parallel.hpp"
#include "fracspec/specialfns.hpp"
#include "fracspec/sweep.hpp"
#include "json.hpp"

namespace fracspec::validation {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

class Context {
 public:
  explicit Context(const Options& options) : options_(options) {}

  std::uint64_t seed() const { return options_.seed; }

  RealMatrix stiffness(const Mesh& mesh, const FractionalOrders& orders) const {
    RealMatrix k = assembly::stiffness_matrix(mesh, orders);
    if (options_.perturb_k != 0.0) {
      std::mt19937_64 rng(options_.seed ^ 0x5eed5eed5eed5eedULL);
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      const double scale = options_.perturb_k * k.max_abs();
      for (double& v : k.data()) v += scale * unit(rng);
    }
    return k;
  }

  Spectrum solve(const Mesh& mesh, const FractionalOrders& orders, std::size_t vectors) const {
    SolveOptions so;
    so.vector_count = vectors;
    so.seed = options_.seed;
    Spectrum s = eigensolver::solve_gevp(stiffness(mesh, orders), assembly::mass_matrix(mesh), so);
    s.orders = orders;
    s.mesh = {mesh.a(), mesh.b(), mesh.elements()};
    return s;
  }

 private:
  Options options_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Criterion laplacian_limit(const Context& ctx) {
  Criterion c{1, "laplacian_limit", false, {}, {}};
  const auto start = std::chrono::steady_clock::now();
  const Spectrum s = ctx.solve(Mesh(0.0, 1.0, 200), FractionalOrders(1.0, 1.0), 0);
  const double elapsed = seconds_since(start);
  double worst = 0.0;
  for (int j = 1; j <= 4; ++j) {
    const double exact = j * j * kPi2;
    const double err = std::abs(s.pairs[static_cast<std::size_t>(j - 1)].value - exact) / exact;
    c.metrics.push_back({"lambda" + std::to_string(j) + "_re", s.pairs[static_cast<std::size_t>(j - 1)].value.real()});
    worst = std::max(worst, err);
  }
  c.metrics.push_back({"max_rel_error", worst});
  c.pass = worst <= 1e-2 && elapsed < 5.0;
  if (elapsed >= 5.0) c.detail = "runtime limit of 5 s exceeded";
  return c;
}

Criterion limit_trend(const Context& ctx) {
  Criterion c{2, "limit_trend", false, {}, {}};
  const sweep::Plan plan = sweep::diagonal(sweep::Range{0.5, 1.0, 6});
  std::vector<double> lambda(plan.points.size());
  const Mesh mesh(0.0, 1.0, 200);
  parallel_for(plan.points.size(), [&](std::size_t i) {
    const auto& p = plan.points[i];
    lambda[i] = ctx.solve(mesh, FractionalOrders(p.alpha, p.beta), 0).pairs.front().value.real();
  });
  bool increasing = !lambda.empty();
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    char key[64];
    std::snprintf(key, sizeof key, "lambda1_s%.1f", plan.points[i].alpha);
    c.metrics.push_back({key, lambda[i]});
    if (i > 0 && !(lambda[i] > lambda[i - 1])) increasing = false;
  }
  c.metrics.push_back({"skipped_points", static_cast<double>(plan.skipped.size())});
  const double gap = lambda.empty() ? std::numeric_limits<double>::infinity() : std::abs(lambda.back() - kPi2);
  c.metrics.push_back({"terminal_abs_error", gap});
  c.pass = increasing && gap <= 1e-2 && plan.points.size() >= 5;
  std::vector<std::string> notes;
  if (!increasing) notes.push_back("lambda1 not strictly increasing");
  if (!(gap <= 1e-2)) notes.push_back("terminal error above 1e-2");
  if (!plan.skipped.empty()) notes.push_back("skipped infeasible point alpha = beta = 0.5");
  for (const auto& n : notes) c.detail += (c.detail.empty() ? "" : "; ") + n;
  return c;
}

Criterion symmetric_reality(const Context& ctx) {
  Criterion c{3, "symmetric_reality", false, {}, {}};
  const Spectrum s = ctx.solve(Mesh(0.0, 1.0, 100), FractionalOrders(0.75, 0.75), 0);
  double max_im = 0.0, max_abs = 0.0, min_re = std::numeric_limits<double>::infinity();
  for (const auto& p : s.pairs) {
    max_im = std::max(max_im, std::abs(p.value.imag()));
    max_abs = std::max(max_abs, std::abs(p.value));
    min_re = std::min(min_re, p.value.real());
  }
  c.metrics = {{"max_abs_imag", max_im}, {"max_abs_lambda", max_abs}, {"min_real", min_re}};
  c.pass = max_im <= 1e-8 * max_abs && min_re > 0.0;
  return c;
}

const std::vector<std::pair<double, double>>& cone_pairs() {
  static const std::vector<std::pair<double, double>> pairs{
      {0.2, 0.9}, {0.4, 0.9}, {0.6, 0.9}, {0.8, 0.9}, {0.55, 0.65}};
  return pairs;
}

std::string pair_tag(const std::pair<double, double>& p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g_%g", p.first, p.second);
  return buf;
}

Criterion cone_bound(const Context& ctx, std::vector<Spectrum>& spectra) {
  Criterion c{4, "cone_bound", false, {}, {}};
  const auto& pairs = cone_pairs();
  spectra.assign(pairs.size(), Spectrum{});
  const auto start = std::chrono::steady_clock::now();
  const Mesh mesh(0.0, 1.0, 100);
  parallel_for(pairs.size(), [&](std::size_t i) {
    spectra[i] = ctx.solve(mesh, FractionalOrders(pairs[i].first, pairs[i].second), 1);
  });
  const double elapsed = seconds_since(start);
  bool ok = true;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const FractionalOrders orders(pairs[i].first, pairs[i].second);
    const SpectrumReport r = eigensolver::classify(spectra[i], orders);
    c.metrics.push_back({"cone_margin_" + pair_tag(pairs[i]), r.cone_margin});
    if (!(r.cone_margin <= 0.02)) ok = false;
  }
  c.pass = ok && elapsed < 60.0;
  if (elapsed >= 60.0) c.detail = "runtime limit of 60 s exceeded";
  return c;
}

Criterion principal_pair(const std::vector<Spectrum>& spectra) {
  Criterion c{5, "principal_pair", false, {}, {}};
  const auto& pairs = cone_pairs();
  bool ok = true;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Eigenpair& p = spectra[i].pairs.front();
    const bool real = std::abs(p.value.imag()) <= 1e-6 * std::abs(p.value);
    bool positive = !p.vector.empty();
    double biggest = 0.0, min_re = std::numeric_limits<double>::infinity(), max_im = 0.0;
    for (const auto& u : p.vector) {
      biggest = std::max(biggest, std::abs(u));
      min_re = std::min(min_re, u.real());
      max_im = std::max(max_im, std::abs(u.imag()));
    }
    positive = positive && min_re > 0.0 && max_im <= 1e-6 * biggest;
    c.metrics.push_back({"lambda1_re_" + pair_tag(pairs[i]), p.value.real()});
    c.metrics.push_back({"lambda1_im_" + pair_tag(pairs[i]), p.value.imag()});
    c.metrics.push_back({"min_interior_ratio_" + pair_tag(pairs[i]), biggest > 0.0 ? min_re / biggest : 0.0});
    if (!(real && p.value.real() > 0.0 && positive)) ok = false;
  }
  c.pass = ok;
  return c;
}

Criterion cross_method(const Context& ctx) {
  Criterion c{6, "cross_method", false, {}, {}};
  const Mesh mesh(0.0, 1.0, 200);
  const FractionalOrders orders(0.6, 0.9);
  const double fem = ctx.solve(mesh, orders, 0).pairs.front().value.real();
  const auto power = directsolver::principal_eigen_power(orders, mesh, 1e-12, 1000);
  const double gap = std::abs(power.lambda - fem) / std::abs(fem);
  c.metrics = {{"fem_lambda1", fem},
               {"power_lambda", power.lambda},
               {"rel_gap", gap},
               {"power_iterations", static_cast<double>(power.iterations)}};
  c.pass = gap <= 1e-2;
  return c;
}

Criterion assembly_oracle(const Context& ctx) {
  Criterion c{7, "assembly_oracle", false, {}, {}};
  const Mesh mesh(0.0, 1.0, 8);
  bool ok = true;
  for (auto [a, b] : {std::pair{0.4, 0.8}, std::pair{0.6, 0.6}, std::pair{0.8, 0.4}}) {
    const FractionalOrders orders(a, b);
    const RealMatrix k = ctx.stiffness(mesh, orders);
    const RealMatrix o = assembly::oracle_stiffness(mesh, orders);
    double worst = 0.0;
    for (std::size_t i = 0; i < k.rows(); ++i)
      for (std::size_t j = 0; j < k.cols(); ++j) worst = std::max(worst, std::abs(k(i, j) - o(i, j)) / std::abs(o(i, j)));
    c.metrics.push_back({"max_rel_diff_" + pair_tag({a, b}), worst});
    if (!(worst <= 1e-6)) ok = false;
  }
  c.pass = ok;
  return c;
}

Criterion norm_inequality(const Context& ctx) {
  Criterion c{8, "norm_inequality", false, {}, {}};
  std::mt19937_64 rng(ctx.seed());
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_int_distribution<int> size(3, 32);
  int violations = 0;
  double lower = std::numeric_limits<double>::infinity(), upper = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 50; ++trial) {
    const Mesh mesh(0.0, 1.0, size(rng));
    RampSum left(Side::Left, {}), right(Side::Right, {});
    for (int j = 1; j < mesh.elements(); ++j) {
      const double w = coeff(rng);
      left = left + fracops::hat_ramps_left(j, mesh).scaled(w);
      right = right + fracops::hat_ramps(j, mesh).scaled(w);
    }
    for (double t : {0.3, 0.75}) {
      const double cosine = std::abs(std::cos(t * std::numbers::pi));
      const double nl = fracops::l2_norm_ramps(fracops::rl_derivative(left, t), mesh);
      const double nr = fracops::l2_norm_ramps(fracops::rl_derivative(right, t), mesh);
      const double lo = (nr - cosine * nl) / nl;
      const double hi = (nl / cosine - nr) / nl;
      lower = std::min(lower, lo);
      upper = std::min(upper, hi);
      if (lo < -1e-10 || hi < -1e-10) ++violations;
    }
  }
  c.metrics = {{"violations", violations}, {"min_lower_slack", lower}, {"min_upper_slack", upper}};
  c.pass = violations == 0;
  return c;
}

Criterion poincare(const Context& ctx) {
  Criterion c{9, "poincare_bound", false, {}, {}};
  bool ok = true;
  for (double s : {0.6, 0.75, 0.9}) {
    const double lambda = ctx.solve(Mesh(0.0, 1.0, 100), FractionalOrders(s, s), 0).pairs.front().value.real();
    const double bound = std::pow(s * specialfns::gamma(s), 2.0);
    char key[64];
    std::snprintf(key, sizeof key, "lambda1_over_bound_s%g", s);
    c.metrics.push_back({key, lambda / bound});
    if (!(lambda >= bound)) ok = false;
  }
  c.pass = ok;
  return c;
}

Criterion real_count_trend(const Context& ctx) {
  Criterion c{10, "real_count_trend", false, {}, {}};
  std::size_t previous = 0;
  bool ok = true;
  for (double a : {0.55, 0.65, 0.75}) {
    const FractionalOrders orders(a, 1.5 - a);
    const Spectrum s = ctx.solve(Mesh(0.0, 1.0, 100), orders, 0);
    const std::size_t count = eigensolver::classify(s, orders).real_count;
    char key[64];
    std::snprintf(key, sizeof key, "real_count_alpha%g", a);
    c.metrics.push_back({key, static_cast<double>(count)});
    if (count < previous) ok = false;
    previous = count;
  }
  c.pass = ok;
  return c;
}

Criterion maximum_principle(const Context&) {
  Criterion c{11, "maximum_principle_hopf", false, {}, {}};
  const FractionalOrders orders(0.6, 0.9);
  const std::vector<int> refinements{50, 100, 200, 400};
  bool positive = true;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (int N : refinements) {
    const Mesh mesh(0.0, 1.0, N);
    const auto sol = directsolver::apply_inverse(
        GridFunction::sample(mesh, [](double) { return Complex{1.0}; }), orders, mesh);
    double biggest = 0.0;
    for (const auto& v : sol.u.values) biggest = std::max(biggest, std::abs(v));
    for (std::size_t j = 1; j + 1 < sol.u.values.size(); ++j) {
      min_ratio = std::min(min_ratio, sol.u.values[j].real() / biggest);
      if (!(sol.u.values[j].real() > 0.0)) positive = false;
    }
  }
  const auto slopes = directsolver::hopf_slope_probe([](double) { return 1.0; }, orders, 0.0, 1.0, refinements);
  bool increasing = true;
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    c.metrics.push_back({"slope_n" + std::to_string(refinements[i]), slopes[i]});
    if (i > 0 && !(slopes[i] > slopes[i - 1])) increasing = false;
  }
  c.metrics.push_back({"min_interior_ratio", min_ratio});
  c.pass = positive && increasing;
  return c;
}

template <class F>
Criterion guarded(int id, const char* name, F&& run) {
  try {
    return run();
  } catch (const std::exception& e) {
    return Criterion{id, name, false, {}, e.what()};
  }
}

std::vector<Criterion> run_core(const Options& options) {
  const Context ctx(options);
  std::vector<Criterion> out;
  std::vector<Spectrum> cone_spectra;
  out.push_back(guarded(1, "laplacian_limit", [&] { return laplacian_limit(ctx); }));
  out.push_back(guarded(2, "limit_trend", [&] { return limit_trend(ctx); }));
  out.push_back(guarded(3, "symmetric_reality", [&] { return symmetric_reality(ctx); }));
  out.push_back(guarded(4, "cone_bound", [&] { return cone_bound(ctx, cone_spectra); }));
  out.push_back(guarded(5, "principal_pair", [&] {
    if (cone_spectra.size() != cone_pairs().size()) throw Error("spectra from criterion 4 unavailable");
    return principal_pair(cone_spectra);
  }));
  out.push_back(guarded(6, "cross_method", [&] { return cross_method(ctx); }));
  out.push_back(guarded(7, "assembly_oracle", [&] { return assembly_oracle(ctx); }));
  out.push_back(guarded(8, "norm_inequality", [&] { return norm_inequality(ctx); }));
  out.push_back(guarded(9, "poincare_bound", [&] { return poincare(ctx); }));
  out.push_back(guarded(10, "real_count_trend", [&] { return real_count_trend(ctx); }));
  out.push_back(guarded(11, "maximum_principle_hopf", [&] { return maximum_principle(ctx); }));
  return out;
}

}  // namespace

bool Report::all_pass() const {
  if (criteria.empty()) return false;
  for (const auto& c : criteria)
    if (!c.pass) return false;
  return true;
}

std::string Report::json() const {
  using nlohmann::ordered_json;
  ordered_json list = ordered_json::array();
  std::size_t passed = 0;
  for (const auto& c : criteria) {
    ordered_json metrics = ordered_json::object();
    for (const auto& [k, v] : c.metrics) metrics[k] = v;
    ordered_json entry{{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"metrics", metrics}};
    if (!c.detail.empty()) entry["detail"] = c.detail;
    list.push_back(std::move(entry));
    if (c.pass) ++passed;
  }
  ordered_json doc{{"seed", options.seed},
                   {"perturb_k", options.perturb_k},
                   {"all_pass", all_pass()},
                   {"passed", passed},
                   {"failed", criteria.size() - passed},
                   {"criteria", list}};
  return doc.dump(2) + "\n";
}

Report run(const Options& options) {
  Report report{options, run_core(options)};
  const std::string first = report.json();
  const Report again{options, run_core(options)};
  const std::string second = again.json();
  Criterion determinism{12, "determinism", first == second, {}, {}};
  determinism.metrics = {{"report_bytes", static_cast<double>(first.size())},
                         {"rerun_bytes", static_cast<double>(second.size())}};
  if (!determinism.pass) determinism.detail = "rerun with the same seed produced a different report";
  report.criteria.push_back(std::move(determinism));
  return report;
}

}  // namespace fracspec::validation
