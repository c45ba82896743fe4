#include "fracspec/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "fracspec/errors.hpp"
#include "fracspec/parallel.hpp"
#include "json.hpp"

namespace fracspec::sweep {

namespace {

double parse_number(const std::string& field, const std::string& whole) {
  double v = 0.0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v))
    throw ConfigError("bad range '" + whole + "': '" + field + "' is not a number");
  return v;
}

bool feasible(const Point& p) {
  try {
    FractionalOrders(p.alpha, p.beta);
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

Plan finish(std::vector<Point> all) {
  Plan plan;
  for (const auto& p : all) (feasible(p) ? plan.points : plan.skipped).push_back(p);
  auto by_orders = [](const Point& x, const Point& y) {
    return x.alpha != y.alpha ? x.alpha < y.alpha : x.beta < y.beta;
  };
  std::sort(plan.points.begin(), plan.points.end(), by_orders);
  std::sort(plan.skipped.begin(), plan.skipped.end(), by_orders);
  return plan;
}

// Snap values that land within rounding of a grid edge, so 0.5 + 5 * 0.1
// becomes 1 and the Laplacian corner stays feasible.
double snap(double v) {
  const double r = std::round(v * 1e12) / 1e12;
  return std::abs(r - v) <= 1e-13 ? r : v;
}

}  // namespace

double Range::at(int i) const {
  if (steps <= 1) return lo;
  if (i == steps - 1) return hi;
  return snap(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1));
}

Range parse_range(const std::string& text) {
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? std::string::npos : text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos)
    throw ConfigError("bad range '" + text + "' (expected lo:hi:steps)");
  Range r;
  r.lo = parse_number(text.substr(0, first), text);
  r.hi = parse_number(text.substr(first + 1, second - first - 1), text);
  const std::string steps = text.substr(second + 1);
  int n = 0;
  auto [ptr, ec] = std::from_chars(steps.data(), steps.data() + steps.size(), n);
  if (ec != std::errc{} || ptr != steps.data() + steps.size() || n < 1)
    throw ConfigError("bad range '" + text + "': steps must be a positive integer");
  r.steps = n;
  if (r.hi < r.lo) throw ConfigError("bad range '" + text + "': hi < lo");
  return r;
}

Plan grid(const Range& alpha, const Range& beta) {
  std::vector<Point> all;
  for (int i = 0; i < alpha.steps; ++i)
    for (int j = 0; j < beta.steps; ++j) all.push_back({alpha.at(i), beta.at(j)});
  return finish(std::move(all));
}

Plan diagonal(const Range& alpha) {
  std::vector<Point> all;
  for (int i = 0; i < alpha.steps; ++i) all.push_back({alpha.at(i), alpha.at(i)});
  return finish(std::move(all));
}

Plan fixed_sum(const Range& alpha, double sum) {
  std::vector<Point> all;
  for (int i = 0; i < alpha.steps; ++i) all.push_back({alpha.at(i), snap(sum - alpha.at(i))});
  return finish(std::move(all));
}

std::vector<Row> run(const Plan& plan, const Settings& settings) {
  const Mesh mesh(settings.a, settings.b, settings.elements);
  std::vector<Row> rows(plan.points.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    Row& row = rows[i];
    row.alpha = plan.points[i].alpha;
    row.beta = plan.points[i].beta;
    try {
      const FractionalOrders orders(row.alpha, row.beta);
      SolveOptions options;
      options.vector_count = 0;
      const Spectrum spectrum = solve_problem(mesh, orders, options);
      const SpectrumReport report = eigensolver::classify(spectrum, orders);
      row.lambda1 = spectrum.pairs.front().value;
      row.real_count = report.real_count;
      row.cone_margin = report.cone_margin;
      double best = std::nan("");
      for (std::size_t k = 0; k < spectrum.pairs.size() && report.is_real[k]; ++k)
        best = std::isnan(best) ? spectrum.pairs[k].value.real() : std::max(best, spectrum.pairs[k].value.real());
      row.largest_real_before_complex = best;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return rows;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + '"';
}

}  // namespace

void write(std::ostream& os, const std::vector<Row>& rows, io::Format format) {
  using io::format_double;
  if (format == io::Format::Csv) {
    os << "alpha,beta,lambda1_re,lambda1_im,real_count,cone_margin,error\n";
    for (const auto& r : rows) {
      os << format_double(r.alpha) << ',' << format_double(r.beta) << ',' << format_double(r.lambda1.real()) << ','
         << format_double(r.lambda1.imag()) << ',';
      if (r.error.empty())
        os << r.real_count;
      os << ',' << format_double(r.cone_margin) << ',' << csv_field(r.error) << '\n';
    }
    return;
  }
  nlohmann::ordered_json points = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json p{{"alpha", r.alpha},
                             {"beta", r.beta},
                             {"lambda1_re", r.lambda1.real()},
                             {"lambda1_im", r.lambda1.imag()},
                             {"real_count", r.real_count},
                             {"cone_margin", r.cone_margin},
                             {"largest_real_before_complex", r.largest_real_before_complex}};
    p["error"] = r.error.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.error);
    points.push_back(std::move(p));
  }
  os << nlohmann::ordered_json{{"points", points}}.dump(2) << '\n';
}

}  // namespace fracspec::sweep
