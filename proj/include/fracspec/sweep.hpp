#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracspec/export.hpp"

namespace fracspec::sweep {

// Inclusive range lo:hi with `steps` evenly spaced points; steps = 1 means lo.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 1;

  double at(int i) const;
};

// Parses "lo:hi:steps". Throws ConfigError.
Range parse_range(const std::string& text);

struct Point {
  double alpha;
  double beta;
};

struct Plan {
  std::vector<Point> points;   // feasible, sorted by (alpha, beta)
  std::vector<Point> skipped;  // infeasible grid points
};

// Full alpha x beta grid.
Plan grid(const Range& alpha, const Range& beta);
// beta = alpha.
Plan diagonal(const Range& alpha);
// beta = sum - alpha.
Plan fixed_sum(const Range& alpha, double sum);

struct Row {
  double alpha;
  double beta;
  Complex lambda1{std::nan(""), std::nan("")};
  std::size_t real_count = 0;
  double cone_margin = std::nan("");
  // Largest real eigenvalue whose modulus is below every non-real one.
  double largest_real_before_complex = std::nan("");
  std::string error;  // empty on success
};

struct Settings {
  double a = 0.0;
  double b = 1.0;
  int elements = 200;
};

// Solves every point of the plan in parallel; rows come back in plan order.
// A failing point records its message in `error` and the run continues.
std::vector<Row> run(const Plan& plan, const Settings& settings);

// alpha,beta,lambda1_re,lambda1_im,real_count,cone_margin,error
void write(std::ostream& os, const std::vector<Row>& rows, io::Format format);

}  // namespace fracspec::sweep
