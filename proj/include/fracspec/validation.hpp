#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace fracspec::validation {

struct Options {
  std::uint64_t seed = 0;
  // Relative size of a seeded random perturbation added to every stiffness
  // matrix the criteria assemble. Nonzero values exist to prove that the
  // suite can fail.
  double perturb_k = 0.0;
};

struct Criterion {
  int id = 0;
  std::string name;
  bool pass = false;
  std::vector<std::pair<std::string, double>> metrics;
  std::string detail;
};

struct Report {
  Options options;
  std::vector<Criterion> criteria;

  bool all_pass() const;
  // Deterministic JSON; contains no timings.
  std::string json() const;
};

// Runs acceptance criteria 1..12. Criterion 12 reruns 1..11 and compares the
// serialized results byte for byte.
Report run(const Options& options);

}  // namespace fracspec::validation
