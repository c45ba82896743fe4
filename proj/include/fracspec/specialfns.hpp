#pragma once

#include <memory>
#include <vector>

namespace fracspec::specialfns {

// Gamma function for real arguments. Throws DomainError at the poles
// 0, -1, -2, ...
double gamma(double x);

// Gauss rule for the weight tau^p on (0, 1).
struct JacobiRule {
  double exponent = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;

  int order() const { return static_cast<int>(nodes.size()); }

  // Sum of w_i * f(tau_i).
  template <class F>
  double apply(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

// Builds the n-point rule for tau^p on (0,1) from the eigen-decomposition of
// the Jacobi (recurrence coefficient) matrix. Requires p in (-1, 2), n >= 1.
JacobiRule gauss_jacobi(double p, int n);

// Same rule, served from a process-wide cache keyed by (p, n). Safe to call
// from several threads.
std::shared_ptr<const JacobiRule> cached_gauss_jacobi(double p, int n);

// Order cap for the doubling sequence 4, 8, ..., 256 used by kernel_primitive.
inline constexpr int kMaxKernelOrder = 256;

// F(p, q, X, d) = integral_0^X t^p (t + d)^q dt for p, q in (-1, 2), X, d >= 0.
// Throws DomainError on invalid exponents and AccuracyError when the
// order-doubling sequence does not settle to 1e-12 relative by n = 256.
double kernel_primitive(double p, double q, double X, double d);

}  // namespace fracspec::specialfns
