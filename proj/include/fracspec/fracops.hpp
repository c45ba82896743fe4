#pragma once

#include <cstddef>
#include <vector>

#include "fracspec/matrix.hpp"

namespace fracspec {

// Uniform grid on (a, b) with N elements, nodes x_j = a + j h.
class Mesh {
 public:
  Mesh(double a, double b, int elements);

  double a() const { return a_; }
  double b() const { return b_; }
  int elements() const { return elements_; }
  double h() const { return h_; }
  std::size_t node_count() const { return static_cast<std::size_t>(elements_) + 1; }

  // x_j; the last node is pinned to b exactly.
  double node(int j) const { return j == elements_ ? b_ : a_ + j * h_; }
  std::vector<double> nodes() const;

  friend bool operator==(const Mesh&, const Mesh&) = default;

 private:
  double a_;
  double b_;
  int elements_;
  double h_;
};

enum class Side { Left, Right };

// One truncated power: coefficient * (x - node)_+^exponent on the left side,
// coefficient * (node - x)_+^exponent on the right side.
struct RampTerm {
  double coefficient;
  double node;
  double exponent;
};

// Finite sum of same-sided truncated powers. Closed under Riemann-Liouville
// integration and differentiation of the matching side.
class RampSum {
 public:
  RampSum() = default;
  RampSum(Side side, std::vector<RampTerm> terms);

  Side side() const { return side_; }
  const std::vector<RampTerm>& terms() const { return terms_; }

  double operator()(double x) const;

  // Term concatenation; both operands must share a side.
  RampSum operator+(const RampSum& other) const;
  RampSum scaled(double factor) const;

 private:
  Side side_ = Side::Right;
  std::vector<RampTerm> terms_;
};

// Complex nodal values on a mesh, endpoints included.
struct GridFunction {
  Mesh mesh;
  std::vector<Complex> values;

  GridFunction(Mesh m, std::vector<Complex> v);
  static GridFunction zeros(const Mesh& m);

  template <class F>
  static GridFunction sample(const Mesh& m, F&& f) {
    std::vector<Complex> v(m.node_count());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(m.node(static_cast<int>(j)));
    return GridFunction(m, std::move(v));
  }
};

namespace fracops {

// Hat function at interior node j (1 <= j <= N-1) as right ramps:
// (1/h)[(x_{j+1}-x)_+ - 2(x_j-x)_+ + (x_{j-1}-x)_+].
RampSum hat_ramps(int j, const Mesh& mesh);

// Same hat written with left ramps.
RampSum hat_ramps_left(int j, const Mesh& mesh);

// Riemann-Liouville derivative of order t in [0, 1.5) on the side of `f`.
// Throws DomainError if some exponent would drop to <= -1.
RampSum rl_derivative(const RampSum& f, double order);

// Riemann-Liouville integral of order t > 0 on the side of `f`.
RampSum rl_integral(const RampSum& f, double order);

// Exact L2(a, b) inner product of two same-sided ramp sums.
double l2_inner_ramps(const RampSum& f, const RampSum& g, const Mesh& mesh);

double l2_norm_ramps(const RampSum& f, const Mesh& mesh);

// Product-integration weights W with (I^t f)(x_j) = sum_k W(j, k) f_k for f
// interpolated piecewise linearly between nodes. Left: integral from a;
// right: integral to b.
RealMatrix rl_integral_weights(const Mesh& mesh, double order, Side side);

// Nodal values of I^t f for t in (0, 2).
GridFunction rl_integral_grid(const GridFunction& f, double order, Side side);

}  // namespace fracops
}  // namespace fracspec
