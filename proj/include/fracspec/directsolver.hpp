#pragma once

#include <functional>
#include <vector>

#include "fracspec/assembly.hpp"
#include "fracspec/fracops.hpp"

namespace fracspec {

// u = I_{b-}^beta (I_{a+}^alpha f + c D_{a+}^{1-alpha} 1) solving A u = f,
// u(a) = u(b) = 0, together with the constant c and the source.
struct DirectSolution {
  GridFunction u;
  Complex c;
  GridFunction f;
};

namespace directsolver {

// Closed-form inverse of A on one mesh. Construction precomputes the
// product-integration weights and the analytic profile of the singular term,
// so repeated applications cost O(N^2).
class InverseOperator {
 public:
  InverseOperator(const FractionalOrders& orders, const Mesh& mesh);

  DirectSolution apply(const GridFunction& f) const;

  const Mesh& mesh() const { return mesh_; }
  const FractionalOrders& orders() const { return orders_; }

 private:
  FractionalOrders orders_;
  Mesh mesh_;
  RealMatrix left_alpha_;
  RealMatrix right_beta_;
  // I_{b-}^beta [(x-a)^{alpha-1} / Gamma(alpha)] at the nodes
  std::vector<double> singular_profile_;
  // -Gamma(alpha) Gamma(beta) (alpha+beta-1) / (b-a)^{alpha+beta-1}
  double constant_factor_;
};

DirectSolution apply_inverse(const GridFunction& f, const FractionalOrders& orders, const Mesh& mesh);

struct PowerResult {
  double lambda;
  GridFunction u;
  int iterations;
  // Smallest interior value of every iterate divided by its maximum; stays
  // positive when the discrete maximum principle holds along the way.
  double min_interior_ratio;
};

// Inverse power iteration with apply_inverse from sin(pi (x-a)/(b-a)).
// Throws ConvergenceError after max_iter iterations.
PowerResult principal_eigen_power(const FractionalOrders& orders, const Mesh& mesh, double tol, int max_iter);

// (u(x_1) - u(a)) / h of the solution for source f on each refinement.
std::vector<double> hopf_slope_probe(const std::function<double(double)>& f, const FractionalOrders& orders, double a,
                                     double b, const std::vector<int>& refinements);

// Discrete L2 inner product sum_j w_j u_j conj(v_j), trapezoidal weights.
Complex trapezoid_inner(const GridFunction& u, const GridFunction& v);

}  // namespace directsolver
}  // namespace fracspec
