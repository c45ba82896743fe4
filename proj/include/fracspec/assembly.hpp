#pragma once

#include <iosfwd>
#include <vector>

#include "fracspec/fracops.hpp"
#include "fracspec/matrix.hpp"

namespace fracspec {

// The pair (alpha, beta) of the operator D_{a+}^alpha D_{b-}^beta.
// Valid pairs satisfy 0 <= alpha, beta <= 1 and 1 < alpha + beta <= 2; the
// upper end is reached only by the Laplacian (1, 1).
class FractionalOrders {
 public:
  FractionalOrders(double alpha, double beta);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double s() const { return 0.5 * (alpha_ + beta_); }
  // |beta - alpha| * pi / 2
  double cone_half_angle() const;
  bool symmetric() const { return alpha_ == beta_; }
  bool laplacian() const { return alpha_ == 1.0 && beta_ == 1.0; }

  friend bool operator==(const FractionalOrders&, const FractionalOrders&) = default;

 private:
  double alpha_;
  double beta_;
};

namespace assembly {

// (phi_l, phi_k) for interior hats; tridiagonal with 2h/3 and h/6. N >= 2.
RealMatrix mass_matrix(const Mesh& mesh);

// K_kl = (D_{b-}^beta phi_l, D_{b-}^alpha phi_k), assembled from exact ramp
// integrals. (1, 1) gives the classical (1/h) tridiag(-1, 2, -1).
RealMatrix stiffness_matrix(const Mesh& mesh, const FractionalOrders& orders);

// Validation-only stiffness computed by numerical quadrature of the split
// three-case form. Requires N <= 32 and alpha, beta < 1. Throws AccuracyError
// when two quadrature orders disagree by more than 1e-8 relative.
RealMatrix oracle_stiffness(const Mesh& mesh, const FractionalOrders& orders);

// Load vector (f, phi_k) for f interpolated piecewise linearly; interior rows.
std::vector<Complex> load_vector(const GridFunction& f);

// One row per line, entries space-separated, 17 significant digits.
void write_matrix(std::ostream& os, const RealMatrix& m);

}  // namespace assembly
}  // namespace fracspec
