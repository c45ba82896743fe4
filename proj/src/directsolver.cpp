#include "fracspec/directsolver.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fracspec/errors.hpp"
#include "fracspec/specialfns.hpp"

namespace fracspec::directsolver {

InverseOperator::InverseOperator(const FractionalOrders& orders, const Mesh& mesh)
    : orders_(orders),
      mesh_(mesh),
      left_alpha_(fracops::rl_integral_weights(mesh, orders.alpha(), Side::Left)),
      right_beta_(fracops::rl_integral_weights(mesh, orders.beta(), Side::Right)),
      singular_profile_(mesh.node_count()),
      constant_factor_(0.0) {
  const double alpha = orders.alpha();
  const double beta = orders.beta();
  const double excess = alpha + beta - 1.0;
  if (!(excess > 0.0)) throw DomainError("apply_inverse: alpha + beta must exceed 1");
  const double ga = specialfns::gamma(alpha);
  const double gb = specialfns::gamma(beta);
  const double length = mesh.b() - mesh.a();
  constant_factor_ = -ga * gb * excess / std::pow(length, excess);

  // (1/(Gamma(alpha) Gamma(beta))) integral_{x_j}^b (t - x_j)^{beta-1} (t - a)^{alpha-1} dt,
  // done analytically so (x - a)^{alpha-1} is never sampled at x = a.
  const int N = mesh.elements();
  for (int j = 0; j <= N; ++j) {
    const double X = static_cast<double>(N - j) * mesh.h();
    const double d = static_cast<double>(j) * mesh.h();
    singular_profile_[static_cast<std::size_t>(j)] =
        specialfns::kernel_primitive(beta - 1.0, alpha - 1.0, X, d) / (ga * gb);
  }
}

DirectSolution InverseOperator::apply(const GridFunction& f) const {
  if (!(f.mesh == mesh_)) throw DomainError("apply_inverse: source lives on a different mesh");
  for (const auto& v : f.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("apply_inverse: non-finite source");

  const std::size_t n = mesh_.node_count();
  std::vector<Complex> g(n), ug(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex s{};
    const auto row = left_alpha_.row(j);
    for (std::size_t k = 0; k <= j; ++k) s += row[k] * f.values[k];
    g[j] = s;
  }
  for (std::size_t j = 0; j < n; ++j) {
    Complex s{};
    const auto row = right_beta_.row(j);
    for (std::size_t k = j; k < n; ++k) s += row[k] * g[k];
    ug[j] = s;
  }
  const Complex c = constant_factor_ * ug[0];
  std::vector<Complex> u(n);
  for (std::size_t j = 0; j < n; ++j) u[j] = ug[j] + c * singular_profile_[j];
  return {GridFunction(mesh_, std::move(u)), c, f};
}

DirectSolution apply_inverse(const GridFunction& f, const FractionalOrders& orders, const Mesh& mesh) {
  return InverseOperator(orders, mesh).apply(f);
}

Complex trapezoid_inner(const GridFunction& u, const GridFunction& v) {
  if (!(u.mesh == v.mesh)) throw DomainError("trapezoid_inner: meshes differ");
  const std::size_t n = u.values.size();
  Complex s{};
  for (std::size_t j = 0; j < n; ++j) {
    const double w = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
    s += w * u.values[j] * std::conj(v.values[j]);
  }
  return s * u.mesh.h();
}

namespace {

double interior_min_ratio(const GridFunction& u) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t j = 1; j + 1 < u.values.size(); ++j) {
    lo = std::min(lo, u.values[j].real());
    hi = std::max(hi, std::abs(u.values[j]));
  }
  return hi > 0.0 ? lo / hi : 0.0;
}

}  // namespace

PowerResult principal_eigen_power(const FractionalOrders& orders, const Mesh& mesh, double tol, int max_iter) {
  if (!(tol > 0.0)) throw DomainError("principal_eigen_power: tol must be > 0");
  if (max_iter < 1) throw DomainError("principal_eigen_power: max_iter must be >= 1");
  const InverseOperator inverse(orders, mesh);
  const double a = mesh.a(), length = mesh.b() - mesh.a();
  GridFunction u = GridFunction::sample(mesh, [&](double x) { return Complex{std::sin(std::numbers::pi * (x - a) / length)}; });
  u.values.front() = 0.0;
  u.values.back() = 0.0;

  double previous = std::numeric_limits<double>::quiet_NaN();
  double min_ratio = interior_min_ratio(u);
  for (int it = 1; it <= max_iter; ++it) {
    GridFunction w = inverse.apply(u).u;
    const double lambda = (trapezoid_inner(u, u) / trapezoid_inner(w, u)).real();
    const double norm = std::sqrt(trapezoid_inner(w, w).real());
    for (auto& v : w.values) v /= norm;
    u = std::move(w);
    min_ratio = std::min(min_ratio, interior_min_ratio(u));
    if (std::isfinite(previous) && std::abs(lambda - previous) <= tol * std::abs(lambda))
      return {lambda, std::move(u), it, min_ratio};
    if (it == max_iter) {
      std::ostringstream os;
      os << "principal_eigen_power: no convergence in " << max_iter << " iterations (last estimates " << previous
         << ", " << lambda << ")";
      throw ConvergenceError(os.str());
    }
    previous = lambda;
  }
  throw ConvergenceError("principal_eigen_power: unreachable");
}

std::vector<double> hopf_slope_probe(const std::function<double(double)>& f, const FractionalOrders& orders, double a,
                                     double b, const std::vector<int>& refinements) {
  std::vector<double> slopes;
  slopes.reserve(refinements.size());
  for (int N : refinements) {
    const Mesh mesh(a, b, N);
    const GridFunction source = GridFunction::sample(mesh, [&](double x) { return Complex{f(x)}; });
    const DirectSolution sol = apply_inverse(source, orders, mesh);
    slopes.push_back((sol.u.values[1].real() - sol.u.values[0].real()) / mesh.h());
  }
  return slopes;
}

}  // namespace fracspec::directsolver
