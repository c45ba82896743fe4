// Validation-only stiffness: numerical quadrature of the split sesquilinear
// form, independent of kernel_primitive.
//
//   beta > alpha:  (D_{b-}^s phi_l, D_{a+}^sigma D_{b-}^alpha phi_k),  sigma = (beta - alpha)/2
//   beta = alpha:  (D_{b-}^alpha phi_l, D_{b-}^alpha phi_k)
//   beta < alpha:  (D_{a+}^sigma D_{b-}^beta phi_l, D_{b-}^s phi_k),   sigma = (alpha - beta)/2
//
// The mixed factor D_{a+}^sigma g of g = D_{b-}^t phi (an exact ramp sum) is
// evaluated as g(a) (x-a)^{-sigma} / Gamma(1-sigma) + I_{a+}^{1-sigma} g'(x),
// with the left integral done by panels graded toward its singular points.

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracspec/assembly.hpp"
#include "fracspec/errors.hpp"
#include "fracspec/parallel.hpp"
#include "fracspec/specialfns.hpp"

namespace fracspec::assembly {

namespace {

constexpr int kGradingLevels = 12;
constexpr int kOuterLevels = 24;
constexpr double kGradingRatio = 0.5;

struct Node {
  double x;
  double w;
};

// Rule for integral_0^W f(r) dr graded toward r = 0; the innermost panel
// carries the weight r^e. Nodes are returned as distances r.
void graded_rule(double width, int levels, double e, int n, std::vector<Node>& out) {
  const auto legendre = specialfns::cached_gauss_jacobi(0.0, n);
  double outer = width;
  for (int k = 0; k < levels; ++k) {
    const double inner = outer * kGradingRatio;
    const double len = outer - inner;
    for (int i = 0; i < n; ++i) out.push_back({inner + len * legendre->nodes[i], len * legendre->weights[i]});
    outer = inner;
  }
  if (e == 0.0) {
    for (int i = 0; i < n; ++i) out.push_back({outer * legendre->nodes[i], outer * legendre->weights[i]});
  } else {
    const auto jacobi = specialfns::cached_gauss_jacobi(e, n);
    for (int i = 0; i < n; ++i) {
      const double r = outer * jacobi->nodes[i];
      // f(r) = r^e g(r): the weight absorbs r^e, so divide it back out.
      out.push_back({r, outer * jacobi->weights[i] * std::pow(outer, e) / std::pow(r, e)});
    }
  }
}

// Outer rule over (a, b): every element is split at its midpoint and each
// half graded toward its mesh node. The panel touching a absorbs (x-a)^{e_a}.
std::vector<Node> outer_rule(const Mesh& mesh, double e_a, int n) {
  std::vector<Node> rule;
  std::vector<Node> half;
  for (int el = 0; el < mesh.elements(); ++el) {
    const double left = mesh.node(el);
    const double right = mesh.node(el + 1);
    const double halfw = 0.5 * (right - left);
    half.clear();
    graded_rule(halfw, kOuterLevels, el == 0 ? e_a : 0.0, n, half);
    for (const auto& q : half) rule.push_back({left + q.x, q.w});
    half.clear();
    graded_rule(halfw, kOuterLevels, 0.0, n, half);
    for (const auto& q : half) rule.push_back({right - q.x, q.w});
  }
  return rule;
}

// D_{a+}^sigma g at x for a right ramp sum g with exponents in (0, 1].
class MixedFactor {
 public:
  MixedFactor(const RampSum& g, double sigma, double a, int n)
      : g_(g), sigma_(sigma), a_(a), n_(n), ga_(g(a)), gamma_(specialfns::gamma(1.0 - sigma)) {
    for (const auto& t : g.terms()) slope_.push_back({-t.coefficient * t.exponent, t.node, t.exponent - 1.0});
  }

  double operator()(double x) const {
    double total = ga_ * std::pow(x - a_, -sigma_);
    std::vector<Node> rule;
    for (const auto& t : slope_) {
      const double m = std::min(x, t.node);
      if (m <= a_ || t.coefficient == 0.0) continue;
      const double dx = x - m;       // offset of the kernel singularity
      const double dn = t.node - m;  // offset of the ramp singularity
      double e = 0.0;
      if (dx == 0.0) e -= sigma_;
      if (dn == 0.0) e += t.exponent;
      const double gap = std::max(dx, dn);
      int levels = kGradingLevels;
      if (gap > 0.0) levels = std::clamp(static_cast<int>(std::ceil(std::log2((m - a_) / gap))) + 2, kGradingLevels, 60);
      rule.clear();
      graded_rule(m - a_, levels, e, n_, rule);
      double s = 0.0;
      for (const auto& q : rule) s += q.w * std::pow(q.x + dx, -sigma_) * std::pow(q.x + dn, t.exponent);
      total += t.coefficient * s;
    }
    return total / gamma_;
  }

 private:
  RampSum g_;
  double sigma_;
  double a_;
  int n_;
  double ga_;
  double gamma_;
  std::vector<RampTerm> slope_;
};

RealMatrix oracle_with_order(const Mesh& mesh, const FractionalOrders& orders, int n) {
  const double alpha = orders.alpha();
  const double beta = orders.beta();
  const double s = orders.s();
  const double sigma = std::abs(beta - alpha) / 2.0;
  const std::size_t dim = static_cast<std::size_t>(mesh.elements()) - 1;
  const auto rule = outer_rule(mesh, sigma > 0.0 ? -sigma : 0.0, n);

  // P(l, q): factor built from phi_l, Q(k, q): factor built from phi_k.
  RealMatrix P(dim, rule.size()), Q(dim, rule.size());
  parallel_for(dim, [&](std::size_t i) {
    const RampSum hat = fracops::hat_ramps(static_cast<int>(i) + 1, mesh);
    auto fill_exact = [&](RealMatrix& target, double order) {
      const RampSum d = fracops::rl_derivative(hat, order);
      for (std::size_t q = 0; q < rule.size(); ++q) target(i, q) = d(rule[q].x);
    };
    auto fill_mixed = [&](RealMatrix& target, double inner) {
      const MixedFactor mixed(fracops::rl_derivative(hat, inner), sigma, mesh.a(), n);
      for (std::size_t q = 0; q < rule.size(); ++q) target(i, q) = mixed(rule[q].x);
    };
    if (beta > alpha) {
      fill_exact(P, s);
      fill_mixed(Q, alpha);
    } else if (beta < alpha) {
      fill_mixed(P, beta);
      fill_exact(Q, s);
    } else {
      fill_exact(P, alpha);
      fill_exact(Q, alpha);
    }
  });

  RealMatrix k(dim, dim);
  for (std::size_t row = 0; row < dim; ++row) {
    for (std::size_t col = 0; col < dim; ++col) {
      double acc = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) acc += rule[q].w * Q(row, q) * P(col, q);
      k(row, col) = acc;
    }
  }
  return k;
}

}  // namespace

RealMatrix oracle_stiffness(const Mesh& mesh, const FractionalOrders& orders) {
  if (mesh.elements() < 2 || mesh.elements() > 32) throw DomainError("oracle_stiffness: need 2 <= N <= 32");
  if (!(orders.alpha() < 1.0 && orders.beta() < 1.0))
    throw DomainError("oracle_stiffness: needs alpha, beta < 1");

  const RealMatrix coarse = oracle_with_order(mesh, orders, 16);
  const RealMatrix fine = oracle_with_order(mesh, orders, 24);
  const double floor = 1e-12 * fine.max_abs();
  for (std::size_t i = 0; i < fine.rows(); ++i) {
    for (std::size_t j = 0; j < fine.cols(); ++j) {
      const double diff = std::abs(fine(i, j) - coarse(i, j));
      if (diff > 1e-8 * std::max(std::abs(fine(i, j)), floor)) {
        std::ostringstream os;
        os << "oracle_stiffness: graded quadrature stalled at entry (" << i + 1 << ", " << j + 1 << ")";
        throw AccuracyError(os.str(), coarse(i, j), fine(i, j));
      }
    }
  }
  return fine;
}

}  // namespace fracspec::assembly
