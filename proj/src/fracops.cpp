#include "fracspec/fracops.hpp"

#include <cmath>
#include <sstream>

#include "fracspec/errors.hpp"
#include "fracspec/specialfns.hpp"

namespace fracspec {

Mesh::Mesh(double a, double b, int elements) : a_(a), b_(b), elements_(elements), h_(0.0) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) throw DomainError("mesh: need finite a < b");
  if (elements < 1) throw DomainError("mesh: need at least one element");
  h_ = (b - a) / elements;
}

std::vector<double> Mesh::nodes() const {
  std::vector<double> x(node_count());
  for (int j = 0; j <= elements_; ++j) x[static_cast<std::size_t>(j)] = node(j);
  return x;
}

RampSum::RampSum(Side side, std::vector<RampTerm> terms) : side_(side), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (!(t.exponent > -1.0)) throw DomainError("ramp sum: exponents must exceed -1");
  }
}

double RampSum::operator()(double x) const {
  double s = 0.0;
  for (const auto& t : terms_) {
    const double arg = side_ == Side::Right ? t.node - x : x - t.node;
    if (arg > 0.0) s += t.coefficient * std::pow(arg, t.exponent);
  }
  return s;
}

RampSum RampSum::operator+(const RampSum& other) const {
  if (other.terms_.empty()) return *this;
  if (terms_.empty()) return other;
  if (side_ != other.side_) throw DomainError("ramp sum: cannot add left and right ramps");
  std::vector<RampTerm> terms = terms_;
  terms.insert(terms.end(), other.terms_.begin(), other.terms_.end());
  return {side_, std::move(terms)};
}

RampSum RampSum::scaled(double factor) const {
  std::vector<RampTerm> terms = terms_;
  for (auto& t : terms) t.coefficient *= factor;
  return {side_, std::move(terms)};
}

GridFunction::GridFunction(Mesh m, std::vector<Complex> v) : mesh(m), values(std::move(v)) {
  if (values.size() != mesh.node_count()) throw DomainError("grid function: need one value per node");
}

GridFunction GridFunction::zeros(const Mesh& m) { return {m, std::vector<Complex>(m.node_count())}; }

namespace fracops {

namespace {

void check_interior(int j, const Mesh& mesh) {
  if (j < 1 || j >= mesh.elements()) {
    std::ostringstream os;
    os << "hat index " << j << " is not interior (1.." << mesh.elements() - 1 << ")";
    throw DomainError(os.str());
  }
}

// A^s - B^s for A >= B >= 0 without cancellation when A and B are close.
double diff_pow(double A, double B, double s) {
  if (B <= 0.0) return std::pow(A, s);
  return std::pow(B, s) * std::expm1(s * std::log1p((A - B) / B));
}

}  // namespace

RampSum hat_ramps(int j, const Mesh& mesh) {
  check_interior(j, mesh);
  const double inv_h = 1.0 / mesh.h();
  return {Side::Right,
          {{inv_h, mesh.node(j + 1), 1.0}, {-2.0 * inv_h, mesh.node(j), 1.0}, {inv_h, mesh.node(j - 1), 1.0}}};
}

RampSum hat_ramps_left(int j, const Mesh& mesh) {
  check_interior(j, mesh);
  const double inv_h = 1.0 / mesh.h();
  return {Side::Left,
          {{inv_h, mesh.node(j - 1), 1.0}, {-2.0 * inv_h, mesh.node(j), 1.0}, {inv_h, mesh.node(j + 1), 1.0}}};
}

RampSum rl_derivative(const RampSum& f, double order) {
  if (!(order >= 0.0 && order < 1.5)) throw DomainError("rl_derivative: order must lie in [0, 1.5)");
  if (order == 0.0) return f;
  std::vector<RampTerm> terms;
  terms.reserve(f.terms().size());
  for (const auto& t : f.terms()) {
    const double p = t.exponent - order;
    if (!(p > -1.0)) {
      std::ostringstream os;
      os << "rl_derivative: exponent " << t.exponent << " minus order " << order << " is not > -1";
      throw DomainError(os.str());
    }
    const double c = t.coefficient * specialfns::gamma(t.exponent + 1.0) / specialfns::gamma(p + 1.0);
    terms.push_back({c, t.node, p});
  }
  return {f.side(), std::move(terms)};
}

RampSum rl_integral(const RampSum& f, double order) {
  if (!(order > 0.0) || !std::isfinite(order)) throw DomainError("rl_integral: order must be > 0");
  std::vector<RampTerm> terms;
  terms.reserve(f.terms().size());
  for (const auto& t : f.terms()) {
    const double p = t.exponent + order;
    const double c = t.coefficient * specialfns::gamma(t.exponent + 1.0) / specialfns::gamma(p + 1.0);
    terms.push_back({c, t.node, p});
  }
  return {f.side(), std::move(terms)};
}

double l2_inner_ramps(const RampSum& f, const RampSum& g, const Mesh& mesh) {
  if (f.terms().empty() || g.terms().empty()) return 0.0;
  if (f.side() != g.side()) throw DomainError("l2_inner_ramps: operands must share a side");
  const bool right = f.side() == Side::Right;
  double total = 0.0;
  for (const auto& s : f.terms()) {
    for (const auto& t : g.terms()) {
      // Substitute t = (nearest node) - x so the closer ramp becomes t^p.
      const bool s_inner = right ? s.node <= t.node : s.node >= t.node;
      const RampTerm& inner = s_inner ? s : t;
      const RampTerm& outer = s_inner ? t : s;
      const double X = right ? inner.node - mesh.a() : mesh.b() - inner.node;
      if (X <= 0.0) continue;
      const double d = std::abs(outer.node - inner.node);
      if (d == 0.0 && !(inner.exponent + outer.exponent > -1.0))
        throw DomainError("l2_inner_ramps: product of coincident ramps is not integrable");
      total += s.coefficient * t.coefficient * specialfns::kernel_primitive(inner.exponent, outer.exponent, X, d);
    }
  }
  return total;
}

double l2_norm_ramps(const RampSum& f, const Mesh& mesh) {
  return std::sqrt(std::max(0.0, l2_inner_ramps(f, f, mesh)));
}

RealMatrix rl_integral_weights(const Mesh& mesh, double order, Side side) {
  if (!(order > 0.0 && order < 2.0)) throw DomainError("rl_integral_grid: order must lie in (0, 2)");
  const std::size_t n = mesh.node_count();
  const double h = mesh.h();
  const double scale = 1.0 / specialfns::gamma(order);
  RealMatrix w(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    // Elements on the integration side of x_j; `far`/`near` are the distances
    // of the element ends from x_j.
    const std::size_t first = side == Side::Left ? 0 : j;
    const std::size_t last = side == Side::Left ? j : n - 1;
    for (std::size_t k = first; k < last; ++k) {
      const double xl = mesh.node(static_cast<int>(k));
      const double xr = mesh.node(static_cast<int>(k + 1));
      const double xj = mesh.node(static_cast<int>(j));
      const double far = side == Side::Left ? xj - xl : xr - xj;
      const double near = side == Side::Left ? xj - xr : xl - xj;
      const double m0 = diff_pow(far, near, order) / order;
      // integral of u^{t-1} (far - u) / h over (near, far)
      const double m1 = (far * m0 - diff_pow(far, near, order + 1.0) / (order + 1.0)) / h;
      // m1 belongs to the element end nearer x_j.
      if (side == Side::Left) {
        w(j, k) += scale * (m0 - m1);
        w(j, k + 1) += scale * m1;
      } else {
        w(j, k) += scale * m1;
        w(j, k + 1) += scale * (m0 - m1);
      }
    }
  }
  return w;
}

GridFunction rl_integral_grid(const GridFunction& f, double order, Side side) {
  const RealMatrix w = rl_integral_weights(f.mesh, order, side);
  std::vector<Complex> out(f.values.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    Complex s{};
    const auto row = w.row(j);
    for (std::size_t k = 0; k < row.size(); ++k) s += row[k] * f.values[k];
    out[j] = s;
  }
  return {f.mesh, std::move(out)};
}

}  // namespace fracops
}  // namespace fracspec
