#include "fracspec/specialfns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <sstream>
#include <utility>

#include "fracspec/errors.hpp"

namespace fracspec::specialfns {

double gamma(double x) {
  if (!std::isfinite(x)) throw DomainError("gamma: non-finite argument");
  if (x <= 0.0 && x == std::floor(x)) {
    std::ostringstream os;
    os << "gamma: pole at x = " << x;
    throw DomainError(os.str());
  }
  return std::tgamma(x);
}

namespace {

// Implicit QL on a symmetric tridiagonal matrix. On return `diag` holds the
// eigenvalues and `first` the first component of each normalized eigenvector.
void tridiagonal_ql(std::vector<double>& diag, std::vector<double>& off, std::vector<double>& first) {
  const std::size_t n = diag.size();
  const double eps = std::numeric_limits<double>::epsilon();
  first.assign(n, 0.0);
  first[0] = 1.0;
  off.resize(n, 0.0);
  off[n - 1] = 0.0;

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m = l;
    for (;;) {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
        if (std::abs(off[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iter > 60) throw ConvergenceError("gauss_jacobi: tridiagonal QL did not converge");

      double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
      double r = std::hypot(g, 1.0);
      g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        double f = s * off[i];
        const double b = c * off[i];
        r = std::hypot(f, g);
        off[i + 1] = r;
        if (r == 0.0) {
          diag[i + 1] -= p;
          off[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = diag[i + 1] - p;
        r = (diag[i] - g) * s + 2.0 * c * b;
        p = s * r;
        diag[i + 1] = g + p;
        g = c * r - b;
        f = first[i + 1];
        first[i + 1] = s * first[i] + c * f;
        first[i] = c * first[i] - s * f;
      }
      if (underflow) continue;
      diag[l] -= p;
      off[l] = g;
      off[m] = 0.0;
    }
  }
}

void check_exponent(double p, const char* who) {
  if (!(p > -1.0 && p < 2.0)) {
    std::ostringstream os;
    os << who << ": exponent " << p << " outside (-1, 2)";
    throw DomainError(os.str());
  }
}

}  // namespace

JacobiRule gauss_jacobi(double p, int n) {
  check_exponent(p, "gauss_jacobi");
  if (n < 1) throw DomainError("gauss_jacobi: order must be >= 1");

  // Monic Jacobi recurrence for (1-x)^0 (1+x)^p on (-1,1), mapped to (0,1).
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> diag(un), off(un, 0.0);
  diag[0] = 0.5 * (1.0 + p / (p + 2.0));
  for (std::size_t k = 1; k < un; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + p;
    diag[k] = 0.5 * (1.0 + p * p / (s * (s + 2.0)));
  }
  for (std::size_t k = 1; k < un; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + p;
    const double beta = 4.0 * kk * kk * (kk + p) * (kk + p) / (s * s * (s + 1.0) * (s - 1.0));
    off[k - 1] = 0.5 * std::sqrt(beta);
  }

  std::vector<double> first;
  tridiagonal_ql(diag, off, first);

  const double mu0 = 1.0 / (p + 1.0);
  std::vector<std::size_t> order(un);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return diag[i] < diag[j]; });

  JacobiRule rule;
  rule.exponent = p;
  rule.nodes.reserve(un);
  rule.weights.reserve(un);
  for (std::size_t i : order) {
    rule.nodes.push_back(diag[i]);
    rule.weights.push_back(mu0 * first[i] * first[i]);
  }
  return rule;
}

std::shared_ptr<const JacobiRule> cached_gauss_jacobi(double p, int n) {
  static std::shared_mutex mutex;
  static std::map<std::pair<double, int>, std::shared_ptr<const JacobiRule>> cache;
  const auto key = std::make_pair(p, n);
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  // Built outside the lock; a racing thread may build the same rule twice.
  auto rule = std::make_shared<const JacobiRule>(gauss_jacobi(p, n));
  std::unique_lock lock(mutex);
  return cache.try_emplace(key, std::move(rule)).first->second;
}

namespace {

// Integral over (0,1) of tau^p g(tau) by order doubling 4, 8, ..., 256.
template <class G>
double doubling_jacobi(double p, G&& g, const char* context) {
  double previous = cached_gauss_jacobi(p, 4)->apply(g);
  for (int n = 8; n <= kMaxKernelOrder; n *= 2) {
    const double current = cached_gauss_jacobi(p, n)->apply(g);
    if (std::abs(current - previous) <= 1e-12 * std::abs(current)) return current;
    previous = current;
    if (n == kMaxKernelOrder) {
      std::ostringstream os;
      os << context << ": no agreement to 1e-12 by order " << kMaxKernelOrder;
      throw AccuracyError(os.str(), previous, current);
    }
  }
  return previous;
}

}  // namespace

double kernel_primitive(double p, double q, double X, double d) {
  check_exponent(p, "kernel_primitive");
  check_exponent(q, "kernel_primitive");
  if (!(X >= 0.0) || !(d >= 0.0) || !std::isfinite(X) || !std::isfinite(d))
    throw DomainError("kernel_primitive: X and d must be finite and >= 0");
  if (d == 0.0) {
    if (!(p + q > -1.0)) throw DomainError("kernel_primitive: p + q must exceed -1 when d = 0");
    return std::pow(X, p + q + 1.0) / (p + q + 1.0);
  }
  if (X == 0.0) return 0.0;

  // On (0, min(X, d)) the factor (t + d)^q stays a distance >= d from its
  // branch point, so the tau^p rule converges quickly.
  const double head = std::min(X, d);
  double total = std::pow(head, p + 1.0) *
                 doubling_jacobi(p, [&](double tau) { return std::pow(head * tau + d, q); }, "kernel_primitive");

  // When d << X the rest is split into dyadic panels [L, 2L]; both factors are
  // analytic on each panel with singularities a panel-width away.
  for (double left = head; left < X;) {
    const double right = std::min(2.0 * left, X);
    const double width = right - left;
    total += width * doubling_jacobi(
                         0.0,
                         [&](double tau) {
                           const double t = left + width * tau;
                           return std::pow(t, p) * std::pow(t + d, q);
                         },
                         "kernel_primitive");
    left = right;
  }
  return total;
}

}  // namespace fracspec::specialfns
