#include "fracspec/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "fracspec/errors.hpp"

namespace fracspec {

const char* region_name(Region r) {
  switch (r) {
    case Region::Accurate:
      return "accurate";
    case Region::Transitional:
      return "transitional";
    case Region::Inaccurate:
      return "inaccurate";
  }
  return "?";
}

namespace eigensolver {

BandFactor cholesky_band(const RealMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0 || m.cols() != n) throw DomainError("cholesky_band: need a nonempty square matrix");
  BandFactor l;
  l.diag.resize(n);
  l.sub.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    double pivot = m(i, i);
    if (i > 0) pivot -= l.sub[i - 1] * l.sub[i - 1];
    if (!(pivot > 0.0)) {
      std::ostringstream os;
      os << "cholesky_band: non-positive pivot " << pivot << " at row " << i;
      throw NotSpdError(os.str());
    }
    l.diag[i] = std::sqrt(pivot);
    if (i + 1 < n) l.sub[i] = m(i + 1, i) / l.diag[i];
  }
  return l;
}

namespace {

// Solves L y = b in place.
template <class T>
void forward_bidiagonal(const BandFactor& l, std::span<T> y) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (i > 0) y[i] -= l.sub[i - 1] * y[i - 1];
    y[i] /= l.diag[i];
  }
}

}  // namespace

RealMatrix reduce_standard(const RealMatrix& k, const BandFactor& l) {
  const std::size_t n = k.rows();
  if (k.cols() != n || l.diag.size() != n) throw DomainError("reduce_standard: dimension mismatch");
  for (double d : l.diag)
    if (d == 0.0) throw NotSpdError("reduce_standard: singular factor");
  // Y = L^{-1} K column by column, then C = (L^{-1} Y^T)^T.
  RealMatrix yt = k.transposed();
  for (std::size_t j = 0; j < n; ++j) forward_bidiagonal<double>(l, yt.row(j));
  RealMatrix c = yt.transposed();
  for (std::size_t i = 0; i < n; ++i) forward_bidiagonal<double>(l, c.row(i));
  return c;
}

namespace {

void hessenberg(RealMatrix& h) {
  const std::size_t n = h.rows();
  std::vector<double> ort(n, 0.0);
  for (std::size_t m = 1; m + 1 < n; ++m) {
    double scale = 0.0;
    for (std::size_t i = m; i < n; ++i) scale += std::abs(h(i, m - 1));
    if (scale == 0.0) continue;
    double hh = 0.0;
    for (std::size_t i = n; i-- > m;) {
      ort[i] = h(i, m - 1) / scale;
      hh += ort[i] * ort[i];
    }
    double g = std::sqrt(hh);
    if (ort[m] > 0) g = -g;
    hh -= ort[m] * g;
    ort[m] -= g;
    // H = (I - u u^T / hh) H (I - u u^T / hh)
    for (std::size_t j = m; j < n; ++j) {
      double f = 0.0;
      for (std::size_t i = n; i-- > m;) f += ort[i] * h(i, j);
      f /= hh;
      for (std::size_t i = m; i < n; ++i) h(i, j) -= f * ort[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double f = 0.0;
      for (std::size_t j = n; j-- > m;) f += ort[j] * h(i, j);
      f /= hh;
      for (std::size_t j = m; j < n; ++j) h(i, j) -= f * ort[j];
    }
    h(m, m - 1) = scale * g;
    for (std::size_t i = m + 1; i < n; ++i) h(i, m - 1) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix, eigenvalues only.
std::vector<Complex> hessenberg_qr(RealMatrix& h, long cap) {
  const int nn = static_cast<int>(h.rows());
  std::vector<Complex> values(static_cast<std::size_t>(nn));
  const double eps = std::numeric_limits<double>::epsilon();
  auto H = [&](int i, int j) -> double& { return h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };

  double norm = 0.0;
  for (int i = 0; i < nn; ++i)
    for (int j = std::max(i - 1, 0); j < nn; ++j) norm += std::abs(H(i, j));

  long sweeps = 0;
  int n = nn - 1;
  int iter = 0;
  double exshift = 0.0;
  double p = 0, q = 0, r = 0, s = 0, z = 0, w, x, y;

  while (n >= 0) {
    // Look for a single small subdiagonal element.
    int l = n;
    while (l > 0) {
      s = std::abs(H(l - 1, l - 1)) + std::abs(H(l, l));
      if (s == 0.0) s = norm;
      if (std::abs(H(l, l - 1)) < eps * s) break;
      --l;
    }

    if (l == n) {
      values[static_cast<std::size_t>(n)] = {H(n, n) + exshift, 0.0};
      --n;
      iter = 0;
    } else if (l == n - 1) {
      w = H(n, n - 1) * H(n - 1, n);
      p = (H(n - 1, n - 1) - H(n, n)) / 2.0;
      q = p * p + w;
      z = std::sqrt(std::abs(q));
      x = H(n, n) + exshift;
      if (q >= 0) {
        z = p >= 0 ? p + z : p - z;
        const double first = x + z;
        const double second = z != 0.0 ? x - w / z : first;
        values[static_cast<std::size_t>(n - 1)] = {first, 0.0};
        values[static_cast<std::size_t>(n)] = {second, 0.0};
      } else {
        values[static_cast<std::size_t>(n - 1)] = {x + p, z};
        values[static_cast<std::size_t>(n)] = {x + p, -z};
      }
      n -= 2;
      iter = 0;
    } else {
      if (++sweeps > cap) {
        std::ostringstream os;
        os << "eig_nonsymmetric: no convergence after " << cap << " sweeps; unconverged block rows " << l << ".." << n;
        throw ConvergenceError(os.str());
      }
      x = H(n, n);
      y = H(n - 1, n - 1);
      w = H(n, n - 1) * H(n - 1, n);

      // Exceptional shifts.
      if (iter == 10) {
        exshift += x;
        for (int i = 0; i <= n; ++i) H(i, i) -= x;
        s = std::abs(H(n, n - 1)) + std::abs(H(n - 1, n - 2));
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }
      if (iter == 30) {
        s = (y - x) / 2.0;
        s = s * s + w;
        if (s > 0) {
          s = std::sqrt(s);
          if (y < x) s = -s;
          s = x - w / ((y - x) / 2.0 + s);
          for (int i = 0; i <= n; ++i) H(i, i) -= s;
          exshift += s;
          x = y = w = 0.964;
        }
      }
      ++iter;

      // Look for two consecutive small subdiagonal elements.
      int m = n - 2;
      while (m >= l) {
        z = H(m, m);
        r = x - z;
        s = y - z;
        p = (r * s - w) / H(m + 1, m) + H(m, m + 1);
        q = H(m + 1, m + 1) - z - r - s;
        r = H(m + 2, m + 1);
        s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        if (std::abs(H(m, m - 1)) * (std::abs(q) + std::abs(r)) <
            eps * (std::abs(p) * (std::abs(H(m - 1, m - 1)) + std::abs(z) + std::abs(H(m + 1, m + 1)))))
          break;
        --m;
      }
      for (int i = m + 2; i <= n; ++i) {
        H(i, i - 2) = 0.0;
        if (i > m + 2) H(i, i - 3) = 0.0;
      }

      // Double QR step on rows l..n and columns m..n.
      for (int k = m; k <= n - 1; ++k) {
        const bool notlast = k != n - 1;
        if (k != m) {
          p = H(k, k - 1);
          q = H(k + 1, k - 1);
          r = notlast ? H(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x == 0.0) continue;
          p /= x;
          q /= x;
          r /= x;
        }
        s = std::sqrt(p * p + q * q + r * r);
        if (p < 0) s = -s;
        if (s == 0.0) continue;
        if (k != m)
          H(k, k - 1) = -s * x;
        else if (l != m)
          H(k, k - 1) = -H(k, k - 1);
        p += s;
        x = p / s;
        y = q / s;
        z = r / s;
        q /= p;
        r /= p;
        for (int j = k; j <= n; ++j) {
          p = H(k, j) + q * H(k + 1, j);
          if (notlast) {
            p += r * H(k + 2, j);
            H(k + 2, j) -= p * z;
          }
          H(k, j) -= p * x;
          H(k + 1, j) -= p * y;
        }
        for (int i = l; i <= std::min(n, k + 3); ++i) {
          p = x * H(i, k) + y * H(i, k + 1);
          if (notlast) {
            p += z * H(i, k + 2);
            H(i, k + 2) -= p * r;
          }
          H(i, k) -= p;
          H(i, k + 1) -= p * q;
        }
      }
    }
  }
  return values;
}

}  // namespace

std::vector<Complex> eig_nonsymmetric(const RealMatrix& c, long max_sweeps) {
  if (c.rows() != c.cols()) throw DomainError("eig_nonsymmetric: matrix must be square");
  for (double v : c.data())
    if (!std::isfinite(v)) throw DomainError("eig_nonsymmetric: non-finite entry");
  if (c.rows() == 0) return {};
  RealMatrix h = c;
  hessenberg(h);
  return hessenberg_qr(h, max_sweeps > 0 ? max_sweeps : 30L * static_cast<long>(c.rows()));
}

namespace {

double norm2(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

std::vector<Complex> times(const RealMatrix& a, const std::vector<Complex>& x) {
  std::vector<Complex> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex s{};
    const auto row = a.row(i);
    for (std::size_t j = 0; j < row.size(); ++j)
      if (row[j] != 0.0) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

// Dense LU with partial pivoting, factored in place.
struct ComplexLu {
  ComplexMatrix lu;
  std::vector<std::size_t> perm;

  ComplexLu(ComplexMatrix a, double tiny) : lu(std::move(a)), perm(lu.rows()) {
    const std::size_t n = lu.rows();
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t piv = k;
      double best = std::abs(lu(k, k));
      for (std::size_t i = k + 1; i < n; ++i) {
        const double v = std::abs(lu(i, k));
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (piv != k) {
        std::swap_ranges(lu.row(k).begin(), lu.row(k).end(), lu.row(piv).begin());
        std::swap(perm[k], perm[piv]);
      }
      // An exact eigenvalue shift can leave a zero pivot; nudge it.
      if (std::abs(lu(k, k)) < tiny) lu(k, k) = tiny;
      const Complex pivot = lu(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        const Complex f = lu(i, k) / pivot;
        lu(i, k) = f;
        if (f == Complex{}) continue;
        auto ri = lu.row(i);
        const auto rk = lu.row(k);
        for (std::size_t j = k + 1; j < n; ++j) ri[j] -= f * rk[j];
      }
    }
  }

  std::vector<Complex> solve(const std::vector<Complex>& b) const {
    const std::size_t n = lu.rows();
    std::vector<Complex> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      Complex s = b[perm[i]];
      const auto row = lu.row(i);
      for (std::size_t j = 0; j < i; ++j) s -= row[j] * x[j];
      x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      Complex s = x[i];
      const auto row = lu.row(i);
      for (std::size_t j = i + 1; j < n; ++j) s -= row[j] * x[j];
      x[i] = s / row[i];
    }
    return x;
  }
};

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

InverseIterationResult inverse_iteration_unchecked(const RealMatrix& k, const RealMatrix& m, Complex lambda,
                                                   std::uint64_t seed) {
  const std::size_t n = k.rows();
  ComplexMatrix shifted(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) shifted(i, j) = k(i, j) - lambda * m(i, j);
  const double knorm = k.frobenius_norm();
  const ComplexLu lu(std::move(shifted), std::numeric_limits<double>::epsilon() * std::max(knorm, 1e-300));

  std::mt19937_64 rng(seed);
  std::vector<Complex> x(n);
  for (auto& v : x) {
    const double re = 2.0 * unit_uniform(rng) - 1.0;
    const double im = 2.0 * unit_uniform(rng) - 1.0;
    v = {re, im};
  }

  InverseIterationResult out{x, std::numeric_limits<double>::infinity(), 0};
  for (int it = 1; it <= 5; ++it) {
    std::vector<Complex> y = lu.solve(times(m, x));
    const double ny = norm2(y);
    if (!(ny > 0.0) || !std::isfinite(ny)) break;
    for (auto& v : y) v /= ny;
    x = std::move(y);
    out.iterations = it;
    out.residual = relative_residual(k, m, lambda, x);
    if (out.residual <= kResidualTolerance) break;
  }
  normalize_and_fix_phase(x, m);
  out.vector = std::move(x);
  out.residual = relative_residual(k, m, lambda, out.vector);
  return out;
}

}  // namespace

double relative_residual(const RealMatrix& k, const RealMatrix& m, Complex lambda, const std::vector<Complex>& u) {
  const auto ku = times(k, u);
  const auto mu = times(m, u);
  std::vector<Complex> r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) r[i] = ku[i] - lambda * mu[i];
  const double denom = k.frobenius_norm() * norm2(u);
  return denom > 0.0 ? norm2(r) / denom : std::numeric_limits<double>::infinity();
}

void normalize_and_fix_phase(std::vector<Complex>& u, const RealMatrix& m) {
  if (u.empty()) return;
  const auto mu = times(m, u);
  Complex energy{};
  for (std::size_t i = 0; i < u.size(); ++i) energy += std::conj(u[i]) * mu[i];
  const double scale = std::sqrt(std::abs(energy.real()));
  std::size_t big = 0;
  for (std::size_t i = 1; i < u.size(); ++i)
    if (std::abs(u[i]) > std::abs(u[big])) big = i;
  const Complex phase = std::abs(u[big]) > 0.0 ? std::conj(u[big]) / std::abs(u[big]) : Complex{1.0};
  for (auto& v : u) v = v * phase / scale;
  u[big] = {u[big].real(), 0.0};
}

InverseIterationResult eigenvector_inverse_iteration(const RealMatrix& k, const RealMatrix& m, Complex lambda,
                                                     std::uint64_t seed) {
  if (k.rows() != k.cols() || m.rows() != k.rows() || m.cols() != k.cols())
    throw DomainError("inverse iteration: K and M must be square and of equal size");
  auto out = inverse_iteration_unchecked(k, m, lambda, seed);
  if (!(out.residual <= kResidualTolerance)) {
    std::ostringstream os;
    os << "inverse iteration: residual " << out.residual << " above " << kResidualTolerance << " for lambda = " << lambda
       << " (eigenvalue possibly defective or clustered)";
    throw AccuracyError(os.str(), kResidualTolerance, out.residual);
  }
  return out;
}

void sort_eigenvalues(std::vector<Complex>& values) {
  std::stable_sort(values.begin(), values.end(), [](Complex x, Complex y) {
    const double ax = std::abs(x), ay = std::abs(y);
    if (ax != ay) return ax < ay;
    return std::arg(x) < std::arg(y);
  });
}

Spectrum solve_gevp(const RealMatrix& k, const RealMatrix& m, const SolveOptions& options) {
  if (k.rows() != k.cols() || m.rows() != k.rows() || m.cols() != k.cols())
    throw DomainError("solve_gevp: K and M must be square and of equal size");
  const BandFactor l = cholesky_band(m);
  std::vector<Complex> values = eig_nonsymmetric(reduce_standard(k, l));
  sort_eigenvalues(values);

  const std::size_t with_vectors = std::min(values.size(), options.vector_count.value_or(values.size()));
  Spectrum spectrum;
  spectrum.pairs.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    Eigenpair pair;
    pair.value = values[i];
    if (i < with_vectors) {
      auto it = inverse_iteration_unchecked(k, m, values[i], options.seed);
      pair.vector = std::move(it.vector);
      pair.residual = it.residual;
      pair.converged = it.residual <= kResidualTolerance;
    } else {
      pair.residual = std::numeric_limits<double>::quiet_NaN();
    }
    spectrum.pairs.push_back(std::move(pair));
  }
  return spectrum;
}

SpectrumReport classify(const Spectrum& spectrum, const FractionalOrders& orders) {
  SpectrumReport report;
  const std::size_t n = spectrum.pairs.size();
  if (n == 0) return report;
  const double theta = orders.cone_half_angle();
  const std::size_t third = n / 3;

  report.regions.resize(n);
  report.is_real.resize(n);
  report.margins.resize(n);
  double accurate_margin = -std::numeric_limits<double>::infinity();
  double overall_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex v = spectrum.pairs[i].value;
    report.is_real[i] = std::abs(v.imag()) <= 1e-6 * std::max(1.0, std::abs(v));
    if (report.is_real[i]) ++report.real_count;
    report.regions[i] = i < third ? Region::Accurate : i < 2 * third ? Region::Transitional : Region::Inaccurate;
    report.margins[i] = std::abs(std::arg(v)) - theta;
    overall_margin = std::max(overall_margin, report.margins[i]);
    if (report.regions[i] == Region::Accurate) accurate_margin = std::max(accurate_margin, report.margins[i]);
  }
  report.pair_count = (n - report.real_count) / 2;
  // Fewer than three eigenvalues leave the accurate third empty.
  report.cone_margin = third > 0 ? accurate_margin : overall_margin;

  const auto& first = spectrum.pairs.front();
  report.principal_value = first.value;
  if (!first.vector.empty()) {
    double biggest = 0.0, imag = 0.0;
    bool positive = true;
    for (const auto& u : first.vector) {
      biggest = std::max(biggest, std::abs(u));
      imag = std::max(imag, std::abs(u.imag()));
      if (!(u.real() > 0.0)) positive = false;
    }
    report.principal_positive = positive && imag <= 1e-6 * biggest;
  }
  return report;
}

}  // namespace eigensolver

Spectrum solve_problem(const Mesh& mesh, const FractionalOrders& orders, const SolveOptions& options) {
  const RealMatrix k = assembly::stiffness_matrix(mesh, orders);
  const RealMatrix m = assembly::mass_matrix(mesh);
  Spectrum spectrum = eigensolver::solve_gevp(k, m, options);
  spectrum.orders = orders;
  spectrum.mesh = {mesh.a(), mesh.b(), mesh.elements()};
  return spectrum;
}

}  // namespace fracspec
