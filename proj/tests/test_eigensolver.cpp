#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

#include "fracspec/assembly.hpp"
#include "fracspec/eigensolver.hpp"
#include "fracspec/errors.hpp"
#include "oracles.hpp"

using namespace fracspec;
using namespace fracspec::eigensolver;

namespace {

RealMatrix from_rows(const std::vector<std::vector<double>>& rows) {
  RealMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

// Each wanted value has a partner within tol of it.
void check_same_multiset(std::vector<Complex> got, std::vector<Complex> want, double tol) {
  REQUIRE(got.size() == want.size());
  for (const auto& w : want) {
    auto it = std::min_element(got.begin(), got.end(),
                               [&](Complex x, Complex y) { return std::abs(x - w) < std::abs(y - w); });
    CHECK(std::abs(*it - w) <= tol * std::max(1.0, std::abs(w)));
    got.erase(it);
  }
}

const Spectrum& cached_spectrum(double alpha, double beta, int N) {
  static std::map<std::tuple<double, double, int>, Spectrum> cache;
  auto key = std::make_tuple(alpha, beta, N);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, solve_problem(Mesh(0.0, 1.0, N), FractionalOrders(alpha, beta))).first;
  return it->second;
}

}  // namespace

TEST_CASE("cholesky_band: identity, scalar and mass matrix") {
  const BandFactor id = cholesky_band(RealMatrix::identity(4));
  for (double d : id.diag) CHECK(d == 1.0);
  for (double s : id.sub) CHECK(s == 0.0);

  RealMatrix four(1, 1);
  four(0, 0) = 4.0;
  CHECK(cholesky_band(four).diag[0] == 2.0);

  const RealMatrix m = assembly::mass_matrix(Mesh(0.0, 1.0, 4));
  const BandFactor l = cholesky_band(m);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m.rows(); ++k) {
        const double lik = k == i ? l.diag[i] : (k + 1 == i ? l.sub[k] : 0.0);
        const double ljk = k == j ? l.diag[j] : (k + 1 == j ? l.sub[k] : 0.0);
        s += lik * ljk;
      }
      CHECK(std::abs(s - m(i, j)) <= 1e-14 * m.max_abs());
    }
  }
}

TEST_CASE("cholesky_band: rejects indefinite input") {
  RealMatrix m = RealMatrix::identity(3);
  m(1, 1) = -1.0;
  CHECK_THROWS_AS(cholesky_band(m), NotSpdError);
  RealMatrix lopsided = RealMatrix::identity(2);
  lopsided(0, 1) = lopsided(1, 0) = 2.0;
  CHECK_THROWS_AS(cholesky_band(lopsided), NotSpdError);
}

TEST_CASE("reduce_standard: identity mass and congruence symmetry") {
  const RealMatrix k = assembly::stiffness_matrix(Mesh(0.0, 1.0, 7), FractionalOrders(0.3, 0.9));
  const RealMatrix c = reduce_standard(k, cholesky_band(RealMatrix::identity(6)));
  CHECK(c == k);

  const Mesh mesh(0.0, 1.0, 12);
  const RealMatrix ks = assembly::stiffness_matrix(mesh, FractionalOrders(0.8, 0.8));
  const RealMatrix cs = reduce_standard(ks, cholesky_band(assembly::mass_matrix(mesh)));
  for (std::size_t i = 0; i < cs.rows(); ++i)
    for (std::size_t j = 0; j < cs.cols(); ++j) CHECK(std::abs(cs(i, j) - cs(j, i)) <= 1e-10 * cs.max_abs());
}

TEST_CASE("reduce_standard: eigenvalues match the 2x2 pencil determinant roots") {
  for (auto [a, b] : {std::pair{0.4, 0.8}, std::pair{0.9, 0.2}}) {
    const Mesh mesh(0.0, 1.0, 3);
    const RealMatrix k = assembly::stiffness_matrix(mesh, FractionalOrders(a, b));
    const RealMatrix m = assembly::mass_matrix(mesh);
    // det(K - lambda M) = A lambda^2 + B lambda + C
    const double A = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double B = -(k(0, 0) * m(1, 1) + m(0, 0) * k(1, 1)) + k(0, 1) * m(1, 0) + m(0, 1) * k(1, 0);
    const double C = k(0, 0) * k(1, 1) - k(0, 1) * k(1, 0);
    const Complex disc = std::sqrt(Complex{B * B - 4.0 * A * C});
    const std::vector<Complex> roots{(-B + disc) / (2.0 * A), (-B - disc) / (2.0 * A)};
    check_same_multiset(eig_nonsymmetric(reduce_standard(k, cholesky_band(m))), roots, 1e-12);
  }
}

TEST_CASE("eig_nonsymmetric: small closed-form cases") {
  check_same_multiset(eig_nonsymmetric(from_rows({{1, 0, 0}, {0, 2, 0}, {0, 0, 3}})), {1.0, 2.0, 3.0}, 1e-14);
  check_same_multiset(eig_nonsymmetric(from_rows({{0, -1}, {1, 0}})), {Complex{0, 1}, Complex{0, -1}}, 1e-14);
  check_same_multiset(eig_nonsymmetric(from_rows({{5}})), {5.0}, 0.0);
  check_same_multiset(eig_nonsymmetric(from_rows({{2, 1}, {0, 2}})), {2.0, 2.0}, 1e-7);
  CHECK(eig_nonsymmetric(RealMatrix(0, 0)).empty());
  CHECK_THROWS_AS(eig_nonsymmetric(RealMatrix(2, 3)), DomainError);
}

TEST_CASE("eig_nonsymmetric: 8x8 with a spectrum fixed by similarity") {
  const std::vector<Complex> want{Complex{3.0, 2.0}, Complex{3.0, -2.0}, Complex{-1.0, 0.5}, Complex{-1.0, -0.5},
                                  7.5, -4.0, 0.25, 1.0};
  std::vector<std::vector<double>> d(8, std::vector<double>(8, 0.0));
  d[0][0] = d[1][1] = 3.0;
  d[0][1] = 2.0;
  d[1][0] = -2.0;
  d[2][2] = d[3][3] = -1.0;
  d[2][3] = 0.5;
  d[3][2] = -0.5;
  d[4][4] = 7.5;
  d[5][5] = -4.0;
  d[6][6] = 0.25;
  d[7][7] = 1.0;
  oracle::Uniform u(2024);
  std::vector<std::vector<double>> s(8, std::vector<double>(8));
  for (auto& row : s)
    for (auto& v : row) v = u(-1.0, 1.0);
  for (int i = 0; i < 8; ++i) s[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] += 3.0;
  const auto sinv = oracle::inverse(s);
  RealMatrix a(8, 8);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < 8; ++p)
        for (std::size_t q = 0; q < 8; ++q) acc += s[i][p] * d[p][q] * sinv[q][j];
      a(i, j) = acc;
    }
  check_same_multiset(eig_nonsymmetric(a), want, 1e-8);
}

TEST_CASE("eig_nonsymmetric: sweep cap exhaustion names the unconverged rows") {
  oracle::Uniform u(5);
  RealMatrix a(12, 12);
  for (double& v : a.data()) v = u(-1.0, 1.0);
  try {
    eig_nonsymmetric(a, 1);
    FAIL("expected a convergence error");
  } catch (const ConvergenceError& e) {
    CHECK(std::string(e.what()).find("unconverged") != std::string::npos);
  }
}

TEST_CASE("sort_eigenvalues: modulus then argument, a permutation") {
  std::vector<Complex> v{Complex{0, 2}, 1.0, Complex{0, -2}, -3.0, Complex{1, 1}, Complex{1, -1}, 2.0};
  const auto original = v;
  sort_eigenvalues(v);
  const std::vector<Complex> want{1.0, Complex{1, -1}, Complex{1, 1}, Complex{0, -2}, 2.0, Complex{0, 2}, -3.0};
  CHECK(v == want);
  check_same_multiset(v, original, 0.0);
}

TEST_CASE("solve_gevp: 1x1 pencil") {
  const Mesh mesh(0.0, 1.0, 2);
  const RealMatrix k = assembly::stiffness_matrix(mesh, FractionalOrders(0.5, 0.9));
  const RealMatrix m = assembly::mass_matrix(mesh);
  const Spectrum s = solve_gevp(k, m);
  REQUIRE(s.pairs.size() == 1);
  CHECK(s.pairs[0].value.real() == doctest::Approx(k(0, 0) / m(0, 0)).epsilon(1e-14));
  CHECK(s.pairs[0].value.imag() == 0.0);
}

TEST_CASE("solve_gevp: Laplacian eigenvalues approach j^2 pi^2") {
  const Spectrum& s = cached_spectrum(1.0, 1.0, 200);
  for (int j = 1; j <= 4; ++j) {
    const double exact = j * j * std::numbers::pi * std::numbers::pi;
    CHECK(std::abs(s.pairs[static_cast<std::size_t>(j - 1)].value - exact) / exact <= 1e-2);
  }
}

TEST_CASE("eigenvector_inverse_iteration: Laplacian principal vector is a sine") {
  const Mesh mesh(0.0, 1.0, 100);
  const RealMatrix k = assembly::stiffness_matrix(mesh, FractionalOrders(1.0, 1.0));
  const RealMatrix m = assembly::mass_matrix(mesh);
  std::vector<Complex> values = eig_nonsymmetric(reduce_standard(k, cholesky_band(m)));
  sort_eigenvalues(values);
  const auto r = eigenvector_inverse_iteration(k, m, values[0], 42);
  CHECK(r.residual <= kResidualTolerance);
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (int j = 1; j < 100; ++j) {
    const double sj = std::sin(std::numbers::pi * mesh.node(j));
    const Complex u = r.vector[static_cast<std::size_t>(j - 1)];
    uv += u.real() * sj;
    uu += std::norm(u);
    vv += sj * sj;
  }
  CHECK(uv / std::sqrt(uu * vv) >= 0.999);

  const auto again = eigenvector_inverse_iteration(k, m, values[0], 42);
  CHECK(again.vector == r.vector);
  CHECK(again.iterations == r.iterations);
}

TEST_CASE("eigenvector_inverse_iteration: residuals of the first ten pairs") {
  const Mesh mesh(0.0, 1.0, 100);
  const RealMatrix k = assembly::stiffness_matrix(mesh, FractionalOrders(0.6, 0.9));
  const RealMatrix m = assembly::mass_matrix(mesh);
  std::vector<Complex> values = eig_nonsymmetric(reduce_standard(k, cholesky_band(m)));
  sort_eigenvalues(values);
  for (std::size_t j = 0; j < 10; ++j) {
    const auto r = eigenvector_inverse_iteration(k, m, values[j], 7);
    CHECK(r.residual <= 1e-8);
    CHECK(r.iterations <= 5);
  }
}

TEST_CASE("eigenvector_inverse_iteration: a poor shift is an accuracy error") {
  const Mesh mesh(0.0, 1.0, 30);
  const RealMatrix k = assembly::stiffness_matrix(mesh, FractionalOrders(1.0, 1.0));
  const RealMatrix m = assembly::mass_matrix(mesh);
  // halfway between the first two eigenvalues
  CHECK_THROWS_AS(eigenvector_inverse_iteration(k, m, Complex{2.5 * std::numbers::pi * std::numbers::pi, 0.0}), AccuracyError);
}

TEST_CASE("spectrum: vectors are M-normalized and phase-fixed") {
  const Mesh mesh(0.0, 1.0, 40);
  const RealMatrix m = assembly::mass_matrix(mesh);
  const Spectrum s = solve_problem(mesh, FractionalOrders(0.3, 0.95));
  for (const auto& p : s.pairs) {
    if (!p.converged) continue;
    CHECK(p.residual <= kResidualTolerance);
    Complex energy{};
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) energy += std::conj(p.vector[i]) * m(i, j) * p.vector[j];
    CHECK(energy.real() == doctest::Approx(1.0).epsilon(1e-12));
    const auto big = std::max_element(p.vector.begin(), p.vector.end(),
                                      [](Complex x, Complex y) { return std::abs(x) < std::abs(y); });
    CHECK(big->imag() == 0.0);
    CHECK(big->real() > 0.0);
  }
  SolveOptions few;
  few.vector_count = 3;
  const Spectrum partial = solve_problem(mesh, FractionalOrders(0.3, 0.95), few);
  CHECK(partial.pairs[2].vector.size() == 39);
  CHECK(partial.pairs[3].vector.empty());
  CHECK(std::isnan(partial.pairs[3].residual));
}

TEST_CASE("spectrum: symmetric orders give a real spectrum") {
  const Spectrum& s = cached_spectrum(0.75, 0.75, 100);
  double biggest = 0.0;
  for (const auto& p : s.pairs) biggest = std::max(biggest, std::abs(p.value));
  for (const auto& p : s.pairs) CHECK(std::abs(p.value.imag()) <= 1e-8 * biggest);
  const SpectrumReport r = classify(s, FractionalOrders(0.75, 0.75));
  CHECK(r.real_count == s.pairs.size());
  CHECK(r.cone_margin <= 1e-6);
}

TEST_CASE("spectrum: conjugate closure, positive real parts, principal pair") {
  for (auto [a, b] : {std::pair{0.2, 0.9}, std::pair{0.6, 0.9}, std::pair{0.9, 0.4}}) {
    const Spectrum& s = cached_spectrum(a, b, 100);
    std::vector<Complex> values, conjugates;
    for (const auto& p : s.pairs) {
      values.push_back(p.value);
      conjugates.push_back(std::conj(p.value));
    }
    check_same_multiset(values, conjugates, 1e-9);

    const SpectrumReport r = classify(s, FractionalOrders(a, b));
    for (std::size_t i = 0; i < s.pairs.size(); ++i)
      if (r.regions[i] == Region::Accurate) CHECK(s.pairs[i].value.real() > 0.0);
    CHECK(r.principal_value.real() > 0.0);
    CHECK(r.is_real[0]);
    CHECK(r.principal_positive);
    CHECK(r.real_count + 2 * r.pair_count == s.pairs.size());
  }
}

TEST_CASE("classify: cone margin and the single real low eigenpair for (0.2, 0.9)") {
  const Spectrum& s = cached_spectrum(0.2, 0.9, 100);
  const SpectrumReport r = classify(s, FractionalOrders(0.2, 0.9));
  CHECK(r.cone_margin <= 0.02);
  CHECK(r.is_real[0]);
  for (std::size_t i = 1; i < s.pairs.size() / 3; ++i) CHECK_FALSE(r.is_real[i]);
}

TEST_CASE("classify: regions split by index thirds, remainder last") {
  Spectrum s;
  for (int i = 1; i <= 7; ++i) s.pairs.push_back({Complex{static_cast<double>(i)}, {}, 0.0, true});
  const SpectrumReport r = classify(s, FractionalOrders(0.7, 0.7));
  const std::vector<Region> want{Region::Accurate,     Region::Accurate,   Region::Transitional, Region::Transitional,
                                 Region::Inaccurate,   Region::Inaccurate, Region::Inaccurate};
  CHECK(r.regions == want);
  CHECK(std::string(region_name(Region::Transitional)) == "transitional");
}
