#include "fracspec/assembly.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fracspec/errors.hpp"
#include "fracspec/parallel.hpp"
#include "fracspec/specialfns.hpp"

namespace fracspec {

FractionalOrders::FractionalOrders(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  std::ostringstream os;
  if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0)) {
    os << "orders: alpha = " << alpha << ", beta = " << beta << " must lie in [0, 1]";
    throw DomainError(os.str());
  }
  const double sum = alpha + beta;
  if (!(sum > 1.0 && sum <= 2.0)) {
    os << "orders: alpha + beta = " << sum << " must lie in (1, 2]";
    throw DomainError(os.str());
  }
}

double FractionalOrders::cone_half_angle() const { return std::abs(beta_ - alpha_) * std::numbers::pi / 2.0; }

namespace assembly {

RealMatrix mass_matrix(const Mesh& mesh) {
  if (mesh.elements() < 2) throw DomainError("mass_matrix: need N >= 2");
  const std::size_t n = static_cast<std::size_t>(mesh.elements()) - 1;
  const double h = mesh.h();
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 2.0 * h / 3.0;
    if (i + 1 < n) {
      m(i, i + 1) = h / 6.0;
      m(i + 1, i) = h / 6.0;
    }
  }
  return m;
}

namespace {

RealMatrix laplacian_stiffness(const Mesh& mesh) {
  const std::size_t n = static_cast<std::size_t>(mesh.elements()) - 1;
  const double inv_h = 1.0 / mesh.h();
  RealMatrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    k(i, i) = 2.0 * inv_h;
    if (i + 1 < n) {
      k(i, i + 1) = -inv_h;
      k(i + 1, i) = -inv_h;
    }
  }
  return k;
}

}  // namespace

RealMatrix stiffness_matrix(const Mesh& mesh, const FractionalOrders& orders) {
  if (mesh.elements() < 2) throw DomainError("stiffness_matrix: need N >= 2");
  if (orders.laplacian()) return laplacian_stiffness(mesh);

  const int N = mesh.elements();
  const double h = mesh.h();
  const double pb = 1.0 - orders.beta();
  const double pa = 1.0 - orders.alpha();
  const std::size_t nodes = mesh.node_count();

  // pair(i, j) = integral over (a, b) of (x_i - x)_+^{1-beta} (x_j - x)_+^{1-alpha}.
  // Every entry is a 3x3 second difference of this table.
  RealMatrix pair(nodes, nodes);
  parallel_for(nodes, [&](std::size_t i) {
    for (std::size_t j = 0; j < nodes; ++j) {
      const std::size_t lo = std::min(i, j);
      if (lo == 0) continue;
      const double X = static_cast<double>(lo) * h;
      const double d = static_cast<double>(i > j ? i - j : j - i) * h;
      try {
        pair(i, j) = i <= j ? specialfns::kernel_primitive(pb, pa, X, d) : specialfns::kernel_primitive(pa, pb, X, d);
      } catch (const AccuracyError& e) {
        std::ostringstream os;
        os << e.what() << " (stiffness node pair " << i << ", " << j << ")";
        throw AccuracyError(os.str(), e.previous(), e.last());
      }
    }
  });

  const double scale = 1.0 / (h * h * specialfns::gamma(2.0 - orders.beta()) * specialfns::gamma(2.0 - orders.alpha()));
  constexpr double w[3] = {1.0, -2.0, 1.0};
  const std::size_t n = static_cast<std::size_t>(N) - 1;
  RealMatrix k(n, n);
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t col = 0; col < n; ++col) {
      // Row k = row + 1 carries the alpha factor, column l = col + 1 the beta one.
      double s = 0.0;
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) s += w[a] * w[b] * pair(col + a, row + b);
      k(row, col) = scale * s;
    }
  }
  return k;
}

std::vector<Complex> load_vector(const GridFunction& f) {
  const Mesh& mesh = f.mesh;
  if (mesh.elements() < 2) throw DomainError("load_vector: need N >= 2");
  const double h = mesh.h();
  const auto& v = f.values;
  std::vector<Complex> out(static_cast<std::size_t>(mesh.elements()) - 1);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = h / 6.0 * v[i] + 2.0 * h / 3.0 * v[i + 1] + h / 6.0 * v[i + 2];
  return out;
}

void write_matrix(std::ostream& os, const RealMatrix& m) {
  char buf[40];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j) os << ' ';
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace assembly
}  // namespace fracspec
