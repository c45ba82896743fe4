#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracspec/assembly.hpp"
#include "fracspec/matrix.hpp"

namespace fracspec {

// Residual bound every accepted eigenvector must meet:
// ||K U - lambda M U||_2 / (||K||_F ||U||_2).
inline constexpr double kResidualTolerance = 1e-8;

struct Eigenpair {
  Complex value;
  // Interior nodal coefficients, M-normalized and phase-fixed. Empty when the
  // vector was not requested.
  std::vector<Complex> vector;
  // NaN when no vector was computed.
  double residual = 0.0;
  // False when inverse iteration could not reach kResidualTolerance
  // (clustered or defective eigenvalue); the best vector is still stored.
  bool converged = true;
};

struct MeshSummary {
  double a = 0.0;
  double b = 1.0;
  int elements = 0;
};

// Sorted ascending by |lambda|, ties by ascending Arg lambda.
struct Spectrum {
  std::optional<FractionalOrders> orders;
  MeshSummary mesh;
  std::vector<Eigenpair> pairs;
};

enum class Region { Accurate, Transitional, Inaccurate };
const char* region_name(Region r);

struct SpectrumReport {
  std::size_t real_count = 0;
  std::size_t pair_count = 0;
  // max over the accurate third of |Arg lambda| - half angle
  double cone_margin = 0.0;
  std::vector<Region> regions;
  std::vector<bool> is_real;
  std::vector<double> margins;
  Complex principal_value;
  bool principal_positive = false;
};

struct SolveOptions {
  // Number of leading eigenpairs that get vectors; all when unset.
  std::optional<std::size_t> vector_count;
  std::uint64_t seed = 0;
};

namespace eigensolver {

// Lower bidiagonal Cholesky factor of a symmetric tridiagonal matrix.
struct BandFactor {
  std::vector<double> diag;
  std::vector<double> sub;  // sub[i] = L(i+1, i)
};

BandFactor cholesky_band(const RealMatrix& m);

// C = L^{-1} K L^{-T}.
RealMatrix reduce_standard(const RealMatrix& k, const BandFactor& l);

// Eigenvalues of a real square matrix via Householder Hessenberg reduction and
// Francis double-shift QR. Throws ConvergenceError, naming the unconverged
// block, after `max_sweeps` QR sweeps (0 selects 30 n).
std::vector<Complex> eig_nonsymmetric(const RealMatrix& c, long max_sweeps = 0);

struct InverseIterationResult {
  std::vector<Complex> vector;
  double residual;
  int iterations;
};

// Eigenvector of K U = lambda M U for a given eigenvalue estimate. At most 5
// iterations from a start vector drawn from `seed`. Throws AccuracyError when
// the residual stays above kResidualTolerance.
InverseIterationResult eigenvector_inverse_iteration(const RealMatrix& k, const RealMatrix& m, Complex lambda,
                                                     std::uint64_t seed = 0);

double relative_residual(const RealMatrix& k, const RealMatrix& m, Complex lambda, const std::vector<Complex>& u);

// Scales u to unit M-norm and rotates it so the entry of largest modulus is
// real positive.
void normalize_and_fix_phase(std::vector<Complex>& u, const RealMatrix& m);

// Orders eigenvalues ascending by modulus, ties by Arg.
void sort_eigenvalues(std::vector<Complex>& values);

Spectrum solve_gevp(const RealMatrix& k, const RealMatrix& m, const SolveOptions& options = {});

SpectrumReport classify(const Spectrum& spectrum, const FractionalOrders& orders);

}  // namespace eigensolver

// Assemble and solve for one (mesh, orders) pair.
Spectrum solve_problem(const Mesh& mesh, const FractionalOrders& orders, const SolveOptions& options = {});

}  // namespace fracspec
