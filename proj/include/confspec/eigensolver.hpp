#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "confspec/operator.hpp"

namespace confspec {

enum class SolverMethod {
  Auto,
  /// Dense generalized eigendecomposition; small grids only.
  Dense,
  /// Restarted block Krylov iteration on (A^{-1} B) with a sparse LDL^T of A.
  ShiftInvert,
  /// Block LOBPCG preconditioned by an incomplete Cholesky factor of A.
  Lobpcg,
};

std::string to_string(SolverMethod method);

struct SolverOptions {
  /// Relative residual target ||A u - lambda B u|| / ||B u||.
  double tol = 1e-8;
  std::uint64_t seed = 1;
  /// Budget of block operator applications (0 selects 500 * k).
  int max_iterations = 0;
  SolverMethod method = SolverMethod::Auto;
};

/// k smallest eigenpairs of a pencil, ascending, with B-orthonormal eigenvectors.
struct SpectralResult {
  Eigen::VectorXd eigenvalues;
  /// N x k, column i is u_i with u_i^T B u_j = delta_ij.
  Eigen::MatrixXd eigenvectors;
  Eigen::VectorXd residuals;
  /// Diagonal of B the vectors are normalised against.
  Eigen::VectorXd mass;
  GridPtr grid;
  ConformalFactorModel model;
  double tol = 0.0;
  int iterations = 0;
  SolverMethod method = SolverMethod::Auto;

  int count() const noexcept { return static_cast<int>(eigenvalues.size()); }
  int dim() const noexcept { return model.dim(); }
};

/// Throws DimensionError when k is outside [1, N], NumericalError when A is not
/// positive definite and ConvergenceError when the budget runs out.
SpectralResult solve_smallest(const OperatorPair& pair, int k, const SolverOptions& options = {});
SpectralResult solve_smallest(const OperatorPair& pair, int k, double tol, std::uint64_t seed);

/// max |u_i^T B u_j - delta_ij|.
double b_orthonormality_error(const SpectralResult& result);

/// "index,eigenvalue,residual" with a 1-based index and 17 significant digits.
void write_eigenvalues_csv(const std::string& path, const SpectralResult& result);

/// Little-endian binary: "CSPC", u32 N, u32 k, u32 0, then N*k doubles row-major.
void write_eigenvectors_binary(const std::string& path, const Eigen::MatrixXd& vectors);
Eigen::MatrixXd read_eigenvectors_binary(const std::string& path);

}  // namespace confspec
