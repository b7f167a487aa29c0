#include "confspec/eigensolver.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "confspec/errors.hpp"

namespace confspec {

std::string to_string(SolverMethod method) {
  switch (method) {
    case SolverMethod::Auto: return "auto";
    case SolverMethod::Dense: return "dense";
    case SolverMethod::ShiftInvert: return "shift_invert";
    case SolverMethod::Lobpcg: return "lobpcg";
  }
  return "unknown";
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr int kDenseLimit = 400;
constexpr int kLobpcgLimit3d = 30000;
constexpr double kDeflation = 1e-13;

MatrixXd random_block(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  MatrixXd x(rows, cols);
  // Explicit mapping keeps the start vectors identical across standard libraries.
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) x(r, c) = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
  return x;
}

double b_norm(const VectorXd& x, const VectorXd& bd) {
  return std::sqrt(x.dot(bd.cwiseProduct(x)));
}

// B-orthonormalises `block` against the first `used` columns of `basis` (assumed
// B-orthonormal) and within itself. Columns that collapse are dropped.
MatrixXd orthonormalize_against(MatrixXd block, const MatrixXd& basis, int used,
                                const VectorXd& bd) {
  const int cols = static_cast<int>(block.cols());
  VectorXd original(cols);
  for (int c = 0; c < cols; ++c) original[c] = b_norm(block.col(c), bd);

  if (used > 0) {
    const auto q = basis.leftCols(used);
    for (int pass = 0; pass < 2; ++pass)
      block -= q * (q.transpose() * bd.asDiagonal() * block);
  }

  MatrixXd kept(block.rows(), cols);
  int count = 0;
  for (int c = 0; c < cols; ++c) {
    VectorXd v = block.col(c);
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < count; ++j) v -= kept.col(j).dot(bd.cwiseProduct(v)) * kept.col(j);
    const double norm = b_norm(v, bd);
    if (!(norm > kDeflation * original[c]) || norm == 0.0) continue;
    kept.col(count++) = v / norm;
  }
  return kept.leftCols(count);
}

struct Ritz {
  VectorXd values;
  MatrixXd vectors;
};

// Rayleigh-Ritz for the pencil (A, B) on span(Y); returns ascending pairs.
Ritz rayleigh_ritz(const SparseMatrix& a, const VectorXd& bd, const MatrixXd& y) {
  const MatrixXd ay = a * y;
  MatrixXd k = y.transpose() * ay;
  MatrixXd m = y.transpose() * bd.asDiagonal() * y;
  k = 0.5 * (k + k.transpose()).eval();
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(k, m);
  if (ges.info() != Eigen::Success) throw NumericalError("Rayleigh-Ritz projection failed");
  return {ges.eigenvalues(), y * ges.eigenvectors()};
}

VectorXd residuals(const SparseMatrix& a, const VectorXd& bd, const Ritz& ritz, int count) {
  VectorXd res(count);
  for (int i = 0; i < count; ++i) {
    const VectorXd bu = bd.cwiseProduct(ritz.vectors.col(i));
    res[i] = (a * ritz.vectors.col(i) - ritz.values[i] * bu).norm() / bu.norm();
  }
  return res;
}

SpectralResult finalize(const OperatorPair& pair, const Ritz& ritz, int k, double tol,
                        int iterations, SolverMethod method) {
  SpectralResult out{ritz.values.head(k),
                     ritz.vectors.leftCols(k),
                     residuals(pair.stiffness, pair.mass, ritz, k),
                     pair.mass,
                     pair.grid,
                     pair.model,
                     tol,
                     iterations,
                     method};
  // Deterministic sign: the largest-magnitude entry of each vector is positive.
  for (int i = 0; i < k; ++i) {
    Eigen::Index arg = 0;
    out.eigenvectors.col(i).cwiseAbs().maxCoeff(&arg);
    if (out.eigenvectors(arg, i) < 0.0) out.eigenvectors.col(i) *= -1.0;
  }
  return out;
}

SpectralResult solve_dense(const OperatorPair& pair, int k, const SolverOptions& options) {
  const VectorXd scale = pair.mass.cwiseSqrt().cwiseInverse();
  MatrixXd c = scale.asDiagonal() * MatrixXd(pair.stiffness) * scale.asDiagonal();
  c = 0.5 * (c + c.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(c);
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  if (es.eigenvalues()[0] <= 0.0) throw NumericalError("stiffness matrix is not positive definite");
  Ritz ritz{es.eigenvalues(), scale.asDiagonal() * es.eigenvectors()};
  return finalize(pair, ritz, k, options.tol, 1, SolverMethod::Dense);
}

[[noreturn]] void budget_exhausted(const char* method, int iterations, const VectorXd& res) {
  std::ostringstream msg;
  msg << method << ": residual " << res.maxCoeff() << " above tolerance after " << iterations
      << " iterations";
  throw ConvergenceError(msg.str(), iterations, res.maxCoeff());
}

int block_size(int n, int k) { return std::min(n, k + std::max(2, (k + 3) / 4)); }

SpectralResult solve_shift_invert(const OperatorPair& pair, int k, const SolverOptions& options,
                                  int budget) {
  const SparseMatrix& a = pair.stiffness;
  const VectorXd& bd = pair.mass;
  const int n = static_cast<int>(a.rows());

  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt(a);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0))
    throw NumericalError("stiffness matrix is not positive definite");

  const int b = block_size(n, k);
  int depth = 3;
  while (depth > 0 && b * (depth + 1) > n) --depth;

  MatrixXd x = random_block(n, b, options.seed);
  int applications = 0;
  MatrixXd q(n, b * (depth + 1));
  MatrixXd z(n, b * (depth + 1));
  while (true) {
    int used = 0;
    MatrixXd block = x;
    for (int level = 0; level <= depth; ++level) {
      block = orthonormalize_against(std::move(block), q, used, bd);
      const int c = static_cast<int>(block.cols());
      if (c == 0) break;
      q.middleCols(used, c) = block;
      for (int i = 0; i < c; ++i) z.col(used + i) = ldlt.solve(bd.cwiseProduct(block.col(i)));
      ++applications;
      used += c;
      block = z.middleCols(used - c, c);
    }
    if (used < k) throw NumericalError("Krylov space collapsed below the requested count");

    MatrixXd hq = q.leftCols(used).transpose() * bd.asDiagonal() * z.leftCols(used);
    hq = 0.5 * (hq + hq.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(hq);
    const int keep = std::min(b, used);
    // Largest eigenvalues of A^{-1}B are the smallest of the pencil.
    const MatrixXd y = q.leftCols(used) * es.eigenvectors().rightCols(keep).rowwise().reverse();
    // One more application of A^{-1}B before the final projection damps the
    // high-frequency rounding noise Gram-Schmidt leaves in converged directions.
    MatrixXd smooth(n, keep);
    for (int i = 0; i < keep; ++i) smooth.col(i) = ldlt.solve(bd.cwiseProduct(y.col(i)));
    ++applications;
    const Ritz ritz = rayleigh_ritz(a, bd, smooth);
    const VectorXd res = residuals(a, bd, ritz, k);
    if (res.maxCoeff() <= options.tol)
      return finalize(pair, ritz, k, options.tol, applications, SolverMethod::ShiftInvert);
    if (applications >= budget) budget_exhausted("shift-invert", applications, res);
    x = ritz.vectors;
  }
}

SpectralResult solve_lobpcg(const OperatorPair& pair, int k, const SolverOptions& options,
                            int budget) {
  const SparseMatrix& a = pair.stiffness;
  const VectorXd& bd = pair.mass;
  const int n = static_cast<int>(a.rows());

  Eigen::IncompleteCholesky<double, Eigen::Lower, Eigen::AMDOrdering<int>> ic;
  ic.compute(a);
  if (ic.info() != Eigen::Success) throw NumericalError("incomplete Cholesky failed");

  const int b = block_size(n, k);
  MatrixXd x = orthonormalize_against(random_block(n, b, options.seed), MatrixXd(), 0, bd);
  Ritz ritz = rayleigh_ritz(a, bd, x);
  MatrixXd p(n, 0);
  for (int it = 1;; ++it) {
    x = ritz.vectors;
    const VectorXd lambda = ritz.values;
    const MatrixXd r = a * x - bd.asDiagonal() * x * lambda.asDiagonal();
    const VectorXd res = residuals(a, bd, ritz, k);
    if (res.maxCoeff() <= options.tol)
      return finalize(pair, ritz, k, options.tol, it, SolverMethod::Lobpcg);
    if (it >= budget) budget_exhausted("lobpcg", it, res);

    MatrixXd w(n, x.cols());
    for (int c = 0; c < x.cols(); ++c) w.col(c) = ic.solve(r.col(c));
    MatrixXd basis(n, x.cols() + w.cols() + p.cols());
    basis.leftCols(x.cols()) = x;
    int used = static_cast<int>(x.cols());
    w = orthonormalize_against(std::move(w), basis, used, bd);
    basis.middleCols(used, w.cols()) = w;
    used += static_cast<int>(w.cols());
    if (p.cols() > 0) {
      p = orthonormalize_against(std::move(p), basis, used, bd);
      basis.middleCols(used, p.cols()) = p;
      used += static_cast<int>(p.cols());
    }
    const Ritz full = rayleigh_ritz(a, bd, basis.leftCols(used));
    const int keep = static_cast<int>(x.cols());
    ritz.values = full.values.head(keep);
    ritz.vectors = full.vectors.leftCols(keep);
    // Search direction: the part of the new iterate outside span(X).
    p = ritz.vectors - x * (x.transpose() * bd.asDiagonal() * ritz.vectors);
  }
}

}  // namespace

SpectralResult solve_smallest(const OperatorPair& pair, int k, const SolverOptions& options) {
  const int n = static_cast<int>(pair.stiffness.rows());
  if (k < 1 || k > n) {
    throw DimensionError("requested " + std::to_string(k) + " eigenpairs from a pencil of size " +
                         std::to_string(n));
  }
  if (!(options.tol > 0.0)) throw std::invalid_argument("solver tolerance must be > 0");
  const int budget = options.max_iterations > 0 ? options.max_iterations : 500 * k;

  SolverMethod method = options.method;
  if (method == SolverMethod::Auto) {
    if (n <= kDenseLimit)
      method = SolverMethod::Dense;
    else if (pair.grid && pair.grid->dim() >= 3 && n > kLobpcgLimit3d)
      method = SolverMethod::Lobpcg;
    else
      method = SolverMethod::ShiftInvert;
  }
  switch (method) {
    case SolverMethod::Dense: return solve_dense(pair, k, options);
    case SolverMethod::Lobpcg: return solve_lobpcg(pair, k, options, budget);
    default: return solve_shift_invert(pair, k, options, budget);
  }
}

SpectralResult solve_smallest(const OperatorPair& pair, int k, double tol, std::uint64_t seed) {
  SolverOptions options;
  options.tol = tol;
  options.seed = seed;
  return solve_smallest(pair, k, options);
}

double b_orthonormality_error(const SpectralResult& result) {
  const MatrixXd gram =
      result.eigenvectors.transpose() * result.mass.asDiagonal() * result.eigenvectors;
  return (gram - MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

void write_eigenvalues_csv(const std::string& path, const SpectralResult& result) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error("cannot open " + path + " for writing");
  std::fprintf(f, "index,eigenvalue,residual\n");
  for (int i = 0; i < result.count(); ++i)
    std::fprintf(f, "%d,%.17g,%.17g\n", i + 1, result.eigenvalues[i], result.residuals[i]);
  std::fclose(f);
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char bytes[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                  static_cast<unsigned char>(v >> 16),
                                  static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char bytes[4] = {};
  in.read(reinterpret_cast<char*>(bytes), 4);
  return static_cast<std::uint32_t>(bytes[0]) | static_cast<std::uint32_t>(bytes[1]) << 8 |
         static_cast<std::uint32_t>(bytes[2]) << 16 | static_cast<std::uint32_t>(bytes[3]) << 24;
}

void put_f64(std::ostream& out, double v) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &v, sizeof bits);
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_f64(std::istream& in) {
  unsigned char bytes[8] = {};
  in.read(reinterpret_cast<char*>(bytes), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  double v = 0.0;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

}  // namespace

void write_eigenvectors_binary(const std::string& path, const Eigen::MatrixXd& vectors) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out.write("CSPC", 4);
  put_u32(out, static_cast<std::uint32_t>(vectors.rows()));
  put_u32(out, static_cast<std::uint32_t>(vectors.cols()));
  put_u32(out, 0);
  for (Eigen::Index r = 0; r < vectors.rows(); ++r)
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) put_f64(out, vectors(r, c));
  if (!out) throw Error("write failed for " + path);
}

Eigen::MatrixXd read_eigenvectors_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  char magic[4] = {};
  in.read(magic, 4);
  if (std::memcmp(magic, "CSPC", 4) != 0) throw Error(path + ": bad magic");
  const std::uint32_t rows = get_u32(in);
  const std::uint32_t cols = get_u32(in);
  get_u32(in);
  Eigen::MatrixXd out(rows, cols);
  for (std::uint32_t r = 0; r < rows; ++r)
    for (std::uint32_t c = 0; c < cols; ++c) out(r, c) = get_f64(in);
  if (!in) throw Error(path + ": truncated");
  return out;
}

}  // namespace confspec
