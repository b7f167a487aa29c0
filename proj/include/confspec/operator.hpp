#pragma once

#include <Eigen/SparseCore>
#include <string>

#include "confspec/domain_mesh.hpp"
#include "confspec/metric.hpp"

namespace confspec {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Discrete Dirichlet pencil A u = lambda B u for the Laplace-Beltrami operator of
/// e^{2f} g, discretised in the self-adjoint form
///   -div(e^{(n-2)f} grad u) = lambda e^{nf} u.
struct OperatorPair {
  /// Stiffness: flux form scaled by h^n, symmetric positive definite, both triangles stored.
  SparseMatrix stiffness;
  /// Lumped mass e^{n f(x_j)} h^n.
  Eigen::VectorXd mass;
  GridPtr grid;
  ConformalFactorModel model;
};

struct AssemblyOptions {
  /// Worker threads for row assembly; results are identical for any value.
  int threads = 1;
  /// Test fixture: subtract boundary-arm weights from the diagonal instead of adding.
  bool inject_sign_fault = false;
};

OperatorPair assemble(const ConformalFactorModel& model, GridPtr grid,
                      const AssemblyOptions& options = {});

/// Max over nodes at least 2h from the boundary of |(A F)_j / B_jj + (Delta~ F)(x_j)|.
double verify_assembly(const OperatorPair& pair, const ScalarField& field);
double verify_assembly(const ConformalFactorModel& model, GridPtr grid, const ScalarField& field);

/// True when a sparse LDL^T factorisation of `a` succeeds with all pivots positive.
bool positive_definite(const SparseMatrix& a);

/// Coordinate text dump, one "row col value" triple per line (0-based, 17 digits).
void write_coo(const std::string& path, const SparseMatrix& a);
void write_coo_diagonal(const std::string& path, const Eigen::VectorXd& diag);

}  // namespace confspec
