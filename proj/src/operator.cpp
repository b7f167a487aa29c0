#include "confspec/operator.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <cstdio>
#include <memory>
#include <thread>
#include <vector>

#include "confspec/errors.hpp"

namespace confspec {

namespace {

using Triplet = Eigen::Triplet<double>;

struct RowContext {
  const ConformalFactorModel& model;
  const Grid& grid;
  const Eigen::VectorXd& node_weight;
  double scale;
  bool fault;
};

void assemble_rows(const RowContext& ctx, int begin, int end, std::vector<Triplet>& out) {
  const Grid& grid = ctx.grid;
  const int n = grid.dim();
  const double h = grid.h();
  Eigen::VectorXd boundary_point(n);
  for (int j = begin; j < end; ++j) {
    const double aj = ctx.node_weight[j];
    double diag = 0.0;
    for (int d = 0; d < n; ++d) {
      for (int s = 0; s < 2; ++s) {
        const Arm& arm = grid.arm(j, d, s);
        if (arm.neighbor >= 0) {
          // Geometric mean is commutative, so both slots of a face get identical bits.
          const double w = ctx.scale * std::sqrt(aj * ctx.node_weight[arm.neighbor]);
          out.emplace_back(j, arm.neighbor, -w);
          diag += w;
        } else {
          boundary_point = grid.position(j);
          boundary_point[d] += (s == 1 ? 1.0 : -1.0) * arm.theta * h;
          const double ab = ctx.model.exp_f(boundary_point, n - 2.0);
          const double w = ctx.scale * std::sqrt(aj * ab) / arm.theta;
          diag += ctx.fault ? -w : w;
        }
      }
    }
    out.emplace_back(j, j, diag);
  }
}

}  // namespace

OperatorPair assemble(const ConformalFactorModel& model, GridPtr grid,
                      const AssemblyOptions& options) {
  if (!grid) throw std::invalid_argument("assemble: null grid");
  if (grid->dim() != model.dim())
    throw DimensionError("grid and model dimensions differ");
  const int count = grid->size();
  const int n = grid->dim();
  const double h = grid->h();

  Eigen::VectorXd node_weight(count);
  Eigen::VectorXd mass(count);
  const double cell = std::pow(h, n);
  for (int j = 0; j < count; ++j) {
    node_weight[j] = model.exp_f(grid->position(j), n - 2.0);
    mass[j] = model.exp_f(grid->position(j), n) * cell;
  }

  const RowContext ctx{model, *grid, node_weight, std::pow(h, n - 2), options.inject_sign_fault};
  const int threads = std::max(1, std::min(options.threads, count));
  std::vector<std::vector<Triplet>> chunks(static_cast<std::size_t>(threads));
  if (threads == 1) {
    chunks[0].reserve(static_cast<std::size_t>(count) * (2 * n + 1));
    assemble_rows(ctx, 0, count, chunks[0]);
  } else {
    std::vector<std::thread> workers;
    for (int t = 0; t < threads; ++t) {
      const int begin = static_cast<int>(static_cast<long>(count) * t / threads);
      const int end = static_cast<int>(static_cast<long>(count) * (t + 1) / threads);
      workers.emplace_back([&, t, begin, end] { assemble_rows(ctx, begin, end, chunks[t]); });
    }
    for (auto& w : workers) w.join();
  }

  std::vector<Triplet> all;
  std::size_t total = 0;
  for (const auto& c : chunks) total += c.size();
  all.reserve(total);
  for (auto& c : chunks) all.insert(all.end(), c.begin(), c.end());

  SparseMatrix a(count, count);
  a.setFromTriplets(all.begin(), all.end());
  a.makeCompressed();
  return OperatorPair{std::move(a), std::move(mass), std::move(grid), model};
}

double verify_assembly(const OperatorPair& pair, const ScalarField& field) {
  const Grid& grid = *pair.grid;
  const int count = grid.size();
  Eigen::VectorXd sampled(count);
  for (int j = 0; j < count; ++j) sampled[j] = field.value(grid.position(j));
  const Eigen::VectorXd applied = pair.stiffness * sampled;

  double worst = 0.0;
  const double exclusion = 2.0 * grid.h() * (1.0 - 1e-12);
  for (int j = 0; j < count; ++j) {
    if (grid.domain().boundary_distance(grid.position(j)) < exclusion) continue;
    const double exact = -conformal_laplacian_of(pair.model, field, grid.position(j));
    worst = std::max(worst, std::abs(applied[j] / pair.mass[j] - exact));
  }
  return worst;
}

double verify_assembly(const ConformalFactorModel& model, GridPtr grid, const ScalarField& field) {
  return verify_assembly(assemble(model, std::move(grid)), field);
}

bool positive_definite(const SparseMatrix& a) {
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower> ldlt(a);
  if (ldlt.info() != Eigen::Success) return false;
  return ldlt.vectorD().minCoeff() > 0.0;
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};

std::unique_ptr<std::FILE, FileCloser> open_for_write(const std::string& path) {
  std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "w"));
  if (!f) throw Error("cannot open " + path + " for writing");
  return f;
}

}  // namespace

void write_coo(const std::string& path, const SparseMatrix& a) {
  auto f = open_for_write(path);
  // Row-major order so the dump does not depend on the storage layout.
  const SparseMatrix rows = a.transpose();
  for (int c = 0; c < rows.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(rows, c); it; ++it)
      std::fprintf(f.get(), "%d %d %.17g\n", static_cast<int>(it.col()), static_cast<int>(it.row()),
                   it.value());
}

void write_coo_diagonal(const std::string& path, const Eigen::VectorXd& diag) {
  auto f = open_for_write(path);
  for (Eigen::Index j = 0; j < diag.size(); ++j)
    std::fprintf(f.get(), "%d %d %.17g\n", static_cast<int>(j), static_cast<int>(j), diag[j]);
}

}  // namespace confspec
