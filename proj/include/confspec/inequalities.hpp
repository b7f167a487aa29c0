#pragma once

#include <limits>
#include <string>
#include <vector>

#include "confspec/eigensolver.hpp"
#include "json.hpp"

namespace confspec {

/// Ascending positive eigenvalues of an n-dimensional problem.
struct EigenSequence {
  int n = 2;
  std::vector<double> values;

  /// Validates positivity, ordering and n >= 1.
  static EigenSequence make(int n, std::vector<double> values);
  int size() const noexcept { return static_cast<int>(values.size()); }
};

/// Sequence-level inequality families. Every family compares lhs <= rhs.
enum class Family {
  /// lambda_{k+1} - lambda_k <= (4 / kn) sum lambda_i.
  Ppw,
  /// kn/4 <= sum lambda_i / (lambda_{k+1} - lambda_i); needs lambda_{k+1} > lambda_k.
  HileProtter,
  /// sum (L - lambda_i)^2 <= (4/n) sum (L - lambda_i) lambda_i with L = lambda_{k+1}.
  Yang,
  /// Yang with lambda_i + n^2/4 on the right.
  ChengYangSphere,
  /// sum (L - lambda_i)^2 <= 4 sum (L - lambda_i)(lambda_i - (n-1)^2/4).
  ChengYangHyperbolic,
  /// As ChengYangHyperbolic with 4 replaced by 4/n. Open problem: reported, never asserted.
  ChengConjecture,
  /// lambda_2 - lambda_1 <= (4/n)(lambda_1 - (n^2 - 2n - 4)/4); k is forced to 1.
  HyperbolicGap,
  /// sum (L - lambda_i)^2 <= (rho_max/rho_min)(4/n) sum (L - lambda_i)(lambda_i - (n^2-2n-4)/4).
  RhoRatio,
  /// RhoRatio with the factor b/a for domains inside a <= x_n^2 <= b.
  AbBounds,
  /// lambda_2 - lambda_1 <= (4/n) lambda_1 under the power-metric parameter predicate on t.
  PowerGap,
  /// lambda_2 - lambda_1 <= (4/n)(lambda_1 - (n^2-4n-4) t^2/16 - n t/4) for admissible t.
  PowerGapShifted,
};

std::string family_name(Family family);
/// Accepts the snake_case names returned by family_name.
Family parse_family(const std::string& name);

struct FamilyParams {
  static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
  double t = kUnset;
  double rho_max = kUnset;
  double rho_min = kUnset;
  double a = kUnset;
  double b = kUnset;
};

struct InequalityReport {
  std::string family;
  int k = 0;
  int n = 0;
  nlohmann::json params = nlohmann::json::object();
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double abs_tol = 0.0;
  bool satisfied = false;
  /// False when a parameter predicate or strict-gap precondition excludes the input.
  bool applicable = true;
  /// False for families that are recorded but never affect pass/fail.
  bool asserted = true;
  std::string note;
  /// Plain statements of the inequality being evaluated.
  std::vector<std::string> anchors;
  std::vector<double> lhs_terms;
  std::vector<double> rhs_terms;
  /// Integral vectors and other audit data.
  nlohmann::json audit = nlohmann::json::object();

  /// An asserted, applicable report that is not satisfied.
  bool violated() const noexcept { return asserted && applicable && !satisfied; }
};

nlohmann::json to_json(const InequalityReport& report);

/// Relative tolerance for pure-arithmetic checks.
inline constexpr double kSequenceTolerance = 1e-9;
/// Discretisation allowance for integral-based checks at the default grids.
inline constexpr double kIntegralAllowance = 0.02;

/// Evaluates a family on lambda_1..lambda_{k+1}. Throws IndexError when k + 1 > m.
/// Predicate failures return a report with applicable = false.
InequalityReport check_sequence_inequality(const EigenSequence& seq, int k, Family family,
                                           const FamilyParams& params = {});

/// Weighted inequality for the half-space power metric x_n^{-t} g:
///   sum (L - l_i)^2 n I_i <= sum (L - l_i)(4 l_i I_i + ((-n^2/4 + n + 1) t^2 - n t) J_i)
/// with I_i = int x_n^t u_i^2, J_i = int x_n^{2t-2} u_i^2 over the Riemannian volume.
/// Also accepts a Flat result when t = 0. Throws ModelMismatch otherwise.
InequalityReport check_half_space_weighted(const SpectralResult& result, double t, int k,
                                           double allowance = kIntegralAllowance);

/// Weighted inequality for a radial conformal factor f(r):
///   sum (L - l_i)^2 n E2_i <= sum (L - l_i)(4 l_i E2_i - (n^2-4n-4) F_i - 2n G_i)
/// E2 = int e^{-2f} u^2, F = int e^{-4f} f'^2 u^2, G = int e^{-4f}(f'' + (n-1) f'/r) u^2.
/// With specialize_disk the Poincare-ball form in terms of (1 - |x|^2) is evaluated
/// instead; it equals four times the general form term by term.
InequalityReport check_radial_weighted(const SpectralResult& result, int k, bool specialize_disk,
                                       double allowance = kIntegralAllowance);

enum class GradientScheme {
  /// Face quadrature on the stencil faces; the flat sum over p reproduces the Yang pair exactly.
  Face,
  /// Nodal quadrature with discrete_gradient.
  Nodal,
};

/// Coordinate-function inequality for a fixed axis p (0-based):
///   sum (L - l_i)^2 int x_p u_i (-2 e^{-2f} d_p u_i - (n-2) e^{-2f} d_p f u_i)
///     <= sum (L - l_i) int |2 e^{-2f} d_p u_i + (n-2) e^{-2f} d_p f u_i|^2.
InequalityReport check_coordinate(const SpectralResult& result, int p, int k,
                                  GradientScheme scheme = GradientScheme::Face,
                                  double allowance = kIntegralAllowance);
/// Sum of the per-axis sides over p = 0..n-1.
InequalityReport check_coordinate_sum(const SpectralResult& result, int k,
                                      GradientScheme scheme = GradientScheme::Face,
                                      double allowance = kIntegralAllowance);

/// Largest L with sum (L - l_i)^2 - C sum (L - l_i)(l_i + d) <= 0 over i = 1..k,
/// for Yang, ChengYangSphere, ChengYangHyperbolic and ChengConjecture.
/// Throws NoRealRoot when the quadratic has no real root.
double bound_next_eigenvalue(const EigenSequence& seq, int k, Family family);

}  // namespace confspec
