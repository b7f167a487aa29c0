#pragma once

#include <Eigen/Core>
#include <functional>
#include <limits>
#include <memory>
#include <string>

namespace confspec {

using PointRef = Eigen::Ref<const Eigen::VectorXd>;

enum class ModelKind { Flat, HalfSpacePower, DiskPower, StereographicSphere, CustomRadial };

/// Radial conformal factor f(r) together with its first two derivatives.
struct RadialProfile {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;
  /// Open radius the profile is defined on; infinity for a global chart.
  double radius_limit = std::numeric_limits<double>::infinity();
};

/// Smooth scalar field with analytic gradient and flat Laplacian.
struct ScalarField {
  std::function<double(PointRef)> value;
  std::function<Eigen::VectorXd(PointRef)> gradient;
  std::function<double(PointRef)> laplacian;
};

/// Conformal factor e^{2f} of a metric e^{2f}(dx_1^2 + ... + dx_n^2) on a flat chart.
///
/// Models:
///  - Flat: f = 0.
///  - HalfSpacePower(t): e^{2f} = x_n^{-t} on x_n > 0; t = 2 is the upper half-space
///    model of hyperbolic space.
///  - DiskPower(t): e^{2f} = 4 / (1 - |x|^2)^t on |x| < 1; t = 2 is the Poincare ball.
///  - StereographicSphere: e^{2f} = 4 / (1 + |x|^2)^2, the round unit sphere minus a pole.
///  - CustomRadial: a user supplied radial profile.
///
/// Evaluators are pure; a model may be shared between threads.
class ConformalFactorModel {
 public:
  static ConformalFactorModel flat(int dim);
  static ConformalFactorModel half_space_power(int dim, double t);
  static ConformalFactorModel disk_power(int dim, double t);
  static ConformalFactorModel stereographic_sphere(int dim);
  /// Throws std::invalid_argument when df or d2f disagree with finite differences
  /// of f (relative tolerance 1e-6).
  static ConformalFactorModel custom_radial(int dim, RadialProfile profile);

  ModelKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  /// Power t of the half-space and disk families; 0 for the others.
  double exponent() const noexcept { return t_; }
  bool is_radial() const noexcept;
  /// True for the two charts of H^n(-1) (half-space or disk power with t = 2).
  bool is_hyperbolic() const noexcept;
  std::string name() const;

  bool admissible(PointRef x) const;

  double f(PointRef x) const;
  Eigen::VectorXd grad_f(PointRef x) const;
  double laplacian_f(PointRef x) const;

  /// e^{s f(x)}, evaluated in closed form so that e.g. e^{2f} = 4 exactly at the
  /// centre of the Poincare ball.
  double exp_f(PointRef x, double s) const;

  // Radial profile; DomainError unless is_radial(). Flat counts as radial with f = 0.
  double radial_f(double r) const;
  double radial_df(double r) const;
  double radial_d2f(double r) const;
  /// Open radius of admissibility for radial models (1 for DiskPower).
  double radius_limit() const noexcept;

 private:
  ConformalFactorModel(ModelKind kind, int dim, double t);
  void require_admissible(PointRef x) const;

  ModelKind kind_;
  int dim_;
  double t_;
  std::shared_ptr<const RadialProfile> profile_;
};

double eval_f(const ConformalFactorModel& model, PointRef x);
Eigen::VectorXd eval_grad_f(const ConformalFactorModel& model, PointRef x);

/// Laplace-Beltrami operator of the conformal metric applied to F:
/// e^{-2f} (Delta F + (n - 2) grad f . grad F).
double conformal_laplacian_of(const ConformalFactorModel& model, const ScalarField& field,
                              PointRef x);

}  // namespace confspec
