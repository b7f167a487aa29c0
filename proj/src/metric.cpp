#include "confspec/metric.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "confspec/errors.hpp"

namespace confspec {

namespace {

void require_dim(int dim) {
  if (dim < 1) throw DimensionError("chart dimension must be at least 1");
}

void require_finite(double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("model exponent must be finite");
}

bool close_relative(double approx, double exact, double rel) {
  return std::abs(approx - exact) <= rel * std::max(1.0, std::abs(exact));
}

}  // namespace

ConformalFactorModel::ConformalFactorModel(ModelKind kind, int dim, double t)
    : kind_(kind), dim_(dim), t_(t) {}

ConformalFactorModel ConformalFactorModel::flat(int dim) {
  require_dim(dim);
  return {ModelKind::Flat, dim, 0.0};
}

ConformalFactorModel ConformalFactorModel::half_space_power(int dim, double t) {
  require_dim(dim);
  require_finite(t);
  return {ModelKind::HalfSpacePower, dim, t};
}

ConformalFactorModel ConformalFactorModel::disk_power(int dim, double t) {
  require_dim(dim);
  require_finite(t);
  return {ModelKind::DiskPower, dim, t};
}

ConformalFactorModel ConformalFactorModel::stereographic_sphere(int dim) {
  require_dim(dim);
  return {ModelKind::StereographicSphere, dim, 0.0};
}

ConformalFactorModel ConformalFactorModel::custom_radial(int dim, RadialProfile profile) {
  require_dim(dim);
  if (!profile.f || !profile.df || !profile.d2f)
    throw std::invalid_argument("custom radial profile needs f, f' and f''");
  if (!(profile.radius_limit > 0.0))
    throw std::invalid_argument("custom radial profile needs a positive radius limit");

  // Spot-check the supplied derivatives against central differences.
  const double span = std::isfinite(profile.radius_limit) ? profile.radius_limit : 2.0;
  constexpr double kStep = 1e-5;
  for (double frac : {0.1, 0.3, 0.5, 0.7, 0.85}) {
    const double r = frac * span;
    const double fd1 = (profile.f(r + kStep) - profile.f(r - kStep)) / (2.0 * kStep);
    const double fd2 = (profile.df(r + kStep) - profile.df(r - kStep)) / (2.0 * kStep);
    if (!close_relative(fd1, profile.df(r), 1e-6) || !close_relative(fd2, profile.d2f(r), 1e-6)) {
      std::ostringstream msg;
      msg << "custom radial derivatives inconsistent with f at r = " << r;
      throw std::invalid_argument(msg.str());
    }
  }

  ConformalFactorModel model(ModelKind::CustomRadial, dim, 0.0);
  model.profile_ = std::make_shared<const RadialProfile>(std::move(profile));
  return model;
}

bool ConformalFactorModel::is_radial() const noexcept {
  return kind_ == ModelKind::Flat || kind_ == ModelKind::DiskPower ||
         kind_ == ModelKind::StereographicSphere || kind_ == ModelKind::CustomRadial;
}

bool ConformalFactorModel::is_hyperbolic() const noexcept {
  return (kind_ == ModelKind::HalfSpacePower || kind_ == ModelKind::DiskPower) && t_ == 2.0;
}

std::string ConformalFactorModel::name() const {
  std::ostringstream out;
  switch (kind_) {
    case ModelKind::Flat: out << "flat"; break;
    case ModelKind::HalfSpacePower: out << "half_space_power(t=" << t_ << ")"; break;
    case ModelKind::DiskPower: out << "disk_power(t=" << t_ << ")"; break;
    case ModelKind::StereographicSphere: out << "stereographic_sphere"; break;
    case ModelKind::CustomRadial: out << "custom_radial"; break;
  }
  out << ", n=" << dim_;
  return out.str();
}

double ConformalFactorModel::radius_limit() const noexcept {
  switch (kind_) {
    case ModelKind::DiskPower: return 1.0;
    case ModelKind::CustomRadial: return profile_->radius_limit;
    default: return std::numeric_limits<double>::infinity();
  }
}

bool ConformalFactorModel::admissible(PointRef x) const {
  if (x.size() != dim_) return false;
  if (!x.allFinite()) return false;
  switch (kind_) {
    case ModelKind::HalfSpacePower: return x[dim_ - 1] > 0.0;
    case ModelKind::DiskPower:
    case ModelKind::CustomRadial: return x.norm() < radius_limit();
    default: return true;
  }
}

void ConformalFactorModel::require_admissible(PointRef x) const {
  if (x.size() != dim_) {
    throw DimensionError("point has dimension " + std::to_string(x.size()) + ", model expects " +
                         std::to_string(dim_));
  }
  if (!admissible(x)) {
    std::ostringstream msg;
    msg << "point (" << x.transpose() << ") outside the admissible region of " << name();
    throw DomainError(msg.str());
  }
}

double ConformalFactorModel::radial_f(double r) const {
  switch (kind_) {
    case ModelKind::Flat: return 0.0;
    case ModelKind::DiskPower: return std::log(2.0) - 0.5 * t_ * std::log1p(-r * r);
    case ModelKind::StereographicSphere: return std::log(2.0) - std::log1p(r * r);
    case ModelKind::CustomRadial: return profile_->f(r);
    default: throw DomainError(name() + " is not radial");
  }
}

double ConformalFactorModel::radial_df(double r) const {
  switch (kind_) {
    case ModelKind::Flat: return 0.0;
    case ModelKind::DiskPower: return t_ * r / (1.0 - r * r);
    case ModelKind::StereographicSphere: return -2.0 * r / (1.0 + r * r);
    case ModelKind::CustomRadial: return profile_->df(r);
    default: throw DomainError(name() + " is not radial");
  }
}

double ConformalFactorModel::radial_d2f(double r) const {
  switch (kind_) {
    case ModelKind::Flat: return 0.0;
    case ModelKind::DiskPower: {
      const double s = 1.0 - r * r;
      return t_ * (1.0 + r * r) / (s * s);
    }
    case ModelKind::StereographicSphere: {
      const double s = 1.0 + r * r;
      return -2.0 * (1.0 - r * r) / (s * s);
    }
    case ModelKind::CustomRadial: return profile_->d2f(r);
    default: throw DomainError(name() + " is not radial");
  }
}

double ConformalFactorModel::f(PointRef x) const {
  require_admissible(x);
  if (kind_ == ModelKind::HalfSpacePower) return -0.5 * t_ * std::log(x[dim_ - 1]);
  return radial_f(x.norm());
}

Eigen::VectorXd ConformalFactorModel::grad_f(PointRef x) const {
  require_admissible(x);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim_);
  if (kind_ == ModelKind::HalfSpacePower) {
    g[dim_ - 1] = -t_ / (2.0 * x[dim_ - 1]);
    return g;
  }
  const double r = x.norm();
  if (r == 0.0) return g;
  return (radial_df(r) / r) * x;
}

double ConformalFactorModel::laplacian_f(PointRef x) const {
  require_admissible(x);
  if (kind_ == ModelKind::HalfSpacePower) {
    const double xn = x[dim_ - 1];
    return t_ / (2.0 * xn * xn);
  }
  const double r = x.norm();
  // f'(r)/r -> f''(0) at the origin for a smooth radial function.
  if (r == 0.0) return dim_ * radial_d2f(0.0);
  return radial_d2f(r) + (dim_ - 1) * radial_df(r) / r;
}

double ConformalFactorModel::exp_f(PointRef x, double s) const {
  require_admissible(x);
  switch (kind_) {
    case ModelKind::Flat: return 1.0;
    case ModelKind::HalfSpacePower: return std::pow(x[dim_ - 1], -0.5 * s * t_);
    case ModelKind::DiskPower: {
      const double r2 = x.squaredNorm();
      return std::pow(2.0, s) * std::pow(1.0 - r2, -0.5 * s * t_);
    }
    case ModelKind::StereographicSphere: {
      const double r2 = x.squaredNorm();
      return std::pow(2.0, s) * std::pow(1.0 + r2, -s);
    }
    case ModelKind::CustomRadial: {
      if (s == 0.0) return 1.0;
      return std::exp(s * profile_->f(x.norm()));
    }
  }
  return 1.0;
}

double eval_f(const ConformalFactorModel& model, PointRef x) { return model.f(x); }

Eigen::VectorXd eval_grad_f(const ConformalFactorModel& model, PointRef x) {
  return model.grad_f(x);
}

double conformal_laplacian_of(const ConformalFactorModel& model, const ScalarField& field,
                              PointRef x) {
  const int n = model.dim();
  const Eigen::VectorXd gf = model.grad_f(x);
  const Eigen::VectorXd gF = field.gradient(x);
  return model.exp_f(x, -2.0) * (field.laplacian(x) + (n - 2) * gf.dot(gF));
}

}  // namespace confspec
