#include "confspec/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "confspec/errors.hpp"
#include "confspec/functionals.hpp"

namespace confspec {

EigenSequence EigenSequence::make(int n, std::vector<double> values) {
  if (n < 1) throw DimensionError("sequence dimension must be >= 1");
  if (values.empty()) throw std::invalid_argument("eigenvalue sequence is empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || !(values[i] > 0.0))
      throw std::invalid_argument("eigenvalues must be finite and positive");
    if (i > 0 && values[i] < values[i - 1])
      throw std::invalid_argument("eigenvalues must be non-decreasing");
  }
  return EigenSequence{n, std::move(values)};
}

namespace {

struct FamilyEntry {
  Family family;
  const char* name;
};

constexpr FamilyEntry kFamilies[] = {
    {Family::Ppw, "ppw"},
    {Family::HileProtter, "hile_protter"},
    {Family::Yang, "yang"},
    {Family::ChengYangSphere, "cheng_yang_sphere"},
    {Family::ChengYangHyperbolic, "cheng_yang_hyperbolic"},
    {Family::ChengConjecture, "cheng_conjecture"},
    {Family::HyperbolicGap, "hyperbolic_gap"},
    {Family::RhoRatio, "rho_ratio"},
    {Family::AbBounds, "ab_bounds"},
    {Family::PowerGap, "power_gap"},
    {Family::PowerGapShifted, "power_gap_shifted"},
};

double sequence_tol(double lhs, double rhs) {
  return kSequenceTolerance * std::max({std::abs(lhs), std::abs(rhs), 1.0});
}

void finish(InequalityReport& r) {
  r.slack = r.rhs - r.lhs;
  r.satisfied = r.slack >= -r.abs_tol;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

double require_param(double v, const char* name, Family family) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(family_name(family) + " needs parameter '" + name + "'");
  }
  return v;
}

// C and d of  sum (L - l)^2 <= C sum (L - l)(l + d).
struct Quadratic {
  double c;
  double d;
  std::string statement;
};

Quadratic quadratic_form(Family family, int n, const FamilyParams& params) {
  const double dn = n;
  switch (family) {
    case Family::Yang:
      return {4.0 / dn, 0.0, "sum (L - l_i)^2 <= (4/n) sum (L - l_i) l_i"};
    case Family::ChengYangSphere:
      return {4.0 / dn, dn * dn / 4.0, "sum (L - l_i)^2 <= (4/n) sum (L - l_i)(l_i + n^2/4)"};
    case Family::ChengYangHyperbolic:
      return {4.0, -(dn - 1) * (dn - 1) / 4.0,
              "sum (L - l_i)^2 <= 4 sum (L - l_i)(l_i - (n-1)^2/4)"};
    case Family::ChengConjecture:
      return {4.0 / dn, -(dn - 1) * (dn - 1) / 4.0,
              "sum (L - l_i)^2 <= (4/n) sum (L - l_i)(l_i - (n-1)^2/4)"};
    case Family::RhoRatio: {
      const double hi = require_param(params.rho_max, "rho_max", family);
      const double lo = require_param(params.rho_min, "rho_min", family);
      if (!(lo > 0.0) || hi < lo) throw std::invalid_argument("rho_ratio needs rho_max >= rho_min > 0");
      return {hi / lo * 4.0 / dn, -(dn * dn - 2 * dn - 4) / 4.0,
              "sum (L - l_i)^2 <= (rho_max/rho_min)(4/n) sum (L - l_i)(l_i - (n^2-2n-4)/4)"};
    }
    case Family::AbBounds: {
      const double a = require_param(params.a, "a", family);
      const double b = require_param(params.b, "b", family);
      if (!(a > 0.0) || b < a) throw std::invalid_argument("ab_bounds needs b >= a > 0");
      return {b / a * 4.0 / dn, -(dn * dn - 2 * dn - 4) / 4.0,
              "sum (L - l_i)^2 <= (b/a)(4/n) sum (L - l_i)(l_i - (n^2-2n-4)/4)"};
    }
    default:
      throw std::invalid_argument(family_name(family) + " is not a quadratic family");
  }
}

nlohmann::json params_json(Family family, const FamilyParams& p) {
  nlohmann::json j = nlohmann::json::object();
  switch (family) {
    case Family::RhoRatio:
      j["rho_max"] = p.rho_max;
      j["rho_min"] = p.rho_min;
      break;
    case Family::AbBounds:
      j["a"] = p.a;
      j["b"] = p.b;
      break;
    case Family::PowerGap:
    case Family::PowerGapShifted:
      j["t"] = p.t;
      break;
    default:
      break;
  }
  return j;
}

// Admitting case of the parameter predicate behind PowerGap, 0 when none applies.
int power_gap_case(int n, double t) {
  if (n >= 5 && t >= 0.0) return 1;
  const double q = -0.25 * n * n + n + 1.0;
  if (n >= 2 && n <= 4 && t >= 0.0 && t <= n / q) return 2;
  if (n >= 5 && t <= n / q) return 3;
  return 0;
}

int power_gap_shifted_case(int n, double t) {
  const double q = static_cast<double>(n) * n - 4.0 * n - 4.0;
  const double limit = 2.0 * (n - 2) / q;
  if (n >= 5 && t >= 0.0 && t <= limit) return 1;
  if (n >= 2 && n <= 4 && t <= limit) return 2;
  return 0;
}

}  // namespace

std::string family_name(Family family) {
  for (const auto& e : kFamilies)
    if (e.family == family) return e.name;
  return "unknown";
}

Family parse_family(const std::string& name) {
  std::string key = name;
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
    return c == '-' ? '_' : static_cast<char>(std::tolower(c));
  });
  for (const auto& e : kFamilies)
    if (key == e.name) return e.family;
  throw std::invalid_argument("unknown inequality family '" + name + "'");
}

nlohmann::json to_json(const InequalityReport& r) {
  nlohmann::json j;
  j["family"] = r.family;
  j["k"] = r.k;
  j["n"] = r.n;
  j["params"] = r.params;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["slack"] = r.slack;
  j["satisfied"] = r.satisfied;
  j["applicable"] = r.applicable;
  j["asserted"] = r.asserted;
  j["abs_tol"] = r.abs_tol;
  j["note"] = r.note;
  j["anchors"] = r.anchors;
  j["lhs_terms"] = r.lhs_terms;
  j["rhs_terms"] = r.rhs_terms;
  if (!r.audit.empty()) j["audit"] = r.audit;
  return j;
}

InequalityReport check_sequence_inequality(const EigenSequence& seq, int k, Family family,
                                           const FamilyParams& params) {
  const bool single_gap = family == Family::HyperbolicGap || family == Family::PowerGap ||
                          family == Family::PowerGapShifted;
  const int used_k = single_gap ? 1 : k;
  if (used_k < 1) throw IndexError("k must be >= 1");
  if (used_k + 1 > seq.size()) {
    throw IndexError("k + 1 = " + std::to_string(used_k + 1) + " exceeds the sequence length " +
                     std::to_string(seq.size()));
  }
  const int n = seq.n;
  const double dn = n;
  const auto& l = seq.values;
  const double big = l[used_k];

  InequalityReport r;
  r.family = family_name(family);
  r.k = used_k;
  r.n = n;
  r.params = params_json(family, params);
  if (single_gap && k != 1) r.note = "k forced to 1";

  switch (family) {
    case Family::Ppw: {
      double sum = 0.0;
      for (int i = 0; i < used_k; ++i) sum += l[i];
      r.lhs = big - l[used_k - 1];
      r.rhs = 4.0 / (used_k * dn) * sum;
      r.anchors = {"l_{k+1} - l_k <= (4/(kn)) sum_{i<=k} l_i"};
      break;
    }
    case Family::HileProtter: {
      r.anchors = {"sum_{i<=k} l_i / (l_{k+1} - l_i) >= kn/4"};
      r.lhs = used_k * dn / 4.0;
      if (!(big > l[used_k - 1])) {
        r.applicable = false;
        r.rhs = std::numeric_limits<double>::infinity();
        r.note = "not applicable: needs l_{k+1} > l_k";
        r.abs_tol = sequence_tol(r.lhs, 0.0);
        r.slack = r.rhs - r.lhs;
        r.satisfied = false;
        return r;
      }
      for (int i = 0; i < used_k; ++i) {
        r.rhs_terms.push_back(l[i] / (big - l[i]));
        r.rhs += r.rhs_terms.back();
      }
      break;
    }
    case Family::HyperbolicGap:
      r.lhs = l[1] - l[0];
      r.rhs = 4.0 / dn * (l[0] - (dn * dn - 2 * dn - 4) / 4.0);
      r.anchors = {"l_2 - l_1 <= (4/n)(l_1 - (n^2 - 2n - 4)/4)"};
      break;
    case Family::PowerGap: {
      const double t = require_param(params.t, "t", family);
      r.lhs = l[1] - l[0];
      r.rhs = 4.0 / dn * l[0];
      r.anchors = {"l_2 - l_1 <= (4/n) l_1"};
      const int which = power_gap_case(n, t);
      if (which == 0) {
        r.applicable = false;
        r.note = "not applicable: t = " + fmt(t) + " outside the admissible range for n = " +
                 std::to_string(n);
      } else {
        r.params["case"] = which;
      }
      break;
    }
    case Family::PowerGapShifted: {
      const double t = require_param(params.t, "t", family);
      r.lhs = l[1] - l[0];
      r.rhs = 4.0 / dn * (l[0] - (dn * dn - 4 * dn - 4) * t * t / 16.0 - dn * t / 4.0);
      r.anchors = {"l_2 - l_1 <= (4/n)(l_1 - (n^2-4n-4) t^2/16 - n t/4)"};
      const int which = power_gap_shifted_case(n, t);
      if (which == 0) {
        r.applicable = false;
        r.note = "not applicable: t = " + fmt(t) + " outside the admissible range for n = " +
                 std::to_string(n);
      } else {
        r.params["case"] = which;
      }
      break;
    }
    default: {
      const Quadratic q = quadratic_form(family, n, params);
      r.anchors = {q.statement};
      for (int i = 0; i < used_k; ++i) {
        const double gap = big - l[i];
        r.lhs_terms.push_back(gap * gap);
        r.rhs_terms.push_back(q.c * gap * (l[i] + q.d));
        r.lhs += r.lhs_terms.back();
        r.rhs += r.rhs_terms.back();
      }
      if (family == Family::ChengConjecture) {
        r.asserted = false;
        r.note = "open conjecture: reported, not asserted";
      }
      break;
    }
  }
  r.abs_tol = sequence_tol(r.lhs, r.rhs);
  finish(r);
  if (!r.applicable) r.satisfied = false;
  return r;
}

namespace {

void require_pairs(const SpectralResult& result, int k) {
  if (k < 1) throw IndexError("k must be >= 1");
  if (k + 1 > result.count()) {
    throw IndexError("k + 1 = " + std::to_string(k + 1) + " eigenpairs needed, result has " +
                     std::to_string(result.count()));
  }
}

void integral_tolerance(InequalityReport& r, double allowance) {
  r.abs_tol = allowance * std::max(std::abs(r.lhs), std::abs(r.rhs));
  r.params["allowance"] = allowance;
  finish(r);
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

InequalityReport check_half_space_weighted(const SpectralResult& result, double t, int k,
                                           double allowance) {
  const ConformalFactorModel& model = result.model;
  const bool half_space = model.kind() == ModelKind::HalfSpacePower &&
                          std::abs(model.exponent() - t) <= 1e-12 * std::max(1.0, std::abs(t));
  const bool flat = model.kind() == ModelKind::Flat && t == 0.0;
  if (!half_space && !flat) {
    throw ModelMismatch("half-space weighted check with t = " + fmt(t) + " on model " + model.name());
  }
  require_pairs(result, k);
  const int n = model.dim();
  const double dn = n;
  const double coeff = (-dn * dn / 4.0 + dn + 1.0) * t * t - dn * t;

  Eigen::VectorXd w_t(k + 1), w_2t(k + 1);
  const WeightedIntegralSpec spec_t{[&](PointRef x) { return t == 0.0 ? 1.0 : std::pow(x[n - 1], t); }};
  const WeightedIntegralSpec spec_2t{[&](PointRef x) { return std::pow(x[n - 1], 2.0 * t - 2.0); }};
  for (int i = 0; i <= k; ++i) {
    w_t[i] = weighted_integral(result, i, spec_t);
    // The second weight only enters through its coefficient.
    w_2t[i] = coeff == 0.0 ? 0.0 : weighted_integral(result, i, spec_2t);
  }

  InequalityReport r;
  r.family = "half_space_weighted";
  r.k = k;
  r.n = n;
  r.params = {{"t", t}, {"coefficient", coeff}};
  r.anchors = {
      "sum (L - l_i)^2 n int x_n^t u_i^2 <= sum (L - l_i)(4 l_i int x_n^t u_i^2 + "
      "((-n^2/4 + n + 1) t^2 - n t) int x_n^{2t-2} u_i^2)"};
  const double big = result.eigenvalues[k];
  for (int i = 0; i < k; ++i) {
    const double gap = big - result.eigenvalues[i];
    r.lhs_terms.push_back(gap * gap * dn * w_t[i]);
    r.rhs_terms.push_back(gap * (4.0 * result.eigenvalues[i] * w_t[i] + coeff * w_2t[i]));
    r.lhs += r.lhs_terms.back();
    r.rhs += r.rhs_terms.back();
  }
  r.audit["int_xn_t"] = to_vector(w_t);
  r.audit["int_xn_2t_minus_2"] = to_vector(w_2t);
  integral_tolerance(r, allowance);
  return r;
}

InequalityReport check_radial_weighted(const SpectralResult& result, int k, bool specialize_disk,
                                       double allowance) {
  const ConformalFactorModel& model = result.model;
  if (!model.is_radial())
    throw ModelMismatch("radial weighted check on non-radial model " + model.name());
  if (specialize_disk && !(model.kind() == ModelKind::DiskPower && model.exponent() == 2.0))
    throw ModelMismatch("the Poincare-ball form needs DiskPower with t = 2, got " + model.name());
  require_pairs(result, k);
  const int n = model.dim();
  const double dn = n;
  const Grid& grid = *result.grid;

  InequalityReport r;
  r.k = k;
  r.n = n;
  const double big = result.eigenvalues[k];

  if (specialize_disk) {
    // P = int (1-|x|^2)^2 u^2, Q = int (1-|x|^2)^2 |x|^2 u^2.
    Eigen::VectorXd p(k + 1), q(k + 1);
    const WeightedIntegralSpec sp{[](PointRef x) {
      const double s = 1.0 - x.squaredNorm();
      return s * s;
    }};
    const WeightedIntegralSpec sq{[](PointRef x) {
      const double r2 = x.squaredNorm();
      return (1.0 - r2) * (1.0 - r2) * r2;
    }};
    for (int i = 0; i <= k; ++i) {
      p[i] = weighted_integral(result, i, sp);
      q[i] = weighted_integral(result, i, sq);
    }
    r.family = "poincare_disk_weighted";
    r.anchors = {
        "sum (L - l_i)^2 n int (1-|x|^2)^2 u_i^2 <= sum (L - l_i)(4 l_i int (1-|x|^2)^2 u_i^2 "
        "- n^2 int (1-|x|^2)^2 u_i^2 + (2n+4) int (1-|x|^2)^2 |x|^2 u_i^2)"};
    for (int i = 0; i < k; ++i) {
      const double gap = big - result.eigenvalues[i];
      r.lhs_terms.push_back(gap * gap * dn * p[i]);
      r.rhs_terms.push_back(gap * (4.0 * result.eigenvalues[i] * p[i] - dn * dn * p[i] +
                                   (2.0 * dn + 4.0) * q[i]));
      r.lhs += r.lhs_terms.back();
      r.rhs += r.rhs_terms.back();
    }
    r.audit["int_one_minus_r2_sq"] = to_vector(p);
    r.audit["int_one_minus_r2_sq_r2"] = to_vector(q);
  } else {
    Eigen::VectorXd e2 = Eigen::VectorXd::Zero(k + 1);
    Eigen::VectorXd fd = Eigen::VectorXd::Zero(k + 1);
    Eigen::VectorXd gd = Eigen::VectorXd::Zero(k + 1);
    for (int j = 0; j < grid.size(); ++j) {
      const auto x = grid.position(j);
      const double rad = x.norm();
      const double df = model.radial_df(rad);
      const double d2f = model.radial_d2f(rad);
      // (n-1) f'(r)/r tends to (n-1) f''(0) at the centre.
      const double radial_lap = rad > 0.0 ? d2f + (dn - 1.0) * df / rad : dn * d2f;
      const double em2 = model.exp_f(x, -2.0);
      const double em4 = model.exp_f(x, -4.0);
      for (int i = 0; i <= k; ++i) {
        const double uu = result.eigenvectors(j, i) * result.eigenvectors(j, i) * result.mass[j];
        e2[i] += em2 * uu;
        fd[i] += em4 * df * df * uu;
        gd[i] += em4 * radial_lap * uu;
      }
    }
    r.family = "radial_weighted";
    r.anchors = {
        "sum (L - l_i)^2 n int e^{-2f} u_i^2 <= sum (L - l_i)(4 l_i int e^{-2f} u_i^2 "
        "- (n^2-4n-4) int e^{-4f} f'^2 u_i^2 - 2n int e^{-4f}(f'' + (n-1) f'/r) u_i^2)"};
    for (int i = 0; i < k; ++i) {
      const double gap = big - result.eigenvalues[i];
      r.lhs_terms.push_back(gap * gap * dn * e2[i]);
      r.rhs_terms.push_back(gap * (4.0 * result.eigenvalues[i] * e2[i] -
                                   (dn * dn - 4.0 * dn - 4.0) * fd[i] - 2.0 * dn * gd[i]));
      r.lhs += r.lhs_terms.back();
      r.rhs += r.rhs_terms.back();
    }
    r.audit["int_em2f"] = to_vector(e2);
    r.audit["int_em4f_df2"] = to_vector(fd);
    r.audit["int_em4f_radial_laplacian"] = to_vector(gd);
  }
  integral_tolerance(r, allowance);
  return r;
}

namespace {

// Per-eigenpair integrals (L_i, R_i) of the coordinate inequality for axis p.
void coordinate_integrals(const SpectralResult& result, int p, int count, GradientScheme scheme,
                          Eigen::VectorXd& lhs, Eigen::VectorXd& rhs) {
  const Grid& grid = *result.grid;
  const ConformalFactorModel& model = result.model;
  const int n = grid.dim();
  const double dn = n;
  const double h = grid.h();
  lhs = Eigen::VectorXd::Zero(count);
  rhs = Eigen::VectorXd::Zero(count);

  if (scheme == GradientScheme::Nodal) {
    for (int i = 0; i < count; ++i) {
      const Eigen::MatrixXd grad = discrete_gradient(result, i);
      for (int j = 0; j < grid.size(); ++j) {
        const auto x = grid.position(j);
        const double u = result.eigenvectors(j, i);
        const double dpf = n == 2 ? 0.0 : model.grad_f(x)[p];
        const double em2 = model.exp_f(x, -2.0);
        const double inner = em2 * (2.0 * grad(p, j) + (dn - 2.0) * dpf * u);
        lhs[i] -= x[p] * u * inner * result.mass[j];
        rhs[i] += inner * inner * result.mass[j];
      }
    }
    return;
  }

  // Face quadrature: every stencil face along p, with measure theta h^n, the difference
  // quotient across the face and the mean of the two end values.
  const double cell = std::pow(h, n);
  Eigen::VectorXd mid(n);
  auto face = [&](int a, int b, double theta, const Eigen::VectorXd& m) {
    const double e_nm2 = model.exp_f(m, dn - 2.0);
    const double e_nm4 = model.exp_f(m, dn - 4.0);
    const double dpf = n == 2 ? 0.0 : model.grad_f(m)[p];
    const double measure = theta * cell;
    for (int i = 0; i < count; ++i) {
      const double ua = a >= 0 ? result.eigenvectors(a, i) : 0.0;
      const double ub = b >= 0 ? result.eigenvectors(b, i) : 0.0;
      const double g = (ub - ua) / (theta * h);
      const double um = 0.5 * (ua + ub);
      const double q = 2.0 * g + (dn - 2.0) * dpf * um;
      lhs[i] -= measure * m[p] * um * e_nm2 * q;
      rhs[i] += measure * e_nm4 * q * q;
    }
  };
  for (int j = 0; j < grid.size(); ++j) {
    const Arm& back = grid.arm(j, p, 0);
    const Arm& fwd = grid.arm(j, p, 1);
    if (back.neighbor < 0) {
      mid = grid.position(j);
      mid[p] -= 0.5 * back.theta * h;
      face(-1, j, back.theta, mid);
    }
    mid = grid.position(j);
    mid[p] += 0.5 * fwd.theta * h;
    face(j, fwd.neighbor, fwd.theta, mid);
  }
}

InequalityReport coordinate_report(const SpectralResult& result, int k,
                                   const Eigen::VectorXd& li, const Eigen::VectorXd& ri,
                                   double allowance) {
  InequalityReport r;
  r.k = k;
  r.n = result.dim();
  r.anchors = {
      "sum (L - l_i)^2 int x_p u_i (-2 e^{-2f} d_p u_i - (n-2) e^{-2f} d_p f u_i) <= "
      "sum (L - l_i) int |2 e^{-2f} d_p u_i + (n-2) e^{-2f} d_p f u_i|^2"};
  const double big = result.eigenvalues[k];
  for (int i = 0; i < k; ++i) {
    const double gap = big - result.eigenvalues[i];
    r.lhs_terms.push_back(gap * gap * li[i]);
    r.rhs_terms.push_back(gap * ri[i]);
    r.lhs += r.lhs_terms.back();
    r.rhs += r.rhs_terms.back();
  }
  r.audit["lhs_integrals"] = to_vector(li);
  r.audit["rhs_integrals"] = to_vector(ri);
  integral_tolerance(r, allowance);
  return r;
}

const char* scheme_name(GradientScheme s) { return s == GradientScheme::Face ? "face" : "nodal"; }

}  // namespace

InequalityReport check_coordinate(const SpectralResult& result, int p, int k,
                                  GradientScheme scheme, double allowance) {
  if (p < 0 || p >= result.dim()) throw IndexError("axis " + std::to_string(p) + " out of range");
  require_pairs(result, k);
  Eigen::VectorXd li, ri;
  coordinate_integrals(result, p, k, scheme, li, ri);
  InequalityReport r = coordinate_report(result, k, li, ri, allowance);
  r.family = "coordinate";
  r.params["p"] = p;
  r.params["scheme"] = scheme_name(scheme);
  return r;
}

InequalityReport check_coordinate_sum(const SpectralResult& result, int k, GradientScheme scheme,
                                      double allowance) {
  require_pairs(result, k);
  Eigen::VectorXd lsum = Eigen::VectorXd::Zero(k), rsum = Eigen::VectorXd::Zero(k);
  for (int p = 0; p < result.dim(); ++p) {
    Eigen::VectorXd li, ri;
    coordinate_integrals(result, p, k, scheme, li, ri);
    lsum += li;
    rsum += ri;
  }
  InequalityReport r = coordinate_report(result, k, lsum, rsum, allowance);
  r.family = "coordinate_sum";
  r.params["scheme"] = scheme_name(scheme);
  return r;
}

double bound_next_eigenvalue(const EigenSequence& seq, int k, Family family) {
  if (k < 1 || k > seq.size())
    throw IndexError("k = " + std::to_string(k) + " outside [1, " + std::to_string(seq.size()) + "]");
  if (family != Family::Yang && family != Family::ChengYangSphere &&
      family != Family::ChengYangHyperbolic && family != Family::ChengConjecture) {
    throw std::invalid_argument("no next-eigenvalue bound for family " + family_name(family));
  }
  const Quadratic q = quadratic_form(family, seq.n, {});
  // k L^2 - L sum (2 l + C (l + d)) + sum (l^2 + C l (l + d)) <= 0.
  double b = 0.0, c = 0.0;
  for (int i = 0; i < k; ++i) {
    const double l = seq.values[i];
    b += 2.0 * l + q.c * (l + q.d);
    c += l * l + q.c * l * (l + q.d);
  }
  const double a = k;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    throw NoRealRoot(family_name(family) + ": discriminant " + fmt(disc) +
                     " < 0, the sequence violates the family's hypothesis");
  }
  const double s = std::sqrt(disc);
  // Larger root without cancellation.
  return b >= 0.0 ? (b + s) / (2.0 * a) : (2.0 * c) / (b - s);
}

}  // namespace confspec
