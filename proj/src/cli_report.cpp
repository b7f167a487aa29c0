#include "confspec/cli_report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "confspec/errors.hpp"
#include "confspec/functionals.hpp"
#include "confspec/oracle.hpp"

namespace confspec {

using nlohmann::json;

ConformalFactorModel ModelSpec::build() const {
  if (kind == "flat") return ConformalFactorModel::flat(dim);
  if (kind == "half_space_power") return ConformalFactorModel::half_space_power(dim, t);
  if (kind == "disk_power") return ConformalFactorModel::disk_power(dim, t);
  if (kind == "stereographic_sphere") return ConformalFactorModel::stereographic_sphere(dim);
  throw ConfigError("model.kind", "unknown model '" + kind + "'");
}

ChartDomain DomainSpec::build() const {
  auto vec = [](const std::vector<double>& v) {
    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  };
  if (shape == "box") return ChartDomain::box(vec(lo), vec(hi));
  if (shape == "ball") return ChartDomain::ball(vec(center), radius);
  throw ConfigError("domain.shape", "unknown shape '" + shape + "'");
}

double RunConfig::level_h(int level) const { return h / std::ldexp(1.0, level); }

std::string RunConfig::hash() const {
  const std::string text = canonical.dump();
  std::uint64_t x = 1469598103934665603ull;
  for (unsigned char c : text) {
    x ^= c;
    x *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

namespace {

const std::set<std::string> kIntegralFamilies = {"half_space_weighted", "radial_weighted",
                                                 "poincare_disk_weighted", "coordinate",
                                                 "coordinate_sum"};

bool is_sequence_family(const std::string& name) {
  try {
    parse_family(name);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(path + key, "missing");
  return obj.at(key);
}

double get_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(field, "must be finite");
  return x;
}

int get_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
  return v.get<int>();
}

bool get_bool(const json& v, const std::string& field) {
  if (!v.is_boolean()) throw ConfigError(field, "expected true or false");
  return v.get<bool>();
}

std::vector<double> get_vector(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) throw ConfigError(field, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(get_number(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError(path + it.key(), "unknown field");
}

ModelSpec parse_model(const json& doc) {
  const json& m = require(doc, "model", "");
  if (!m.is_object()) throw ConfigError("model", "expected an object");
  reject_unknown(m, {"kind", "t", "dim"}, "model.");
  ModelSpec spec;
  const json& kind = require(m, "kind", "model.");
  if (!kind.is_string()) throw ConfigError("model.kind", "expected a string");
  spec.kind = kind.get<std::string>();
  if (spec.kind != "flat" && spec.kind != "half_space_power" && spec.kind != "disk_power" &&
      spec.kind != "stereographic_sphere")
    throw ConfigError("model.kind", "unknown model '" + spec.kind + "'");
  if (spec.kind == "half_space_power" || spec.kind == "disk_power")
    spec.t = get_number(require(m, "t", "model."), "model.t");
  else if (m.contains("t"))
    throw ConfigError("model.t", "only the power models take an exponent");
  spec.dim = m.contains("dim") ? get_int(m.at("dim"), "model.dim") : 0;
  return spec;
}

DomainSpec parse_domain(const json& doc) {
  const json& d = require(doc, "domain", "");
  if (!d.is_object()) throw ConfigError("domain", "expected an object");
  DomainSpec spec;
  const json& shape = require(d, "shape", "domain.");
  if (!shape.is_string()) throw ConfigError("domain.shape", "expected a string");
  spec.shape = shape.get<std::string>();
  if (spec.shape == "box") {
    reject_unknown(d, {"shape", "lo", "hi"}, "domain.");
    spec.lo = get_vector(require(d, "lo", "domain."), "domain.lo");
    spec.hi = get_vector(require(d, "hi", "domain."), "domain.hi");
    if (spec.lo.size() != spec.hi.size()) throw ConfigError("domain.hi", "length differs from domain.lo");
    for (std::size_t i = 0; i < spec.lo.size(); ++i)
      if (!(spec.lo[i] < spec.hi[i])) throw ConfigError("domain.hi", "needs lo < hi in every coordinate");
  } else if (spec.shape == "ball") {
    reject_unknown(d, {"shape", "center", "radius"}, "domain.");
    spec.center = get_vector(require(d, "center", "domain."), "domain.center");
    spec.radius = get_number(require(d, "radius", "domain."), "domain.radius");
    if (!(spec.radius > 0.0)) throw ConfigError("domain.radius", "must be > 0");
  } else if (spec.shape == "interval") {
    reject_unknown(d, {"shape", "a", "b"}, "domain.");
    spec.shape = "box";
    spec.lo = {get_number(require(d, "a", "domain."), "domain.a")};
    spec.hi = {get_number(require(d, "b", "domain."), "domain.b")};
    if (!(spec.lo[0] < spec.hi[0])) throw ConfigError("domain.b", "needs a < b");
  } else {
    throw ConfigError("domain.shape", "expected box, ball or interval");
  }
  return spec;
}

int domain_dim(const DomainSpec& d) {
  return static_cast<int>(d.shape == "box" ? d.lo.size() : d.center.size());
}

std::pair<double, double> xn_extent(const DomainSpec& d) {
  if (d.shape == "box") return {d.lo.back(), d.hi.back()};
  return {d.center.back() - d.radius, d.center.back() + d.radius};
}

int forced_k(const std::string& family) {
  return family == "hyperbolic_gap" || family == "power_gap" || family == "power_gap_shifted" ? 1 : 0;
}

InequalitySelection parse_selection(const json& item, const RunConfig& cfg, std::size_t index) {
  const std::string path = "inequalities[" + std::to_string(index) + "].";
  if (!item.is_object()) throw ConfigError(path.substr(0, path.size() - 1), "expected an object");
  reject_unknown(item, {"family", "k", "t", "rho_max", "rho_min", "a", "b", "p", "scheme"}, path);
  InequalitySelection sel;
  const json& fam = require(item, "family", path);
  if (!fam.is_string()) throw ConfigError(path + "family", "expected a string");
  sel.family = fam.get<std::string>();
  if (is_sequence_family(sel.family)) {
    sel.family = family_name(parse_family(sel.family));
  } else if (!kIntegralFamilies.count(sel.family)) {
    throw ConfigError(path + "family", "unknown family '" + sel.family + "'");
  }

  if (item.contains("k")) {
    const json& k = item.at("k");
    if (k.is_array()) {
      for (std::size_t i = 0; i < k.size(); ++i) sel.ks.push_back(get_int(k[i], path + "k"));
    } else {
      sel.ks.push_back(get_int(k, path + "k"));
    }
    if (sel.ks.empty()) throw ConfigError(path + "k", "empty list");
  } else {
    sel.ks.push_back(1);
  }
  if (forced_k(sel.family)) sel.ks = {1};
  for (int k : sel.ks) {
    if (k < 1) throw ConfigError(path + "k", "must be >= 1");
    if (k + 1 > cfg.k)
      throw ConfigError(path + "k", "needs k + 1 = " + std::to_string(k + 1) +
                                        " eigenpairs but the run computes k = " + std::to_string(cfg.k));
  }

  auto opt = [&](const char* key, double& dst) {
    if (item.contains(key)) dst = get_number(item.at(key), path + key);
  };
  opt("t", sel.params.t);
  opt("rho_max", sel.params.rho_max);
  opt("rho_min", sel.params.rho_min);
  opt("a", sel.params.a);
  opt("b", sel.params.b);
  if (item.contains("p")) sel.p = get_int(item.at("p"), path + "p");
  if (item.contains("scheme")) {
    const json& s = item.at("scheme");
    if (s == "face") sel.scheme = GradientScheme::Face;
    else if (s == "nodal") sel.scheme = GradientScheme::Nodal;
    else throw ConfigError(path + "scheme", "expected face or nodal");
  }

  const ModelSpec& m = cfg.model;
  const int n = m.dim;
  const bool power = m.kind == "half_space_power" || m.kind == "disk_power";
  if (sel.family == "half_space_weighted") {
    if (std::isnan(sel.params.t)) sel.params.t = m.kind == "flat" ? 0.0 : m.t;
    const bool ok = (m.kind == "half_space_power" && sel.params.t == m.t) ||
                    (m.kind == "flat" && sel.params.t == 0.0);
    if (!ok) throw ConfigError(path + "family", "half_space_weighted needs half_space_power with the same t (or flat with t = 0)");
  } else if (sel.family == "radial_weighted") {
    if (m.kind == "half_space_power") throw ConfigError(path + "family", "radial_weighted needs a radial model");
  } else if (sel.family == "poincare_disk_weighted") {
    if (!(m.kind == "disk_power" && m.t == 2.0))
      throw ConfigError(path + "family", "poincare_disk_weighted needs disk_power with t = 2");
  } else if (sel.family == "coordinate") {
    if (sel.p < -1 || sel.p >= n) throw ConfigError(path + "p", "axis out of range");
  } else if (sel.family == "power_gap" || sel.family == "power_gap_shifted") {
    if (std::isnan(sel.params.t)) {
      if (!power) throw ConfigError(path + "t", "required for this model");
      sel.params.t = m.t;
    }
  } else if (sel.family == "rho_ratio" || sel.family == "ab_bounds") {
    const bool need = sel.family == "rho_ratio"
                          ? std::isnan(sel.params.rho_max) || std::isnan(sel.params.rho_min)
                          : std::isnan(sel.params.a) || std::isnan(sel.params.b);
    if (need) {
      const auto [lo, hi] = xn_extent(cfg.domain);
      if (!(lo > 0.0))
        throw ConfigError(path + "family", "defaults need a domain inside the half-space x_n > 0");
      if (sel.family == "rho_ratio") {
        sel.params.rho_max = 1.0 / (lo * lo);
        sel.params.rho_min = 1.0 / (hi * hi);
      } else {
        sel.params.a = lo * lo;
        sel.params.b = hi * hi;
      }
    }
  }
  return sel;
}

json selection_json(const InequalitySelection& s) {
  json j;
  j["family"] = s.family;
  j["k"] = s.ks;
  auto put = [&](const char* key, double v) {
    if (!std::isnan(v)) j[key] = v;
  };
  put("t", s.params.t);
  put("rho_max", s.params.rho_max);
  put("rho_min", s.params.rho_min);
  put("a", s.params.a);
  put("b", s.params.b);
  if (s.family == "coordinate") j["p"] = s.p;
  if (s.family == "coordinate" || s.family == "coordinate_sum")
    j["scheme"] = s.scheme == GradientScheme::Face ? "face" : "nodal";
  return j;
}

}  // namespace

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("<document>", "expected a JSON object");
  reject_unknown(doc,
                 {"model", "domain", "h", "levels", "k", "tol", "seed", "inequalities", "output_dir",
                  "deterministic", "dump_matrices", "write_eigenvectors", "inject_fault"},
                 "");
  RunConfig cfg;
  cfg.model = parse_model(doc);
  cfg.domain = parse_domain(doc);
  const int dim = domain_dim(cfg.domain);
  if (cfg.model.dim == 0) cfg.model.dim = dim;
  if (cfg.model.dim != dim)
    throw ConfigError("model.dim", "model dimension " + std::to_string(cfg.model.dim) +
                                       " differs from domain dimension " + std::to_string(dim));

  cfg.h = get_number(require(doc, "h", ""), "h");
  if (!(cfg.h > 0.0)) throw ConfigError("h", "must be > 0");
  if (doc.contains("levels")) cfg.levels = get_int(doc.at("levels"), "levels");
  if (cfg.levels < 1) throw ConfigError("levels", "must be >= 1");
  cfg.k = get_int(require(doc, "k", ""), "k");
  if (cfg.k < 1) throw ConfigError("k", "must be >= 1");
  if (doc.contains("tol")) cfg.tol = get_number(doc.at("tol"), "tol");
  if (!(cfg.tol > 0.0)) throw ConfigError("tol", "must be > 0");
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_integer() || s.get<long long>() < 0) throw ConfigError("seed", "expected a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string()) throw ConfigError("output_dir", "expected a string");
    cfg.output_dir = doc.at("output_dir").get<std::string>();
  }
  if (doc.contains("deterministic")) cfg.deterministic = get_bool(doc.at("deterministic"), "deterministic");
  if (doc.contains("dump_matrices")) cfg.dump_matrices = get_bool(doc.at("dump_matrices"), "dump_matrices");
  if (doc.contains("write_eigenvectors"))
    cfg.write_eigenvectors = get_bool(doc.at("write_eigenvectors"), "write_eigenvectors");
  if (doc.contains("inject_fault")) cfg.inject_fault = get_bool(doc.at("inject_fault"), "inject_fault");

  // Build once so that domain and model errors surface as configuration errors.
  try {
    cfg.model.build();
    cfg.domain.build();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("domain", e.what());
  }

  if (doc.contains("inequalities")) {
    const json& list = doc.at("inequalities");
    if (!list.is_array()) throw ConfigError("inequalities", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) cfg.inequalities.push_back(parse_selection(list[i], cfg, i));
  }

  json canon;
  canon["model"] = {{"kind", cfg.model.kind}, {"dim", cfg.model.dim}, {"t", cfg.model.t}};
  if (cfg.domain.shape == "box")
    canon["domain"] = {{"shape", "box"}, {"lo", cfg.domain.lo}, {"hi", cfg.domain.hi}};
  else
    canon["domain"] = {{"shape", "ball"}, {"center", cfg.domain.center}, {"radius", cfg.domain.radius}};
  canon["h"] = cfg.h;
  canon["levels"] = cfg.levels;
  canon["k"] = cfg.k;
  canon["tol"] = cfg.tol;
  canon["seed"] = cfg.seed;
  canon["inequalities"] = json::array();
  for (const auto& s : cfg.inequalities) canon["inequalities"].push_back(selection_json(s));
  canon["inject_fault"] = cfg.inject_fault;
  cfg.canonical = canon;
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size()); ++i)
      if (text[i] == '\n') ++line;
    throw ConfigError("<document>", "line " + std::to_string(line) + ": " + e.what());
  }
  return parse_config(doc);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<document>", "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

int configured_threads() {
  const char* env = std::getenv("CONFSPEC_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) return 1;
  return static_cast<int>(std::min<long>(v, 256));
}

ConvergenceRecord convergence_record(const std::vector<LevelResult>& levels) {
  ConvergenceRecord rec;
  if (levels.empty()) return rec;
  const int k = levels.front().spectrum.count();
  for (const auto& l : levels) {
    rec.hs.push_back(l.h);
    rec.eigenvalues.emplace_back(l.spectrum.eigenvalues.data(), l.spectrum.eigenvalues.data() + k);
  }
  const std::size_t L = levels.size();
  rec.notes.assign(static_cast<std::size_t>(k), "");
  if (L >= 2) {
    for (int i = 0; i < k; ++i) {
      const double fine = rec.eigenvalues[L - 1][i];
      const double mid = rec.eigenvalues[L - 2][i];
      rec.richardson.push_back(fine + (fine - mid) / 3.0);
    }
  }
  if (L >= 3) {
    for (int i = 0; i < k; ++i) {
      const double d1 = rec.eigenvalues[L - 3][i] - rec.eigenvalues[L - 2][i];
      const double d2 = rec.eigenvalues[L - 2][i] - rec.eigenvalues[L - 1][i];
      if (d1 == 0.0 || d2 == 0.0) {
        rec.orders.push_back(std::numeric_limits<double>::quiet_NaN());
        rec.notes[static_cast<std::size_t>(i)] = "zero difference between levels; order undefined";
      } else {
        rec.orders.push_back(std::log2(std::abs(d1) / std::abs(d2)));
      }
    }
  } else {
    rec.orders.assign(static_cast<std::size_t>(k), std::numeric_limits<double>::quiet_NaN());
    for (auto& note : rec.notes) note = "order needs three levels";
  }
  return rec;
}

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::FILE* open_out(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error("cannot open " + path + " for writing");
  return f;
}

}  // namespace

void write_convergence_csv(const std::string& path, const ConvergenceRecord& rec) {
  std::FILE* f = open_out(path);
  std::fprintf(f, "index");
  for (double h : rec.hs) std::fprintf(f, ",lambda_h=%s", g17(h).c_str());
  std::fprintf(f, ",richardson,order,note\n");
  const std::size_t k = rec.eigenvalues.empty() ? 0 : rec.eigenvalues.front().size();
  for (std::size_t i = 0; i < k; ++i) {
    std::fprintf(f, "%zu", i + 1);
    for (const auto& level : rec.eigenvalues) std::fprintf(f, ",%s", g17(level[i]).c_str());
    std::fprintf(f, ",%s", i < rec.richardson.size() ? g17(rec.richardson[i]).c_str() : "nan");
    std::fprintf(f, ",%s", i < rec.orders.size() ? g17(rec.orders[i]).c_str() : "nan");
    std::fprintf(f, ",%s\n", i < rec.notes.size() ? rec.notes[i].c_str() : "");
  }
  std::fclose(f);
}

namespace {

std::vector<LevelResult> solve_levels(const RunConfig& cfg) {
  const ConformalFactorModel model = cfg.model.build();
  const ChartDomain domain = cfg.domain.build();
  const int threads = configured_threads();
  auto one = [&](int level) {
    const double h = cfg.level_h(level);
    GridPtr grid = build_grid(domain, model, h);
    AssemblyOptions aopt;
    aopt.threads = threads;
    aopt.inject_sign_fault = cfg.inject_fault;
    OperatorPair pair = assemble(model, grid, aopt);
    if (cfg.k > grid->size())
      throw DimensionError("k = " + std::to_string(cfg.k) + " exceeds the " +
                           std::to_string(grid->size()) + " interior nodes at h = " + g17(h));
    SolverOptions sopt;
    sopt.tol = cfg.tol;
    sopt.seed = cfg.seed;
    return LevelResult{h, grid->size(), solve_smallest(pair, cfg.k, sopt)};
  };
  std::vector<LevelResult> out;
  if (threads > 1 && cfg.levels > 1) {
    std::vector<std::future<LevelResult>> jobs;
    for (int l = 0; l < cfg.levels; ++l) jobs.push_back(std::async(std::launch::async, one, l));
    for (auto& j : jobs) out.push_back(j.get());
  } else {
    for (int l = 0; l < cfg.levels; ++l) out.push_back(one(l));
  }
  return out;
}

OracleStatus evaluate_oracle(const RunConfig& cfg, const std::vector<LevelResult>& levels,
                             const std::optional<ConvergenceRecord>& conv) {
  OracleStatus st;
  const SpectralResult& fine = levels.back().spectrum;
  const double h = levels.back().h;
  const DomainSpec& d = cfg.domain;
  if (cfg.model.kind == "flat" && d.shape == "box") {
    std::vector<double> lengths;
    for (std::size_t i = 0; i < d.lo.size(); ++i) lengths.push_back(d.hi[i] - d.lo[i]);
    const auto expected = analytic_box_spectrum(cfg.model.dim, lengths, fine.count());
    // Analytic spectrum plus the O(h^2) consistency error of the five-point stencil.
    const double tolerance = 0.005 + expected.back() * h * h / 6.0;
    ReferenceCase ref{"box", ConformalFactorModel::flat(cfg.model.dim), cfg.domain.build(), expected,
                      tolerance, Provenance::Analytic};
    const ReferenceCheck chk = compare_with_reference(ref, fine.eigenvalues);
    st.kind = "analytic";
    st.passed = chk.passed;
    st.worst_relative = chk.worst_relative;
    st.detail = "flat box spectrum, relative tolerance " + g17(tolerance);
    return st;
  }
  if (cfg.model.kind == "stereographic_sphere" && d.shape == "ball" && d.radius == 1.0 &&
      (cfg.model.dim == 2 || cfg.model.dim == 3) &&
      std::all_of(d.center.begin(), d.center.end(), [](double c) { return c == 0.0; })) {
    const ReferenceCase ref = hemisphere_reference(cfg.model.dim);
    Eigen::VectorXd lam = fine.eigenvalues.head(1);
    std::string how = "finest level";
    if (conv && !conv->richardson.empty()) {
      lam[0] = conv->richardson[0];
      how = "Richardson limit";
    }
    const ReferenceCheck chk = compare_with_reference(ref, lam);
    st.kind = "symbolic";
    st.passed = chk.passed;
    st.worst_relative = chk.worst_relative;
    st.detail = "hemisphere lambda_1 = n (" + how + ")";
    return st;
  }
  const ConformalFactorModel model = cfg.model.build();
  if (model.is_hyperbolic()) {
    st.kind = "mckean";
    st.passed = true;
    for (const auto& l : levels) {
      const McKeanCheck m = check_mckean(l.spectrum);
      if (!m.holds) {
        st.passed = false;
        st.detail = "lambda_1 = " + g17(m.lambda1) + " <= (n-1)^2/4 = " + g17(m.bound) + " at h = " + g17(l.h);
      }
    }
    if (st.passed) st.detail = "lambda_1 > (n-1)^2/4 on every level";
    return st;
  }
  st.detail = "no reference applies to this configuration";
  return st;
}

std::vector<InequalityReport> evaluate_selection(const InequalitySelection& sel,
                                                 const SpectralResult& res) {
  std::vector<InequalityReport> out;
  if (is_sequence_family(sel.family)) {
    const EigenSequence seq = EigenSequence::make(
        res.dim(), std::vector<double>(res.eigenvalues.data(), res.eigenvalues.data() + res.count()));
    for (int k : sel.ks) out.push_back(check_sequence_inequality(seq, k, parse_family(sel.family), sel.params));
    return out;
  }
  for (int k : sel.ks) {
    if (sel.family == "half_space_weighted") {
      out.push_back(check_half_space_weighted(res, sel.params.t, k));
    } else if (sel.family == "radial_weighted") {
      out.push_back(check_radial_weighted(res, k, false));
    } else if (sel.family == "poincare_disk_weighted") {
      out.push_back(check_radial_weighted(res, k, true));
    } else if (sel.family == "coordinate") {
      if (sel.p >= 0) {
        out.push_back(check_coordinate(res, sel.p, k, sel.scheme));
      } else {
        for (int p = 0; p < res.dim(); ++p) out.push_back(check_coordinate(res, p, k, sel.scheme));
      }
    } else if (sel.family == "coordinate_sum") {
      out.push_back(check_coordinate_sum(res, k, sel.scheme));
    }
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
}

}  // namespace

RunOutcome run(const RunConfig& cfg) {
  RunOutcome out;
  out.levels = solve_levels(cfg);
  const LevelResult& finest = out.levels.back();
  const SpectralResult& res = finest.spectrum;
  if (cfg.levels >= 2) out.convergence = convergence_record(out.levels);
  out.oracle = evaluate_oracle(cfg, out.levels, out.convergence);

  for (const auto& sel : cfg.inequalities)
    for (auto& r : evaluate_selection(sel, res)) out.reports.push_back(std::move(r));

  const std::string label =
      out.oracle.kind != "none" && out.oracle.passed ? "validated" : "oracle-unverified";
  const std::string hash = cfg.hash();
  json grid = {{"dim", res.dim()}, {"h", finest.h}, {"nodes", finest.nodes}, {"levels", cfg.levels}};

  bool violated = out.oracle.kind != "none" && !out.oracle.passed;
  json reports = json::array();
  for (const auto& r : out.reports) {
    if (r.violated()) violated = true;
    json j = to_json(r);
    j["config_hash"] = hash;
    j["grid"] = grid;
    j["validation"] = label;
    reports.push_back(std::move(j));
  }

  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  const fs::path dir(cfg.output_dir);
  auto file = [&](const char* name) {
    out.files.push_back((dir / name).string());
    return out.files.back();
  };

  write_eigenvalues_csv(file("eigenvalues.csv"), res);

  json doc;
  doc["config_hash"] = hash;
  doc["config"] = cfg.canonical;
  doc["grid"] = grid;
  doc["solver"] = {{"method", to_string(res.method)},
                   {"iterations", res.iterations},
                   {"tol", res.tol},
                   {"max_residual", res.residuals.maxCoeff()},
                   {"b_orthonormality_error", b_orthonormality_error(res)}};
  doc["oracle"] = {{"kind", out.oracle.kind},
                   {"passed", out.oracle.passed},
                   {"worst_relative", out.oracle.worst_relative},
                   {"detail", out.oracle.detail}};
  doc["validation"] = label;
  doc["reports"] = reports;
  write_text(file("reports.json"), doc.dump(2) + "\n");

  {
    const double volume = riemannian_volume(res.model, *res.grid);
    std::FILE* f = open_out(file("weyl.csv"));
    std::fprintf(f, "index,eigenvalue,weyl,ratio\n");
    for (int i = 0; i < res.count(); ++i) {
      const double w = weyl_estimate(res.dim(), volume, i + 1);
      std::fprintf(f, "%d,%s,%s,%s\n", i + 1, g17(res.eigenvalues[i]).c_str(), g17(w).c_str(),
                   g17(res.eigenvalues[i] / w).c_str());
    }
    std::fclose(f);
  }

  {
    std::vector<std::string> families = {"yang"};
    for (const auto& sel : cfg.inequalities)
      if (is_sequence_family(sel.family) && !forced_k(sel.family) &&
          std::find(families.begin(), families.end(), sel.family) == families.end())
        families.push_back(sel.family);
    const EigenSequence seq = EigenSequence::make(
        res.dim(), std::vector<double>(res.eigenvalues.data(), res.eigenvalues.data() + res.count()));
    std::FILE* f = open_out(file("slack_vs_k.csv"));
    std::fprintf(f, "family,k,lhs,rhs,slack,satisfied\n");
    for (const auto& name : families) {
      FamilyParams params;
      for (const auto& sel : cfg.inequalities)
        if (sel.family == name) params = sel.params;
      for (int k = 1; k + 1 <= seq.size(); ++k) {
        const InequalityReport r = check_sequence_inequality(seq, k, parse_family(name), params);
        std::fprintf(f, "%s,%d,%s,%s,%s,%s\n", name.c_str(), k, g17(r.lhs).c_str(), g17(r.rhs).c_str(),
                     g17(r.slack).c_str(), r.applicable ? (r.satisfied ? "true" : "false") : "n/a");
      }
    }
    std::fclose(f);
  }

  if (out.convergence) write_convergence_csv(file("convergence.csv"), *out.convergence);
  if (cfg.dump_matrices) {
    const ConformalFactorModel model = cfg.model.build();
    AssemblyOptions aopt;
    aopt.inject_sign_fault = cfg.inject_fault;
    const OperatorPair pair = assemble(model, res.grid, aopt);
    write_coo(file("stiffness.coo"), pair.stiffness);
    write_coo_diagonal(file("mass.coo"), pair.mass);
  }
  if (cfg.write_eigenvectors) write_eigenvectors_binary(file("eigenvectors.bin"), res.eigenvectors);

  out.exit_code = violated ? 2 : 0;
  return out;
}

ConvergenceRecord convergence_study(const RunConfig& cfg) {
  if (cfg.levels < 3) throw ConfigError("levels", "a convergence study needs levels >= 3");
  const auto levels = solve_levels(cfg);
  ConvergenceRecord rec = convergence_record(levels);
  std::filesystem::create_directories(cfg.output_dir);
  write_convergence_csv((std::filesystem::path(cfg.output_dir) / "convergence.csv").string(), rec);
  return rec;
}

std::vector<double> read_eigenvalue_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::vector<double> values;
  std::string line;
  int column = -1;
  bool first = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      // Either a header naming an "eigenvalue" column, or bare rows of
      // "value" / "index,value".
      first = false;
      for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i] == "eigenvalue") column = static_cast<int>(i);
      if (column >= 0) continue;
      column = cells.size() >= 2 ? 1 : 0;
    }
    if (column >= static_cast<int>(cells.size()))
      throw Error(path + ":" + std::to_string(line_no) + ": missing eigenvalue column");
    const std::string& text = cells[static_cast<std::size_t>(column)];
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str()) throw Error(path + ":" + std::to_string(line_no) + ": not a number");
    values.push_back(v);
  }
  return values;
}

InequalityReport check_sequence_file(const std::string& path, const std::string& family, int n,
                                     int k, const FamilyParams& params) {
  const EigenSequence seq = EigenSequence::make(n, read_eigenvalue_csv(path));
  return check_sequence_inequality(seq, k, parse_family(family), params);
}

// ---------------------------------------------------------------------------
// verify

bool VerifySummary::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

namespace {

struct Suite {
  const VerifyOptions& opt;
  VerifySummary summary;

  SpectralResult solve(const ConformalFactorModel& model, const ChartDomain& domain, double h, int k) {
    AssemblyOptions aopt;
    aopt.threads = configured_threads();
    aopt.inject_sign_fault = opt.inject_fault;
    const OperatorPair pair = assemble(model, build_grid(domain, model, h), aopt);
    SolverOptions sopt;
    sopt.tol = opt.tol;
    sopt.seed = opt.seed;
    return solve_smallest(pair, k, sopt);
  }

  template <class F>
  void check(const std::string& name, F&& body) {
    if (opt.fail_fast && !summary.checks.empty() && !summary.passed()) return;
    VerifyCheck c;
    c.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      std::ostringstream detail;
      c.passed = body(detail);
      c.detail = detail.str();
    } catch (const std::exception& e) {
      c.passed = false;
      c.detail = std::string("error: ") + e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (opt.log) {
      char t[32];
      std::snprintf(t, sizeof t, "%.1f", c.seconds);
      *opt.log << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << t << " s): " << c.detail << std::endl;
    }
    summary.checks.push_back(std::move(c));
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

// Random ascending sequences: analytic box spectra with random sides and
// perturbed Weyl-like sequences.
std::vector<EigenSequence> random_sequences(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<EigenSequence> out;
  for (int s = 0; s < count; ++s) {
    const int n = 2 + static_cast<int>(rng() % 4);
    const int m = 3 + static_cast<int>(rng() % 28);
    std::vector<double> values;
    if (s % 2 == 0) {
      std::vector<double> lengths(static_cast<std::size_t>(n));
      for (double& l : lengths) l = 0.5 + 1.5 * unit(rng);
      values = analytic_box_spectrum(n, lengths, m);
    } else {
      const double scale = 1.0 + 50.0 * unit(rng);
      for (int i = 1; i <= m; ++i)
        values.push_back(scale * std::pow(i, 2.0 / n) * (1.0 + 0.6 * (unit(rng) - 0.5)));
      std::sort(values.begin(), values.end());
    }
    out.push_back(EigenSequence::make(n, std::move(values)));
  }
  return out;
}

}  // namespace

VerifySummary verify(const VerifyOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  Suite suite{opt, {}};
  const double pi = std::numbers::pi;
  const double pi2 = pi * pi;
  const auto flat2 = ConformalFactorModel::flat(2);
  const auto square = ChartDomain::box(vec2(0, 0), vec2(1, 1));
  std::optional<SpectralResult> square_run;

  suite.check("box_square", [&](std::ostream& d) {
    square_run = suite.solve(flat2, square, 1.0 / 256, 10);
    const auto exact = analytic_box_spectrum(2, {1.0, 1.0}, 10);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) worst = std::max(worst, rel(square_run->eigenvalues[i], exact[i]));
    const double split = rel(square_run->eigenvalues[2], square_run->eigenvalues[1]);
    const double orth = b_orthonormality_error(*square_run);
    d << "h=1/256 k=10 worst rel error " << worst << ", degenerate pair split " << split
      << ", B-orthonormality " << orth;
    return worst <= 0.005 && split <= 10 * opt.tol && orth <= 1e-10;
  });

  suite.check("box_square_ladder", [&](std::ostream& d) {
    std::vector<double> lam;
    for (double inv : {64.0, 128.0}) lam.push_back(suite.solve(flat2, square, 1.0 / inv, 1).eigenvalues[0]);
    lam.push_back(square_run ? square_run->eigenvalues[0] : suite.solve(flat2, square, 1.0 / 256, 1).eigenvalues[0]);
    const double order = std::log2(std::abs(lam[0] - lam[1]) / std::abs(lam[1] - lam[2]));
    const double rich = lam[2] + (lam[2] - lam[1]) / 3.0;
    d << "observed order " << order << ", Richardson rel error " << rel(rich, 2 * pi2);
    return order >= 1.7 && order <= 2.3 && rel(rich, 2 * pi2) <= 5e-4;
  });

  suite.check("interval", [&](std::ostream& d) {
    const auto r = suite.solve(ConformalFactorModel::flat(1), ChartDomain::interval(0.0, pi), pi / 4096, 5);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) worst = std::max(worst, rel(r.eigenvalues[i], (i + 1.0) * (i + 1.0)));
    d << "h=pi/4096 k=5 worst rel error " << worst;
    return worst <= 1e-3;
  });

  suite.check("hemisphere_n2", [&](std::ostream& d) {
    const ReferenceCase ref = hemisphere_reference(2);
    std::vector<double> lam;
    for (double inv : {64.0, 128.0, 256.0}) lam.push_back(suite.solve(ref.model, ref.domain, 1.0 / inv, 1).eigenvalues[0]);
    const double rich = lam[2] + (lam[2] - lam[1]) / 3.0;
    d << "lambda_1(1/256) = " << lam[2] << ", Richardson " << rich << ", rel error " << rel(rich, 2.0);
    return rel(rich, 2.0) <= ref.tolerance;
  });

  suite.check("hemisphere_n3", [&](std::ostream& d) {
    const ReferenceCase ref = hemisphere_reference(3);
    const double lam = suite.solve(ref.model, ref.domain, 1.0 / 48, 1).eigenvalues[0];
    d << "h=1/48 lambda_1 = " << lam << ", rel error " << rel(lam, 3.0);
    return rel(lam, 3.0) <= ref.tolerance;
  });

  std::optional<SpectralResult> disk_run, half_run;
  suite.check("cross_chart_R1", [&](std::ostream& d) {
    const CrossChartBall ball = hyperbolic_ball_cross_chart(2, 1.0);
    disk_run = suite.solve(ConformalFactorModel::disk_power(2, 2.0), ball.disk, 1.0 / 256, 4);
    half_run = suite.solve(ConformalFactorModel::half_space_power(2, 2.0), ball.half_space, 1.0 / 256, 4);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) worst = std::max(worst, rel(disk_run->eigenvalues[i], half_run->eigenvalues[i]));
    d << "lambda_1 disk " << disk_run->eigenvalues[0] << " half-space " << half_run->eigenvalues[0]
      << ", worst pairwise rel difference " << worst;
    return worst <= 0.01;
  });

  suite.check("mckean", [&](std::ostream& d) {
    if (!disk_run || !half_run) {
      d << "cross-chart runs unavailable";
      return false;
    }
    const McKeanCheck a = check_mckean(*disk_run), b = check_mckean(*half_run);
    d << "lambda_1 " << a.lambda1 << ", " << b.lambda1 << " vs (n-1)^2/4 = " << a.bound;
    return a.applies && b.applies && a.holds && b.holds;
  });

  suite.check("yang_analytic_square", [&](std::ostream& d) {
    const EigenSequence seq = EigenSequence::make(2, analytic_box_spectrum(2, {1.0, 1.0}, 21));
    double least = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 20; ++k) {
      const auto r = check_sequence_inequality(seq, k, Family::Yang);
      if (!r.satisfied || !(r.slack > 0.0)) {
        d << "k=" << k << " slack " << r.slack;
        return false;
      }
      least = std::min(least, r.slack / r.rhs);
    }
    d << "k<=20 all satisfied, smallest relative slack " << least;
    return true;
  });

  suite.check("validity_chain", [&](std::ostream& d) {
    int yang_ok = 0, tested = 0;
    for (const auto& seq : random_sequences(1000, opt.seed)) {
      for (int k = 1; k + 1 <= seq.size(); ++k) {
        ++tested;
        if (!check_sequence_inequality(seq, k, Family::Yang).satisfied) continue;
        ++yang_ok;
        const auto ppw = check_sequence_inequality(seq, k, Family::Ppw);
        const auto hp = check_sequence_inequality(seq, k, Family::HileProtter);
        if (!ppw.satisfied || (hp.applicable && !hp.satisfied)) {
          d << "implication fails at n=" << seq.n << " k=" << k;
          return false;
        }
      }
    }
    d << yang_ok << " of " << tested << " (sequence, k) pairs satisfy Yang; PPW and Hile-Protter hold on all";
    return yang_ok > tested / 4;
  });

  suite.check("shift_structure", [&](std::ostream& d) {
    double worst = 0.0;
    for (const auto& seq : random_sequences(200, opt.seed + 1)) {
      std::vector<double> shifted = seq.values;
      for (double& v : shifted) v += seq.n * seq.n / 4.0;
      const EigenSequence sh = EigenSequence::make(seq.n, shifted);
      for (int k = 1; k + 1 <= seq.size(); ++k) {
        const auto a = check_sequence_inequality(seq, k, Family::ChengYangSphere);
        const auto b = check_sequence_inequality(sh, k, Family::Yang);
        // Normwise relative: the shifted gaps lose digits in proportion to the shift,
        // so differences are measured against the size of the shifted operands.
        const double top = sh.values[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < a.lhs_terms.size(); ++i) {
          const double low = sh.values[i];
          worst = std::max(worst, std::abs(a.lhs_terms[i] - b.lhs_terms[i]) / (top * top));
          worst = std::max(worst, std::abs(a.rhs_terms[i] - b.rhs_terms[i]) * seq.n / (4.0 * top * low));
        }
      }
    }
    d << "worst normwise relative difference " << worst;
    return worst <= 1e-12;
  });

  suite.check("next_eigenvalue_bound", [&](std::ostream& d) {
    const auto spec = analytic_box_spectrum(2, {1.0, 1.0}, 21);
    const EigenSequence seq = EigenSequence::make(2, spec);
    for (int k = 1; k <= 20; ++k) {
      const double bound = bound_next_eigenvalue(seq, k, Family::Yang);
      if (!(spec[static_cast<std::size_t>(k)] <= bound)) {
        d << "k=" << k << " bound " << bound << " below lambda_{k+1}";
        return false;
      }
    }
    const double l1 = spec[0];
    const double yang1 = bound_next_eigenvalue(seq, 1, Family::Yang);
    const double sph1 = bound_next_eigenvalue(seq, 1, Family::ChengYangSphere);
    const double e1 = rel(yang1, 3 * l1), e2 = rel(sph1, l1 + 2.0 * (l1 + 1.0));
    d << "k<=20 bounds hold; k=1 closed forms rel errors " << e1 << ", " << e2;
    return e1 <= 1e-12 && e2 <= 1e-12;
  });

  suite.check("flat_reductions", [&](std::ostream& d) {
    if (!square_run) {
      d << "square run unavailable";
      return false;
    }
    const SpectralResult& res = *square_run;
    const EigenSequence seq = EigenSequence::make(
        2, std::vector<double>(res.eigenvalues.data(), res.eigenvalues.data() + res.count()));
    double worst = 0.0;
    auto compare = [&](const InequalityReport& r, const InequalityReport& yang) {
      worst = std::max({worst, rel(r.lhs / 2.0, yang.lhs), rel(r.rhs / 2.0, yang.rhs)});
    };
    for (int k : {1, 3, 5, 9}) {
      const auto yang = check_sequence_inequality(seq, k, Family::Yang);
      compare(check_half_space_weighted(res, 0.0, k), yang);
      compare(check_coordinate_sum(res, k), yang);
    }
    RadialProfile zero{[](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
    const auto radial = ConformalFactorModel::custom_radial(2, zero);
    const SpectralResult rr = suite.solve(radial, square, 1.0 / 64, 6);
    const EigenSequence rseq = EigenSequence::make(
        2, std::vector<double>(rr.eigenvalues.data(), rr.eigenvalues.data() + rr.count()));
    for (int k : {1, 3, 5}) compare(check_radial_weighted(rr, k, false), check_sequence_inequality(rseq, k, Family::Yang));
    d << "worst relative deviation from the Yang pair " << worst;
    return worst <= 1e-12;
  });

  suite.summary.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return suite.summary;
}

}  // namespace confspec
