#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "confspec/eigensolver.hpp"
#include "confspec/inequalities.hpp"
#include "json.hpp"

namespace confspec {

struct ModelSpec {
  /// flat | half_space_power | disk_power | stereographic_sphere
  std::string kind = "flat";
  int dim = 2;
  double t = 0.0;

  ConformalFactorModel build() const;
};

struct DomainSpec {
  /// box | ball
  std::string shape = "box";
  std::vector<double> lo, hi;
  std::vector<double> center;
  double radius = 0.0;

  ChartDomain build() const;
};

struct InequalitySelection {
  /// A sequence family name (see family_name) or one of half_space_weighted,
  /// radial_weighted, poincare_disk_weighted, coordinate, coordinate_sum.
  std::string family;
  std::vector<int> ks;
  FamilyParams params;
  /// Axis for "coordinate"; -1 selects every axis.
  int p = -1;
  GradientScheme scheme = GradientScheme::Face;
};

struct RunConfig {
  ModelSpec model;
  DomainSpec domain;
  /// Coarsest spacing; level l uses h / 2^l.
  double h = 0.0;
  int levels = 1;
  int k = 1;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  std::vector<InequalitySelection> inequalities;
  std::string output_dir = "confspec_out";
  bool deterministic = true;
  bool dump_matrices = false;
  bool write_eigenvectors = false;
  /// Assembly fault used by mutation tests.
  bool inject_fault = false;

  /// Canonical JSON the hash is computed from.
  nlohmann::json canonical;

  double level_h(int level) const;
  /// FNV-1a 64 of the canonical dump, as 16 hex digits.
  std::string hash() const;
};

/// Throws ConfigError naming the offending field (and line for syntax errors).
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

/// Worker threads from CONFSPEC_THREADS; 1 when unset or invalid.
int configured_threads();

struct LevelResult {
  double h = 0.0;
  int nodes = 0;
  SpectralResult spectrum;
};

struct ConvergenceRecord {
  std::vector<double> hs;
  /// levels x k.
  std::vector<std::vector<double>> eigenvalues;
  /// lambda(h_L) + (lambda(h_L) - lambda(h_{L-1}))/3 per eigenvalue, when levels >= 2.
  std::vector<double> richardson;
  /// log2 of successive difference ratios over the last three levels; NaN when undefined.
  std::vector<double> orders;
  std::vector<std::string> notes;
};

ConvergenceRecord convergence_record(const std::vector<LevelResult>& levels);
void write_convergence_csv(const std::string& path, const ConvergenceRecord& record);

struct OracleStatus {
  /// analytic | symbolic | mckean | none
  std::string kind = "none";
  bool passed = false;
  double worst_relative = 0.0;
  std::string detail;
};

struct RunOutcome {
  /// 0 success, 2 violated asserted inequality or oracle, 1 execution error.
  int exit_code = 0;
  std::vector<LevelResult> levels;
  std::vector<InequalityReport> reports;
  OracleStatus oracle;
  std::optional<ConvergenceRecord> convergence;
  std::vector<std::string> files;
};

/// Solves every level, evaluates oracles and the selected inequalities and writes
/// eigenvalues.csv, reports.json, weyl.csv, slack_vs_k.csv (and convergence.csv when
/// levels >= 2) into config.output_dir. Module errors propagate.
RunOutcome run(const RunConfig& config);

/// Requires levels >= 3; writes convergence.csv.
ConvergenceRecord convergence_study(const RunConfig& config);

struct VerifyOptions {
  double tol = 1e-8;
  bool inject_fault = false;
  std::uint64_t seed = 1;
  /// Skip the remaining checks after the first failure.
  bool fail_fast = false;
  std::ostream* log = nullptr;
};

struct VerifyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifySummary {
  std::vector<VerifyCheck> checks;
  double seconds = 0.0;
  bool passed() const;
};

/// Oracle suite (box spectra, hemisphere, cross-chart ball, hyperbolic lower bound)
/// followed by the sequence-level invariants and the flat reductions.
VerifySummary verify(const VerifyOptions& options = {});

/// Reads a CSV of eigenvalues (one per line, or the eigenvalue column of an
/// eigenvalues.csv) and evaluates one sequence family.
InequalityReport check_sequence_file(const std::string& path, const std::string& family, int n,
                                     int k, const FamilyParams& params = {});
std::vector<double> read_eigenvalue_csv(const std::string& path);

}  // namespace confspec
