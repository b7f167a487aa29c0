#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>

#include "confspec/cli_report.hpp"
#include "confspec/errors.hpp"

namespace {

int do_run(const std::string& path) {
  const confspec::RunConfig cfg = confspec::load_config(path);
  const confspec::RunOutcome out = confspec::run(cfg);
  const auto& fine = out.levels.back();
  std::printf("config %s  h=%.6g  nodes=%d  method=%s\n", cfg.hash().c_str(), fine.h, fine.nodes,
              confspec::to_string(fine.spectrum.method).c_str());
  for (int i = 0; i < fine.spectrum.count(); ++i)
    std::printf("  lambda_%d = %.12g  (residual %.2e)\n", i + 1, fine.spectrum.eigenvalues[i],
                fine.spectrum.residuals[i]);
  std::printf("oracle: %s %s  %s\n", out.oracle.kind.c_str(),
              out.oracle.kind == "none" ? "-" : (out.oracle.passed ? "passed" : "FAILED"),
              out.oracle.detail.c_str());
  for (const auto& r : out.reports) {
    const char* status = !r.applicable ? "n/a" : (r.satisfied ? "ok" : (r.asserted ? "VIOLATED" : "fails"));
    std::printf("  %-24s k=%-3d lhs=%-14.8g rhs=%-14.8g slack=%-14.8g %s\n", r.family.c_str(), r.k, r.lhs,
                r.rhs, r.slack, status);
  }
  for (const auto& f : out.files) std::printf("wrote %s\n", f.c_str());
  return out.exit_code;
}

int do_convergence(const std::string& path) {
  const confspec::RunConfig cfg = confspec::load_config(path);
  const confspec::ConvergenceRecord rec = confspec::convergence_study(cfg);
  std::printf("%-6s", "index");
  for (double h : rec.hs) std::printf(" h=%-16.6g", h);
  std::printf(" %-18s %s\n", "richardson", "order");
  for (std::size_t i = 0; i < rec.richardson.size(); ++i) {
    std::printf("%-6zu", i + 1);
    for (const auto& level : rec.eigenvalues) std::printf(" %-18.12g", level[i]);
    std::printf(" %-18.12g %.3f %s\n", rec.richardson[i], rec.orders[i], rec.notes[i].c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet eigenvalues of conformally flat metrics and universal inequality checks"};
  app.require_subcommand(1);

  std::string run_path;
  auto* run_cmd = app.add_subcommand("run", "solve a configured problem and write reports");
  run_cmd->add_option("config", run_path, "JSON configuration")->required();

  std::string conv_path;
  auto* conv_cmd = app.add_subcommand("convergence", "refinement study (levels >= 3)");
  conv_cmd->add_option("config", conv_path, "JSON configuration")->required();

  confspec::VerifyOptions vopt;
  auto* verify_cmd = app.add_subcommand("verify", "run the oracle and invariant suite");
  verify_cmd->add_option("--tol", vopt.tol, "solver residual tolerance");
  verify_cmd->add_option("--seed", vopt.seed, "solver start-vector seed");
  verify_cmd->add_flag("--inject-fault", vopt.inject_fault, "assemble with a deliberate stiffness fault");
  verify_cmd->add_flag("--fail-fast", vopt.fail_fast, "stop at the first failing check");

  std::string csv, family;
  int n = 0, k = 0;
  confspec::FamilyParams params;
  auto* seq_cmd = app.add_subcommand("check-sequence", "evaluate a sequence inequality on a CSV of eigenvalues");
  seq_cmd->add_option("csv", csv, "eigenvalue table")->required();
  seq_cmd->add_option("--family", family, "inequality family")->required();
  seq_cmd->add_option("--n", n, "dimension")->required();
  seq_cmd->add_option("--k", k, "index k")->required();
  seq_cmd->add_option("--t", params.t, "power-metric exponent");
  seq_cmd->add_option("--rho-max", params.rho_max);
  seq_cmd->add_option("--rho-min", params.rho_min);
  seq_cmd->add_option("--a", params.a);
  seq_cmd->add_option("--b", params.b);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return do_run(run_path);
    if (conv_cmd->parsed()) return do_convergence(conv_path);
    if (verify_cmd->parsed()) {
      vopt.log = &std::cout;
      const confspec::VerifySummary s = confspec::verify(vopt);
      std::printf("verify: %s in %.1f s\n", s.passed() ? "all checks passed" : "FAILED", s.seconds);
      return s.passed() ? 0 : 2;
    }
    if (seq_cmd->parsed()) {
      const confspec::InequalityReport r = confspec::check_sequence_file(csv, family, n, k, params);
      std::cout << confspec::to_json(r).dump(2) << std::endl;
      return r.violated() ? 2 : 0;
    }
  } catch (const confspec::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
