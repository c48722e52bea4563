#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orlhardy/campaign.hpp"
#include "orlhardy/errors.hpp"
#include "orlhardy/hardy.hpp"
#include "orlhardy/young.hpp"

namespace {

orlhardy::YoungFunction make_young(const orlhardy::YoungDesc& d) {
  if (d.kind == "power") return orlhardy::YoungFunction::power(d.p);
  return orlhardy::YoungFunction::log_perturbed(d.a, d.b, d.c);
}

int cmd_campaign(const std::string& config_path, orlhardy::CampaignKind kind, int jobs,
                 double tol_override, const std::string& out_dir) {
  orlhardy::CampaignConfig cfg = orlhardy::load_config(config_path);
  if (tol_override > 0.0) cfg.tol = tol_override;
  orlhardy::CampaignOutcome outcome = orlhardy::run_campaign(cfg, kind, jobs);
  orlhardy::write_outcome(outcome, out_dir);
  std::fputs(outcome.summary.c_str(), stdout);
  std::printf("reports written to %s\n", out_dir.c_str());
  return outcome.exit_code;
}

int cmd_constants(const std::string& config_path) {
  orlhardy::CampaignConfig cfg = orlhardy::load_config(config_path);
  std::printf("%-40s %8s %10s %10s %10s %12s %12s %14s %14s\n", "G", "s", "c_H", "C",
              "C_H", "norm(thm)", "norm(cor)", "palm(1-s)", "palm(-s)");
  for (const auto& y : cfg.young) {
    const orlhardy::YoungFunction F = make_young(y);
    for (double s : cfg.s_values) {
      if (!(s * F.p_minus() > 1.0)) {
        std::printf("%-40s %8s  out of regime (s*p- <= 1)\n", F.name().c_str(),
                    orlhardy::format_double(s).c_str());
        continue;
      }
      const orlhardy::HardyConstants k = orlhardy::compute_constants(F, s);
      std::printf("%-40s %8s %10.6g %10.6g %10.6g %12.6g %12.6g %14.6g %14.6g\n",
                  F.name().c_str(), orlhardy::format_double(s).c_str(), k.c_H,
                  k.C_doubling, k.C_H, k.norm_const_thm, k.norm_const_cor,
                  k.palmieri(1.0 - s), k.palmieri(-s));
    }
  }
  return 0;
}

int cmd_young_check(const std::string& config_path) {
  orlhardy::CampaignConfig cfg = orlhardy::load_config(config_path);
  bool all_pass = true;
  for (const auto& y : cfg.young) {
    const orlhardy::YoungFunction F = make_young(y);
    const auto cert = orlhardy::certify_growth(F, orlhardy::default_growth_grid());
    std::printf("%-40s declared [%g, %g]  measured [%.12g, %.12g]  %s\n",
                F.name().c_str(), F.p_minus(), F.p_plus(), cert.min_ratio,
                cert.max_ratio, cert.pass ? "pass" : "FAIL");
    all_pass = all_pass && cert.pass;
  }
  return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"modular/norm calculus for one-dimensional fractional "
               "Orlicz-Sobolev spaces: Hardy inequality verification and "
               "nonlocal eigenvalue bounds"};
  app.require_subcommand(1);
  app.fallthrough(); // global options may follow the subcommand

  std::string config_path;
  std::string out_dir = "out";
  int jobs = 0;
  double tol = 0.0;
  app.add_option("--config", config_path, "campaign config (JSON)")
      ->envname("ORLHARDY_CONFIG");
  app.add_option("--jobs", jobs, "max parallel campaign items (0 = all cores)")
      ->envname("ORLHARDY_JOBS");
  app.add_option("--tol", tol, "override quadrature tolerance")
      ->envname("ORLHARDY_TOL");
  app.add_option("--out", out_dir, "output directory for CSV reports");

  CLI::App* verify = app.add_subcommand("verify", "run the inequality campaign");
  CLI::App* eigen = app.add_subcommand("eigen", "run the eigenvalue campaign");
  CLI::App* constants =
      app.add_subcommand("constants", "print the Hardy constants table");
  CLI::App* young_check =
      app.add_subcommand("young-check", "growth-condition certification");

  CLI11_PARSE(app, argc, argv);

  try {
    if (config_path.empty()) {
      std::fprintf(stderr, "error: --config is required\n");
      return 2;
    }
    if (verify->parsed())
      return cmd_campaign(config_path, orlhardy::CampaignKind::Inequalities, jobs, tol,
                          out_dir);
    if (eigen->parsed())
      return cmd_campaign(config_path, orlhardy::CampaignKind::Eigen, jobs, tol, out_dir);
    if (constants->parsed()) return cmd_constants(config_path);
    if (young_check->parsed()) return cmd_young_check(config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
