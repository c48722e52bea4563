#ifndef ORLHARDY_CAMPAIGN_HPP
#define ORLHARDY_CAMPAIGN_HPP

#include <string>
#include <vector>

namespace orlhardy {

struct YoungDesc {
  std::string kind; // "power" | "log_perturbed"
  double p = 2.0;
  double a = 1.0, b = 2.0, c = 1.0;
};

struct CorpusDesc {
  std::string family;
  double param = 1.0;
  std::size_t resolution = 800;
};

struct EigenCfg {
  double a = 1.0, b = 2.0;
  std::size_t n = 64;
  std::vector<double> alphas{1.0};
  std::size_t restarts = 5;
};

// One structured JSON document with a versioned schema; see README for the
// field reference.
struct CampaignConfig {
  int schema_version = 1;
  std::vector<YoungDesc> young;
  std::vector<double> s_values;
  std::vector<CorpusDesc> corpus;
  std::vector<std::string> checks;
  double tol = 1e-6;
  EigenCfg eigen;
};

CampaignConfig parse_config(const std::string& json_text);
CampaignConfig load_config(const std::string& path);

struct CampaignOutcome {
  std::string inequalities_csv;
  std::string eigen_csv;
  std::string summary;
  long passes = 0, fails = 0, skips = 0;
  int exit_code = 0;
};

enum class CampaignKind { Inequalities, Eigen, All };

/// Runs every (check, G, s, corpus) / (check, G, s, alpha) item of the
/// selected kind, up to `jobs` in parallel; rows are emitted in config
/// order so identical configs produce byte-identical CSV under any jobs
/// setting.  Exit code 0 iff no item failed (skips do not fail).
CampaignOutcome run_campaign(const CampaignConfig& cfg, CampaignKind kind, int jobs);

/// Writes inequalities.csv / eigen.csv / summary.txt under out_dir.
void write_outcome(const CampaignOutcome& outcome, const std::string& out_dir);

std::string format_double(double v);

} // namespace orlhardy

#endif
