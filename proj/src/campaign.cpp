#include "orlhardy/campaign.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "orlhardy/corpus.hpp"
#include "orlhardy/eigenproblem.hpp"
#include "orlhardy/errors.hpp"
#include "orlhardy/hardy.hpp"

namespace orlhardy {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  char buf[48];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

namespace {

YoungFunction make_young(const YoungDesc& d) {
  if (d.kind == "power") return YoungFunction::power(d.p);
  if (d.kind == "log_perturbed") return YoungFunction::log_perturbed(d.a, d.b, d.c);
  throw PreconditionError("config: unknown Young kind '" + d.kind + "'");
}

std::string young_tag(const YoungDesc& d) {
  if (d.kind == "power") return "power(p=" + format_double(d.p) + ")";
  return "log_perturbed(a=" + format_double(d.a) + ",b=" + format_double(d.b) +
         ",c=" + format_double(d.c) + ")";
}

constexpr const char* kIneqHeader =
    "name,g,p_minus,p_plus,s,constant,lhs,rhs,ratio,budget,result,corpus,note\n";
constexpr const char* kEigenHeader =
    "mode,g,p_minus,p_plus,s,alpha,n,restarts,Lambda_alpha,lambda_alpha,lower_bound,"
    "lower_pass,comp_lo,comp_hi,comp_pass,iterations,grad_norm,converged\n";

struct ItemOutcome {
  std::string row;
  int kind = 0; // 0 pass, 1 fail, 2 skip
};

std::string csv_escape(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char ch : v) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += "\"";
  return out;
}

struct IneqItem {
  std::string check;       // row label ("palmieri_theta=1-s", ...)
  std::string op;          // which checker to run
  YoungDesc young;
  double s = 0.0;          // NaN-free; < 0 means "not applicable"
  CorpusDesc corpus;
  double theta = 0.0;
  bool requires_regime = false;
};

ItemOutcome run_ineq_item(const IneqItem& it, double tol) {
  ItemOutcome out;
  const YoungDesc& yd = it.young;
  auto row_prefix = [&](double pm, double pp) {
    std::string s_field = it.s >= 0.0 ? format_double(it.s) : "-";
    return it.check + "," + csv_escape(young_tag(yd)) + "," + format_double(pm) + "," +
           format_double(pp) + "," + s_field + ",";
  };
  auto corpus_tag = [&]() {
    return it.corpus.family + "(" + format_double(it.corpus.param) + ")@" +
           std::to_string(it.corpus.resolution);
  };

  try {
    const YoungFunction F = make_young(yd);
    if (it.requires_regime && !(it.s * F.p_minus() > 1.0)) {
      out.kind = 2;
      out.row = row_prefix(F.p_minus(), F.p_plus()) + "-,-,-,-,-,skip," + corpus_tag() +
                "," + csv_escape("out of regime: s*p- <= 1");
      return out;
    }
    const CorpusEntry entry =
        make_corpus(it.corpus.family, it.corpus.param, it.corpus.resolution);

    InequalityReport rep;
    if (it.op == "classical") {
      if (yd.kind != "power")
        throw PreconditionError("classical check applies to power G only");
      rep = check_classical_hardy(entry.u, yd.p, tol);
    } else if (it.op == "palmieri") {
      rep = check_palmieri(entry.u, F, it.theta, kNoDomainLimit, tol);
    } else if (it.op == "local_lemma") {
      rep = check_local_lemma(entry.u, F, it.s, tol);
    } else if (it.op == "modular_hardy") {
      rep = check_modular_hardy(entry.u, F, it.s, tol);
    } else if (it.op == "norm_hardy_cor") {
      rep = check_norm_hardy(entry.u, F, it.s, NormHardyVariant::Corollary, tol);
    } else if (it.op == "norm_hardy_thm") {
      rep = check_norm_hardy(entry.u, F, it.s, NormHardyVariant::Theorem, tol);
    } else {
      throw PreconditionError("unknown check '" + it.op + "'");
    }

    const char* result = rep.vacuous ? "skip" : (rep.pass ? "pass" : "FAIL");
    out.kind = rep.vacuous ? 2 : (rep.pass ? 0 : 1);
    out.row = row_prefix(F.p_minus(), F.p_plus()) + format_double(rep.constant) + "," +
              format_double(rep.lhs.value) + "," + format_double(rep.rhs.value) + "," +
              format_double(rep.ratio) + "," + format_double(rep.budget) + "," + result +
              "," + corpus_tag() + "," + csv_escape(rep.note);
  } catch (const PreconditionError& e) {
    out.kind = 2;
    out.row = it.check + "," + csv_escape(young_tag(yd)) + ",-,-," +
              (it.s >= 0.0 ? format_double(it.s) : "-") + ",-,-,-,-,-,skip," +
              corpus_tag() + "," + csv_escape(e.what());
  } catch (const std::exception& e) {
    out.kind = 1;
    out.row = it.check + "," + csv_escape(young_tag(yd)) + ",-,-," +
              (it.s >= 0.0 ? format_double(it.s) : "-") + ",-,-,-,-,-,FAIL," +
              corpus_tag() + "," + csv_escape(std::string("error: ") + e.what());
  }
  return out;
}

struct EigItem {
  std::string mode; // "eigen_dirichlet" | "eigen_weighted"
  YoungDesc young;
  double s = 0.0;
  double alpha = 1.0;
  EigenCfg cfg;
};

ItemOutcome run_eigen_item(const EigItem& it, double /*tol*/) {
  ItemOutcome out;
  try {
    const YoungFunction F = make_young(it.young);
    if (!(it.s * F.p_minus() > 1.0)) {
      out.kind = 2;
      out.row = it.mode + "," + csv_escape(young_tag(it.young)) + "," +
                format_double(F.p_minus()) + "," + format_double(F.p_plus()) + "," +
                format_double(it.s) + "," + format_double(it.alpha) + "," +
                std::to_string(it.cfg.n) + ",-,-,-,-,skip,-,-,-,-,-,-";
      return out;
    }
    DiscreteSpace sp{it.cfg.a, it.cfg.b, it.cfg.n};
    NonlocalForm form(sp, F, it.s);
    EigenOptions opt;
    opt.restarts = it.cfg.restarts;
    opt.weighted = it.mode == "eigen_weighted";
    EigenSolution sol = minimize_quotient(form, it.alpha, opt);

    bool all_pass = true;
    double lb = 0.0, clo = 0.0, chi = 0.0;
    bool lb_pass = false, comp_pass = true;
    for (const BoundCheck& b : sol.bound_checks) {
      all_pass = all_pass && b.pass;
      if (b.name.find("lower_bound") != std::string::npos) {
        lb = b.lhs;
        lb_pass = b.pass;
      } else if (b.name == "comparability_lo") {
        clo = b.lhs;
        comp_pass = comp_pass && b.pass;
      } else if (b.name == "comparability_hi") {
        chi = b.rhs;
        comp_pass = comp_pass && b.pass;
      }
    }
    out.kind = (all_pass && sol.converged) ? 0 : 1;
    out.row = it.mode + "," + csv_escape(young_tag(it.young)) + "," +
              format_double(F.p_minus()) + "," + format_double(F.p_plus()) + "," +
              format_double(it.s) + "," + format_double(it.alpha) + "," +
              std::to_string(it.cfg.n) + "," + std::to_string(it.cfg.restarts) + "," +
              format_double(sol.Lambda_alpha) + "," + format_double(sol.lambda_alpha) +
              "," + format_double(lb) + "," + (lb_pass ? "1" : "0") + "," +
              format_double(clo) + "," + format_double(chi) + "," +
              (comp_pass ? "1" : "0") + "," + std::to_string(sol.iterations) + "," +
              format_double(sol.final_grad_norm) + "," + (sol.converged ? "1" : "0");
  } catch (const PreconditionError& e) {
    out.kind = 2;
    out.row = it.mode + "," + csv_escape(young_tag(it.young)) + ",-,-," +
              format_double(it.s) + "," + format_double(it.alpha) + "," +
              std::to_string(it.cfg.n) + ",-,-,-,-,skip,-,-,-,-,-," +
              csv_escape(e.what());
  } catch (const std::exception& e) {
    out.kind = 1;
    out.row = it.mode + "," + csv_escape(young_tag(it.young)) + ",-,-," +
              format_double(it.s) + "," + format_double(it.alpha) + "," +
              std::to_string(it.cfg.n) + ",-,-,-,-,FAIL,-,-,-,-,-," +
              csv_escape(std::string("error: ") + e.what());
  }
  return out;
}

template <class Item, class Fn>
std::vector<ItemOutcome> run_items(const std::vector<Item>& items, int jobs, const Fn& fn) {
  std::vector<ItemOutcome> out(items.size());
  if (jobs > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
#endif
    for (long long i = 0; i < static_cast<long long>(items.size()); ++i)
      out[static_cast<std::size_t>(i)] = fn(items[static_cast<std::size_t>(i)]);
  } else {
    for (std::size_t i = 0; i < items.size(); ++i) out[i] = fn(items[i]);
  }
  return out;
}

} // namespace

CampaignConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw PreconditionError(std::string("config parse error: ") + e.what());
  }
  CampaignConfig cfg;
  try {
    cfg.schema_version = j.value("schema_version", 1);
    if (cfg.schema_version != 1)
      throw PreconditionError("config: unsupported schema_version");
    for (const auto& y : j.value("young", nlohmann::json::array())) {
      YoungDesc d;
      d.kind = y.at("kind").get<std::string>();
      d.p = y.value("p", 2.0);
      d.a = y.value("a", 1.0);
      d.b = y.value("b", 2.0);
      d.c = y.value("c", 1.0);
      cfg.young.push_back(d);
    }
    cfg.s_values = j.value("s_values", std::vector<double>{});
    for (const auto& c : j.value("corpus", nlohmann::json::array())) {
      CorpusDesc d;
      d.family = c.at("family").get<std::string>();
      d.param = c.value("param", 1.0);
      d.resolution = c.value("resolution", static_cast<std::size_t>(800));
      cfg.corpus.push_back(d);
    }
    cfg.checks = j.value("checks", std::vector<std::string>{});
    cfg.tol = j.value("tol", 1e-6);
    if (j.contains("eigen")) {
      const auto& e = j.at("eigen");
      if (e.contains("interval")) {
        cfg.eigen.a = e.at("interval").at(0).get<double>();
        cfg.eigen.b = e.at("interval").at(1).get<double>();
      }
      cfg.eigen.n = e.value("n", static_cast<std::size_t>(64));
      cfg.eigen.alphas = e.value("alphas", std::vector<double>{1.0});
      cfg.eigen.restarts = e.value("restarts", static_cast<std::size_t>(5));
    }
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("config field error: ") + e.what());
  }
  return cfg;
}

CampaignConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

CampaignOutcome run_campaign(const CampaignConfig& cfg, CampaignKind kind, int jobs) {
  if (jobs <= 0) {
#ifdef _OPENMP
    jobs = omp_get_max_threads();
#else
    jobs = 1;
#endif
  }

  std::vector<IneqItem> ineq_items;
  std::vector<EigItem> eig_items;
  for (const std::string& check : cfg.checks) {
    const bool is_eigen = check == "eigen_dirichlet" || check == "eigen_weighted";
    if (is_eigen) {
      if (kind == CampaignKind::Inequalities) continue;
      for (const YoungDesc& y : cfg.young)
        for (double s : cfg.s_values)
          for (double alpha : cfg.eigen.alphas)
            eig_items.push_back({check, y, s, alpha, cfg.eigen});
      continue;
    }
    if (kind == CampaignKind::Eigen) continue;
    for (const YoungDesc& y : cfg.young) {
      if (check == "classical") {
        for (const CorpusDesc& c : cfg.corpus)
          ineq_items.push_back({"classical", "classical", y, -1.0, c, 0.0, false});
        continue;
      }
      for (double s : cfg.s_values) {
        if (check == "palmieri") {
          for (const CorpusDesc& c : cfg.corpus) {
            ineq_items.push_back(
                {"palmieri_theta=1-s", "palmieri", y, s, c, 1.0 - s, true});
            ineq_items.push_back({"palmieri_theta=-s", "palmieri", y, s, c, -s, false});
          }
        } else {
          for (const CorpusDesc& c : cfg.corpus)
            ineq_items.push_back({check, check, y, s, c, 0.0, true});
        }
      }
    }
  }

  const double tol = cfg.tol;
  std::vector<ItemOutcome> iout =
      run_items(ineq_items, jobs, [&](const IneqItem& it) { return run_ineq_item(it, tol); });
  std::vector<ItemOutcome> eout =
      run_items(eig_items, jobs, [&](const EigItem& it) { return run_eigen_item(it, tol); });

  CampaignOutcome outcome;
  outcome.inequalities_csv = kIneqHeader;
  for (const ItemOutcome& o : iout) outcome.inequalities_csv += o.row + "\n";
  outcome.eigen_csv = kEigenHeader;
  for (const ItemOutcome& o : eout) outcome.eigen_csv += o.row + "\n";

  double worst_ratio = 0.0;
  std::string worst_row;
  for (const ItemOutcome& o : iout) {
    if (o.kind == 0) ++outcome.passes;
    else if (o.kind == 1) ++outcome.fails;
    else ++outcome.skips;
  }
  for (const ItemOutcome& o : eout) {
    if (o.kind == 0) ++outcome.passes;
    else if (o.kind == 1) ++outcome.fails;
    else ++outcome.skips;
  }
  // worst ratio among inequality rows (7th field)
  for (const ItemOutcome& o : iout) {
    if (o.kind != 0) continue;
    std::size_t pos = 0;
    int field = 0;
    std::string ratio_field;
    for (std::size_t i = 0; i <= o.row.size(); ++i) {
      if (i == o.row.size() || o.row[i] == ',') {
        if (field == 8) ratio_field = o.row.substr(pos, i - pos);
        ++field;
        pos = i + 1;
      }
    }
    const double r = std::atof(ratio_field.c_str());
    if (r > worst_ratio) {
      worst_ratio = r;
      worst_row = o.row.substr(0, o.row.find(','));
    }
  }

  std::ostringstream sum;
  sum << "campaign summary\n";
  sum << "  checks passed:  " << outcome.passes << "\n";
  sum << "  checks failed:  " << outcome.fails << "\n";
  sum << "  checks skipped: " << outcome.skips << " (out of regime or not applicable)\n";
  if (!worst_row.empty())
    sum << "  worst ratio:    " << format_double(worst_ratio) << " (" << worst_row
        << ")\n";
  outcome.summary = sum.str();
  outcome.exit_code = outcome.fails == 0 ? 0 : 1;
  return outcome;
}

void write_outcome(const CampaignOutcome& outcome, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream f(out_dir + "/inequalities.csv", std::ios::binary);
    f << outcome.inequalities_csv;
  }
  {
    std::ofstream f(out_dir + "/eigen.csv", std::ios::binary);
    f << outcome.eigen_csv;
  }
  {
    std::ofstream f(out_dir + "/summary.txt", std::ios::binary);
    f << outcome.summary;
  }
}

} // namespace orlhardy
