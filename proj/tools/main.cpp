// Command-line front end: estimate / simulate / diagnose.
//
// Exit codes: 0 success, 1 data or domain error, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sharpvar/adjust.hpp"
#include "sharpvar/csv.hpp"
#include "sharpvar/diagnostics.hpp"
#include "sharpvar/rng.hpp"
#include "sharpvar/simulate.hpp"
#include "sharpvar/variance.hpp"

using nlohmann::json;
namespace sv = sharpvar;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitUsageError = 2;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write to " + out_path);
  }
  out << text;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

sv::DesignSpec parse_design(const std::string& s, std::size_t n) {
  sv::DesignSpec d;
  if (s.empty() || s == "cre") {
    d.kind = sv::DesignKind::cre;
    d.n1 = n / 2;
  } else if (s.rfind("cre:", 0) == 0) {
    d.kind = sv::DesignKind::cre;
    d.n1 = static_cast<std::size_t>(std::stoul(s.substr(4)));
  } else if (s.rfind("bre:", 0) == 0) {
    d.kind = sv::DesignKind::bre;
    d.pi1 = std::stod(s.substr(4));
  } else {
    throw CLI::ValidationError("--design", "expected cre, cre:<n1>, or bre:<pi>");
  }
  return d;
}

struct EstimateOptions {
  std::string input;
  sv::CsvSchema schema;
  std::string covariates;
  std::string estimator = "dim";
  double alpha = 0.05;
  bool df_correct = false;
  std::string format = "json";
  std::string out;
};

json report_to_json(const sv::VarianceReport& r, const sv::ExperimentData& data,
                    const std::string& estimator, const std::vector<std::string>& warnings) {
  json j;
  j["schema_version"] = 1;
  j["estimator"] = estimator;
  j["n"] = data.size();
  j["n_treated"] = data.n_treated();
  j["n_control"] = data.n_control();
  j["tau_hat"] = r.tau_hat;
  j["alpha"] = r.alpha;
  j["v_conventional"] = r.v_conventional;
  j["v_cauchy_schwarz"] = r.v_cauchy_schwarz;
  j["v_sharp_upper"] = r.v_sharp_upper;
  j["v_sharp_lower"] = r.v_sharp_lower;
  j["v_sharp_lower_raw"] = r.v_sharp_lower_raw;
  j["cross_upper"] = r.cross_upper;
  j["cross_lower"] = r.cross_lower;
  j["a_hat"] = r.a_hat;
  j["b_hat"] = r.b_hat;
  j["ci_conventional"] = {r.ci_conventional.lo, r.ci_conventional.hi};
  j["ci_cauchy_schwarz"] = {r.ci_cauchy_schwarz.lo, r.ci_cauchy_schwarz.hi};
  j["ci_sharp"] = {r.ci_sharp.lo, r.ci_sharp.hi};
  j["ratio_conventional"] = r.ratio_conventional;
  j["ratio_cauchy_schwarz"] = r.ratio_cauchy_schwarz;
  if (r.v_sharp_upper > 0.0) {
    // Table-style orientation: sharp bound over each looser estimate.
    j["sharp_over_conventional"] = r.v_sharp_upper / r.v_conventional;
    j["sharp_over_cauchy_schwarz"] = r.v_sharp_upper / r.v_cauchy_schwarz;
  }
  if (r.v_sharp_upper == 0.0) {
    j["degenerate_zero_variance"] = true;
  }
  if (!warnings.empty()) j["warnings"] = warnings;
  return j;
}

std::string report_to_csv(const json& j) {
  static const char* cols[] = {
      "estimator",       "n",           "n_treated",       "n_control",
      "tau_hat",         "alpha",       "v_conventional",  "v_cauchy_schwarz",
      "v_sharp_upper",   "v_sharp_lower", "v_sharp_lower_raw", "cross_upper",
      "cross_lower",     "a_hat",       "b_hat",           "ci_conventional_lo",
      "ci_conventional_hi", "ci_cauchy_schwarz_lo", "ci_cauchy_schwarz_hi",
      "ci_sharp_lo",     "ci_sharp_hi", "ratio_conventional", "ratio_cauchy_schwarz",
      "rho"};
  std::ostringstream hdr, row;
  bool first = true;
  for (const char* c : cols) {
    std::string name = c;
    std::string value;
    if (name == "estimator") {
      value = j["estimator"].get<std::string>();
    } else if (name.rfind("ci_", 0) == 0) {
      const bool lo = name.size() > 3 && name.substr(name.size() - 2) == "lo";
      const std::string key = name.substr(0, name.size() - 3);
      value = fmt(j[key][lo ? 0 : 1].get<double>());
    } else if (name == "n" || name == "n_treated" || name == "n_control") {
      value = std::to_string(j[name].get<std::size_t>());
    } else if (name == "rho") {
      value = j.contains("rho") ? fmt(j["rho"].get<double>()) : "";
    } else {
      value = fmt(j[name].get<double>());
    }
    hdr << (first ? "" : ",") << name;
    row << (first ? "" : ",") << value;
    first = false;
  }
  return hdr.str() + "\n" + row.str() + "\n";
}

int run_estimate(const EstimateOptions& opt) {
  sv::CsvSchema schema = opt.schema;
  schema.covariate_columns = split_list(opt.covariates);

  const sv::ExperimentData data = sv::load_csv(opt.input, schema);

  std::vector<std::string> warnings;
  std::string estimator = opt.estimator;
  std::pair<sv::PointEstimate, sv::AdjustedSamples> est;
  if (estimator == "lin" && data.x.cols() == 0) {
    warnings.push_back("no covariates given; falling back to dim");
    estimator = "dim";
  }
  if (estimator == "dim") {
    est = sv::dim_estimate(data);
  } else {
    est = sv::lin_estimate(data);
  }

  const sv::VarianceReport report =
      sv::variance_report(est.second, est.first.tau_hat, opt.alpha, opt.df_correct);
  json j = report_to_json(report, data, estimator, warnings);
  if (est.second.realized_n_t() == est.second.realized_n_tbar()) {
    try {
      j["rho"] = sv::sorted_residual_correlation(est.second);
    } catch (const std::exception&) {
      // zero-variance arm; rho undefined
    }
  }

  if (opt.format == "json") {
    write_output(j.dump(2) + "\n", opt.out);
  } else {
    write_output(report_to_csv(j), opt.out);
  }
  return kExitOk;
}

struct SimulateOptions {
  std::string mode;  // bias | theta-sweep
  std::string n_list;
  std::string theta_list = "0.5";
  std::size_t reps = 0;
  std::uint64_t seed = 0;
  double alpha0 = 0.0;
  double beta0 = 1.0;
  std::string design = "cre";
  std::string estimator = "lin";
  std::string out;
};

int run_simulate(const SimulateOptions& opt) {
  std::vector<std::size_t> ns;
  for (const auto& s : split_list(opt.n_list)) {
    ns.push_back(static_cast<std::size_t>(std::stoul(s)));
  }
  std::vector<double> thetas;
  for (const auto& s : split_list(opt.theta_list)) thetas.push_back(std::stod(s));
  if (ns.empty()) {
    std::cerr << "error: --n is required\n";
    return kExitUsageError;
  }

  std::ostringstream csv;
  if (opt.mode == "bias") {
    if (opt.reps < 100) {
      std::cerr << "error: bias mode needs --reps >= 100\n";
      return kExitUsageError;
    }
    if (thetas.size() != 1) {
      std::cerr << "error: bias mode takes a single --theta\n";
      return kExitUsageError;
    }
    const sv::EstimatorKind kind =
        opt.estimator == "dim" ? sv::EstimatorKind::dim : sv::EstimatorKind::lin;
    csv << "n,theta,reps,seed,mean_conventional,mean_cauchy_schwarz,mean_sharp,"
           "true_variance,bias_conventional,bias_cauchy_schwarz,bias_sharp,"
           "se_conventional,se_cauchy_schwarz,se_sharp,mc_se_true_variance,redraws\n";
    for (std::size_t i = 0; i < ns.size(); ++i) {
      sv::DgpParams params;
      params.n = ns[i];
      params.theta = thetas[0];
      params.alpha0 = opt.alpha0;
      params.beta0 = opt.beta0;
      const std::uint64_t point_seed = sv::derive_seed(opt.seed, i);
      const sv::FinitePopulation pop =
          sv::generate_population(params, sv::derive_seed(point_seed, 0));
      const sv::DesignSpec design = parse_design(opt.design, ns[i]);
      const sv::BiasSummary b =
          sv::monte_carlo_bias(pop, design, kind, opt.reps, sv::derive_seed(point_seed, 1));
      csv << ns[i] << ',' << fmt(thetas[0]) << ',' << b.reps << ',' << b.seed << ','
          << fmt(b.mean_conventional) << ',' << fmt(b.mean_cauchy_schwarz) << ','
          << fmt(b.mean_sharp) << ',' << fmt(b.true_variance) << ','
          << fmt(b.bias_conventional) << ',' << fmt(b.bias_cauchy_schwarz) << ','
          << fmt(b.bias_sharp) << ',' << fmt(b.se_conventional) << ','
          << fmt(b.se_cauchy_schwarz) << ',' << fmt(b.se_sharp) << ','
          << fmt(b.mc_se_true_variance) << ',' << b.redraws << '\n';
    }
  } else if (opt.mode == "theta-sweep") {
    if (ns.size() != 1) {
      std::cerr << "error: theta-sweep takes a single --n\n";
      return kExitUsageError;
    }
    sv::DgpParams params;
    params.n = ns[0];
    params.alpha0 = opt.alpha0;
    params.beta0 = opt.beta0;
    const sv::DesignSpec design = parse_design(opt.design, ns[0]);
    const sv::CrossTermCurve curve =
        sv::theta_sweep(thetas, params, design, opt.reps, opt.seed);
    csv << "theta,n,reps,seed,cross_conventional,cross_cauchy_schwarz,cross_sharp,"
           "cross_oracle,se_conventional,se_cauchy_schwarz,se_sharp\n";
    for (const auto& pt : curve.points) {
      csv << fmt(pt.theta) << ',' << ns[0] << ',' << pt.reps << ',' << pt.seed << ','
          << fmt(pt.mean_conventional) << ',' << fmt(pt.mean_cauchy_schwarz) << ','
          << fmt(pt.mean_sharp) << ',' << fmt(pt.oracle) << ','
          << fmt(pt.se_conventional) << ',' << fmt(pt.se_cauchy_schwarz) << ','
          << fmt(pt.se_sharp) << '\n';
    }
  } else {
    std::cerr << "error: unknown simulate mode '" << opt.mode << "'\n";
    return kExitUsageError;
  }

  write_output(csv.str(), opt.out);
  return kExitOk;
}

struct DiagnoseOptions {
  std::string input;
  sv::CsvSchema schema;
  std::string covariates;
  std::string estimator = "dim";
  double alpha = 0.05;
  std::string out;
};

int run_diagnose(const DiagnoseOptions& opt) {
  sv::CsvSchema schema = opt.schema;
  schema.covariate_columns = split_list(opt.covariates);

  const sv::ExperimentData data = sv::load_csv(opt.input, schema);
  auto [point, adj] = (opt.estimator == "lin" && data.x.cols() > 0)
                          ? sv::lin_estimate(data)
                          : sv::dim_estimate(data);

  const sv::QqSeries qq = sv::qq_pairs(adj);
  std::ostringstream csv;
  csv << "prob,q_treated,q_control\n";
  for (std::size_t i = 0; i < qq.probs.size(); ++i) {
    csv << fmt(qq.probs[i]) << ',' << fmt(qq.q_treated[i]) << ','
        << fmt(qq.q_control[i]) << '\n';
  }
  write_output(csv.str(), opt.out);

  json summary;
  summary["schema_version"] = 1;
  summary["tau_hat"] = point.tau_hat;
  const sv::VarianceReport report =
      sv::variance_report(adj, point.tau_hat, opt.alpha, false);
  if (report.v_sharp_upper > 0.0) {
    const auto [conv_ratio, cs_ratio] = sv::bound_ratios(report);
    summary["sharp_over_conventional"] = conv_ratio;
    summary["sharp_over_cauchy_schwarz"] = cs_ratio;
    summary["conventional_decrease"] = 1.0 - conv_ratio;
  }
  if (adj.realized_n_t() == adj.realized_n_tbar()) {
    try {
      summary["rho"] = sv::sorted_residual_correlation(adj);
    } catch (const std::exception& e) {
      summary["rho_omitted"] = e.what();
    }
  } else {
    summary["rho_omitted"] = "unbalanced design; rho is defined for balanced designs";
  }
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Treatment-effect estimation with sharp variance bounds"};
  app.require_subcommand(1);

  EstimateOptions est;
  auto* cmd_est = app.add_subcommand("estimate", "Estimate the ATE and variance bounds");
  cmd_est->add_option("--input", est.input, "input CSV file")->required();
  cmd_est->add_option("--outcome", est.schema.outcome_column, "outcome column")->required();
  cmd_est->add_option("--treatment", est.schema.treatment_column, "treatment column")
      ->required();
  cmd_est->add_option("--covariates", est.covariates, "comma-separated covariate columns");
  cmd_est->add_option("--strata", est.schema.strata_column, "stratum column");
  cmd_est->add_option("--estimator", est.estimator, "dim or lin")
      ->check(CLI::IsMember({"dim", "lin"}));
  cmd_est->add_option("--alpha", est.alpha, "CI level")->check(CLI::Range(1e-12, 1.0));
  cmd_est->add_flag("--df-correct", est.df_correct, "n(n-1) divisors for the conventional estimator");
  cmd_est->add_option("--format", est.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd_est->add_option("--out", est.out, "output path (default stdout)");

  SimulateOptions sim;
  auto* cmd_sim = app.add_subcommand("simulate", "Finite-population simulation studies");
  cmd_sim->add_option("mode", sim.mode, "bias or theta-sweep")->required();
  cmd_sim->add_option("--n", sim.n_list, "population size(s), comma-separated")->required();
  cmd_sim->add_option("--theta", sim.theta_list, "theta value(s), comma-separated");
  cmd_sim->add_option("--reps", sim.reps, "assignment draws per setting")->required();
  cmd_sim->add_option("--seed", sim.seed, "master seed")->required();
  cmd_sim->add_option("--alpha0", sim.alpha0, "control-outcome intercept");
  cmd_sim->add_option("--beta0", sim.beta0, "control-outcome slope");
  cmd_sim->add_option("--design", sim.design, "cre | cre:<n1> | bre:<pi>");
  cmd_sim->add_option("--estimator", sim.estimator, "dim or lin (bias mode)")
      ->check(CLI::IsMember({"dim", "lin"}));
  cmd_sim->add_option("--out", sim.out, "output path (default stdout)");

  DiagnoseOptions diag;
  auto* cmd_diag = app.add_subcommand("diagnose", "Q-Q pairs and coupling diagnostics");
  cmd_diag->add_option("--input", diag.input, "input CSV file")->required();
  cmd_diag->add_option("--outcome", diag.schema.outcome_column, "outcome column")->required();
  cmd_diag->add_option("--treatment", diag.schema.treatment_column, "treatment column")
      ->required();
  cmd_diag->add_option("--covariates", diag.covariates, "comma-separated covariate columns");
  cmd_diag->add_option("--strata", diag.schema.strata_column, "stratum column");
  cmd_diag->add_option("--estimator", diag.estimator, "dim or lin")
      ->check(CLI::IsMember({"dim", "lin"}));
  cmd_diag->add_option("--alpha", diag.alpha, "CI level");
  cmd_diag->add_option("--out", diag.out, "Q-Q CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsageError;
  }

  try {
    if (cmd_est->parsed()) return run_estimate(est);
    if (cmd_sim->parsed()) return run_simulate(sim);
    if (cmd_diag->parsed()) return run_diagnose(diag);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsageError;
}
