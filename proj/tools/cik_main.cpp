// Command-line front end: simulate, knockoff, filter, approx, validate.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cik/approx.hpp"
#include "cik/diagnostics.hpp"
#include "cik/experiments.hpp"
#include "cik/filter.hpp"
#include "cik/io.hpp"
#include "cik/model.hpp"

namespace {

using nlohmann::json;

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& summary_path, std::uint64_t seed_override,
                 bool has_seed, int threads) {
  cik::experiments::ExperimentConfig config = cik::io::read_config(config_path);
  if (has_seed) config.seed = seed_override;
  const cik::experiments::ExperimentReport report =
      cik::experiments::run_simulation(config, threads);
  cik::io::write_run_records(out_path, report.runs);
  const std::string summary =
      summary_path.empty() ? out_path + ".summary.csv" : summary_path;
  cik::io::write_summary(summary, report.summary);
  std::cout << "wrote " << report.runs.size() << " run records to " << out_path
            << " and the per-amplitude summary to " << summary << "\n";
  for (const auto& s : report.summary)
    std::cout << "  u=" << s.u << "  mean_power=" << s.mean_power
              << "  mean_fdr=" << s.mean_fdr << "  (" << s.runtime_s << " s)\n";
  return 0;
}

int cmd_knockoff(const std::string& model_path, const std::string& x_path,
                 const std::string& out_path, std::uint64_t seed) {
  const cik::ModelSpec model = cik::io::read_model(model_path);
  const Eigen::MatrixXd X = cik::io::read_matrix(x_path, cik::io::support_kind(model));
  if (X.cols() != model.p) {
    std::cerr << "error: X has " << X.cols() << " columns but the model has p = " << model.p
              << "\n";
    return 1;
  }
  cik::RandomStream rng(seed);
  const Eigen::MatrixXd Xk = cik::experiments::knockoff_matrix(model, X, rng);
  cik::io::write_matrix(out_path, Xk);
  std::cout << "wrote " << Xk.rows() << "x" << Xk.cols() << " knockoff matrix to " << out_path
            << "\n";
  return 0;
}

int cmd_filter(const std::string& x_path, const std::string& xk_path,
               const std::string& y_path, double q, bool plain_variant,
               const std::string& out_path) {
  cik::filter::RegressionData data;
  data.design = cik::io::read_matrix(x_path);
  data.knockoffs = cik::io::read_matrix(xk_path);
  data.response = cik::io::read_vector(y_path);
  const cik::filter::WStatistics stats = cik::filter::select(data, q, !plain_variant);

  json j;
  j["threshold"] = stats.threshold;
  j["selected"] = stats.selected;
  j["w"] = std::vector<double>(stats.w.data(), stats.w.data() + stats.w.size());
  const std::string text = j.dump(2);
  if (out_path.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(out_path);
    out << text << "\n";
    std::cout << "wrote selection report to " << out_path << "\n";
  }
  return 0;
}

int cmd_approx(const std::string& atoms_path, double epsilon, const std::string& mode,
               double lip_b, double vol_b, int n_draws, std::uint64_t seed,
               double grid_lo, double grid_hi, double grid_step) {
  const Eigen::MatrixXd atoms = cik::io::read_matrix(atoms_path);
  const int p = static_cast<int>(atoms.cols());

  json j;
  j["epsilon"] = epsilon;
  j["p"] = p;
  j["n_atoms"] = atoms.rows();
  j["mode"] = mode;

  if (mode == "bl") {
    const cik::approx::SmoothedMeasure measure = cik::approx::make_smoothed_measure(
        atoms, epsilon, 0, cik::approx::SmoothingMode::BoundedLipschitz);
    cik::RandomStream rng(seed);
    const double estimate = cik::approx::dbl_bound_check(measure, n_draws, rng);
    j["c_smooth"] = measure.c_smooth;
    j["mean_noise_norm"] = estimate;
    j["bound"] = epsilon / std::numbers::sqrt2;
    j["bound_holds"] = estimate <= epsilon / std::numbers::sqrt2;
  } else if (mode == "tv") {
    double vol = vol_b;
    double c = 0.0;
    if (vol > 0.0) {
      c = cik::approx::smoothing_variance(epsilon, p, cik::approx::SmoothingMode::TotalVariation,
                                          lip_b, vol);
    } else {
      // default reference set: bounding box inflated by 3 sqrt(c) per side;
      // c and the box are coupled, so fix-point iterate
      c = cik::approx::smoothing_variance(epsilon, p,
                                          cik::approx::SmoothingMode::BoundedLipschitz);
      for (int it = 0; it < 50; ++it) {
        double v = 1.0;
        for (int d = 0; d < p; ++d) {
          const double lo = atoms.col(d).minCoeff() - 3.0 * std::sqrt(c);
          const double hi = atoms.col(d).maxCoeff() + 3.0 * std::sqrt(c);
          v *= hi - lo;
        }
        const double next = cik::approx::smoothing_variance(
            epsilon, p, cik::approx::SmoothingMode::TotalVariation, lip_b, v);
        if (std::fabs(next - c) < 1e-15) { c = next; break; }
        c = next;
        vol = v;
      }
      j["vol_b_default"] = vol;
    }
    cik::approx::SmoothedMeasure measure;
    measure.atoms = atoms;
    measure.epsilon = epsilon;
    measure.c_smooth = c;
    j["c_smooth"] = c;
    // grid normalization check of the smoothed density (p = 1 only)
    if (p == 1 && grid_step > 0.0) {
      cik::approx::GridSpec grid{grid_lo, grid_hi, grid_step};
      double mass = 0.0;
      const int np = grid.points();
      for (int k = 0; k < np; ++k) {
        const double w = (k == 0 || k == np - 1) ? 0.5 : 1.0;
        Eigen::VectorXd x(1);
        x[0] = grid.node(k);
        mass += w * grid_step * measure.density(x);
      }
      j["grid_mass"] = mass;
    }
  } else {
    std::cerr << "error: --mode must be tv or bl\n";
    return 1;
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_validate(const std::string& model_path, int n_draws, std::uint64_t seed) {
  const cik::ModelSpec model = cik::io::read_model(model_path);
  cik::RandomStream rng(seed);
  json out = json::array();
  for (int i = 0; i < model.p; ++i) {
    const cik::diag::SwapTestReport report =
        cik::diag::swap_invariance_test(model, i, n_draws, rng);
    json j;
    j["check"] = "swap_invariance";
    j["coordinate"] = i;
    j["method"] = report.method == cik::diag::SwapTestMethod::ExactTable ? "exact_table"
                                                                         : "two_sample_mc";
    j["statistic"] = report.statistic;
    j["p_value"] = report.p_value;
    j["pass"] = report.pass;
    out.push_back(j);
  }
  if (model.discrete() && model.p <= 3) {
    json j;
    j["check"] = "cik_membership";
    j["pass"] = cik::diag::cik_membership_test(cik::enumerate_joint(model));
    out.push_back(j);
  }
  if (!model.discrete()) {
    const cik::diag::OptimalityReport report =
        cik::diag::optimality_report(model, n_draws, rng);
    json j;
    j["check"] = "optimality";
    j["mac"] = report.mac;
    j["recon_gap"] = report.recon_gap;
    out.push_back(j);
  }
  std::cout << out.dump(2) << "\n";
  bool all = true;
  for (const auto& j : out)
    if (j.contains("pass")) all = all && j.at("pass").get<bool>();
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conditional-independence knockoffs toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  int threads = 0;
  app.add_option("--seed", seed, "global random seed");
  app.add_option("--threads", threads, "worker threads (default: CIK_THREADS or 1)");

  auto* simulate = app.add_subcommand("simulate", "run the simulation harness");
  std::string sim_config, sim_out, sim_summary;
  simulate->add_option("--config", sim_config, "experiment config JSON")->required();
  simulate->add_option("--out", sim_out, "per-run report CSV")->required();
  simulate->add_option("--summary", sim_summary, "summary CSV (default: <out>.summary.csv)");

  auto* knockoff = app.add_subcommand("knockoff", "draw a knockoff matrix for a dataset");
  std::string ko_model, ko_x, ko_out;
  knockoff->add_option("--model", ko_model, "model JSON")->required();
  knockoff->add_option("--x", ko_x, "covariate CSV")->required();
  knockoff->add_option("--out", ko_out, "output CSV")->required();

  auto* filter_cmd = app.add_subcommand("filter", "run the knockoff selection");
  std::string f_x, f_xk, f_y, f_out;
  double f_q = 0.1;
  bool f_plain = false;
  filter_cmd->add_option("--x", f_x, "covariate CSV")->required();
  filter_cmd->add_option("--xk", f_xk, "knockoff CSV")->required();
  filter_cmd->add_option("--y", f_y, "response CSV")->required();
  filter_cmd->add_option("--q", f_q, "target FDR level");
  filter_cmd->add_flag("--plain", f_plain, "plain knockoff threshold (default knockoff+)");
  filter_cmd->add_option("--out", f_out, "write the JSON report here instead of stdout");

  auto* approx_cmd = app.add_subcommand("approx", "smoothing-approximation reports");
  std::string a_atoms, a_mode = "bl";
  double a_eps = 0.2, a_lip = 0.0, a_vol = 0.0;
  double a_grid_lo = 0.0, a_grid_hi = 1.0, a_grid_step = 0.0;
  int a_draws = 100000;
  approx_cmd->add_option("--atoms", a_atoms, "atom list CSV (one point per row)")->required();
  approx_cmd->add_option("--epsilon", a_eps, "accuracy budget");
  approx_cmd->add_option("--mode", a_mode, "tv or bl");
  approx_cmd->add_option("--lip-b", a_lip, "Lipschitz constant (tv mode)");
  approx_cmd->add_option("--vol-b", a_vol, "reference-set volume (tv mode, default: inflated bounding box)");
  approx_cmd->add_option("--n-draws", a_draws, "Monte-Carlo draws (bl mode)");
  approx_cmd->add_option("--grid-lo", a_grid_lo, "grid start (tv mode, p = 1)");
  approx_cmd->add_option("--grid-hi", a_grid_hi, "grid end (tv mode, p = 1)");
  approx_cmd->add_option("--grid-step", a_grid_step, "grid step (tv mode, p = 1)");

  auto* validate = app.add_subcommand("validate", "swap/membership/optimality checks");
  std::string v_model;
  int v_draws = 4000;
  validate->add_option("--model", v_model, "model JSON")->required();
  validate->add_option("--n-draws", v_draws, "Monte-Carlo draws per check");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed())
      return cmd_simulate(sim_config, sim_out, sim_summary, seed,
                          app.count("--seed") > 0, threads);
    if (knockoff->parsed()) return cmd_knockoff(ko_model, ko_x, ko_out, seed);
    if (filter_cmd->parsed()) return cmd_filter(f_x, f_xk, f_y, f_q, f_plain, f_out);
    if (approx_cmd->parsed())
      return cmd_approx(a_atoms, a_eps, a_mode, a_lip, a_vol, a_draws, seed, a_grid_lo,
                        a_grid_hi, a_grid_step);
    if (validate->parsed()) return cmd_validate(v_model, v_draws, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
