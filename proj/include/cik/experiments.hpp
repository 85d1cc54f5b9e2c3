// Simulation harness: draw a sparse linear signal over model-distributed
// covariates, run the knockoff filter with m knockoff copies per replicate,
// and aggregate power / FDR per signal amplitude. Also the generic pipeline
// for user-supplied (X, y) data.

#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"

#include "cik/filter.hpp"
#include "cik/model.hpp"
#include "cik/rng.hpp"

namespace cik::experiments {

struct ExperimentConfig {
  int n = 200;
  int p = 200;
  int m = 5;               // knockoff copies per replicate
  int n_signals = 20;
  std::vector<double> amplitudes{3.0};
  double q_target = 0.1;
  ModelSpec model;
  std::uint64_t seed = 1;
  int replicates = 30;

  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

struct RunRecord {
  double u = 0.0;
  int replicate = 0;
  int knockoff_id = 0;
  double power = 0.0;
  double fdr = 0.0;
};

struct AmplitudeSummary {
  double u = 0.0;
  double mean_power = 0.0;
  double mean_fdr = 0.0;
  double se_power = 0.0;
  double se_fdr = 0.0;
  double runtime_s = 0.0;
};

struct ExperimentReport {
  std::vector<RunRecord> runs;
  std::vector<AmplitudeSummary> summary;
};

// One knockoff matrix: a conditional knockoff row per row of X.
Eigen::MatrixXd knockoff_matrix(const ModelSpec& spec, const Eigen::MatrixXd& X,
                                RandomStream& rng);

// Deterministic in (config, seed): replicates use fixed substreams and the
// aggregation order is fixed, so thread count does not change the report.
ExperimentReport run_simulation(const ExperimentConfig& config, int threads = 0);

struct DataRunReport {
  Eigen::VectorXd selection_frequency;  // per covariate, over the m knockoff draws
  std::vector<int> modal_selection;     // most frequent selection set
  std::vector<filter::WStatistics> per_knockoff;
};

DataRunReport run_on_data(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const ModelSpec& model, double q, int m, std::uint64_t seed,
                          int threads = 0);

// Thread count resolution: explicit argument, else CIK_THREADS, else 1.
int resolve_threads(int requested);

}  // namespace cik::experiments
