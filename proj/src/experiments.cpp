#include "cik/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <thread>

#include "cik/stats.hpp"

namespace cik::experiments {

void ExperimentConfig::validate() const {
  if (n < 4) throw std::invalid_argument("ExperimentConfig: n too small");
  if (p < 1) throw std::invalid_argument("ExperimentConfig: p must be >= 1");
  if (m < 1) throw std::invalid_argument("ExperimentConfig: m must be >= 1");
  if (n_signals < 1 || n_signals > p)
    throw std::invalid_argument("ExperimentConfig: need 1 <= n_signals <= p");
  if (amplitudes.empty()) throw std::invalid_argument("ExperimentConfig: amplitudes empty");
  if (!(q_target > 0.0 && q_target < 1.0))
    throw std::invalid_argument("ExperimentConfig: q_target must be in (0,1)");
  if (replicates < 1) throw std::invalid_argument("ExperimentConfig: replicates must be >= 1");
  model.validate();
  if (model.p != p) throw std::invalid_argument("ExperimentConfig: model.p must equal p");
}

nlohmann::json to_json(const ExperimentConfig& config) {
  config.validate();
  return nlohmann::json{{"n", config.n},
                        {"p", config.p},
                        {"m", config.m},
                        {"n_signals", config.n_signals},
                        {"amplitudes", config.amplitudes},
                        {"q_target", config.q_target},
                        {"model", to_json(config.model)},
                        {"seed", config.seed},
                        {"replicates", config.replicates}};
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  static const std::vector<std::string> allowed{"n",         "p",       "m",
                                                "n_signals", "amplitudes", "q_target",
                                                "model",     "seed",    "replicates"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const auto& name : allowed) ok = ok || key == name;
    if (!ok) throw std::invalid_argument("ExperimentConfig: unknown field '" + key + "'");
  }
  for (const auto& name : allowed)
    if (!j.contains(name))
      throw std::invalid_argument("ExperimentConfig: missing field '" + name + "'");
  ExperimentConfig config;
  config.n = j.at("n").get<int>();
  config.p = j.at("p").get<int>();
  config.m = j.at("m").get<int>();
  config.n_signals = j.at("n_signals").get<int>();
  config.amplitudes = j.at("amplitudes").get<std::vector<double>>();
  config.q_target = j.at("q_target").get<double>();
  config.model = model_from_json(j.at("model"));
  config.seed = j.at("seed").get<std::uint64_t>();
  config.replicates = j.at("replicates").get<int>();
  config.validate();
  return config;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CIK_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

Eigen::MatrixXd knockoff_matrix(const ModelSpec& spec, const Eigen::MatrixXd& X,
                                RandomStream& rng) {
  if (X.cols() != spec.p) throw std::invalid_argument("knockoff_matrix: column mismatch");
  Eigen::MatrixXd Xk(X.rows(), X.cols());
  for (Eigen::Index r = 0; r < X.rows(); ++r)
    Xk.row(r) = sample_knockoff(spec, X.row(r).transpose(), rng).transpose();
  return Xk;
}

namespace {

// Uniform subset of size k out of {0, ..., p-1} (partial Fisher-Yates).
std::vector<int> draw_support(int p, int k, RandomStream& rng) {
  std::vector<int> idx(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(p - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  std::vector<int> out(idx.begin(), idx.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

struct ReplicateResult {
  std::vector<RunRecord> records;
  double mean_power = 0.0;  // over the m knockoff copies
  double mean_fdr = 0.0;
  bool has_power = false;
};

ReplicateResult run_replicate(const ExperimentConfig& config, std::size_t amplitude_index,
                              int replicate) {
  const double u = config.amplitudes[amplitude_index];
  // One substream per (amplitude, replicate); all draws inside are sequential,
  // so the result is independent of scheduling.
  RandomStream rng(config.seed,
                   (static_cast<std::uint64_t>(amplitude_index) << 32) |
                       static_cast<std::uint64_t>(replicate + 1));

  const std::vector<int> signals = draw_support(config.p, config.n_signals, rng);
  const double beta_value = u / std::sqrt(static_cast<double>(config.n));
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(config.p);
  std::vector<int> truth;
  if (u != 0.0) {
    for (int i : signals) beta[i] = beta_value;
    truth = signals;
  }

  Eigen::MatrixXd X(config.n, config.p);
  for (int r = 0; r < config.n; ++r)
    X.row(r) = sample_x(config.model, rng).transpose();
  Eigen::VectorXd y = X * beta;
  for (int r = 0; r < config.n; ++r) y[r] += rng.normal();

  ReplicateResult result;
  double sum_power = 0.0, sum_fdr = 0.0;
  for (int k = 0; k < config.m; ++k) {
    filter::RegressionData data{X, y, knockoff_matrix(config.model, X, rng)};
    const filter::WStatistics stats = filter::select(data, config.q_target, true);
    RunRecord record;
    record.u = u;
    record.replicate = replicate;
    record.knockoff_id = k;
    record.fdr = filter::fdp(stats.selected, truth);
    record.power =
        truth.empty() ? 0.0 : filter::fdr_power(stats.selected, truth).second;
    result.records.push_back(record);
    sum_power += record.power;
    sum_fdr += record.fdr;
  }
  result.mean_power = sum_power / config.m;
  result.mean_fdr = sum_fdr / config.m;
  result.has_power = !truth.empty();
  return result;
}

}  // namespace

ExperimentReport run_simulation(const ExperimentConfig& config, int threads) {
  config.validate();
  const int n_threads = resolve_threads(threads);
  ExperimentReport report;

  for (std::size_t ai = 0; ai < config.amplitudes.size(); ++ai) {
    const auto started = std::chrono::steady_clock::now();
    std::vector<ReplicateResult> results(static_cast<std::size_t>(config.replicates));

    if (n_threads <= 1) {
      for (int r = 0; r < config.replicates; ++r)
        results[static_cast<std::size_t>(r)] = run_replicate(config, ai, r);
    } else {
      std::atomic<int> next{0};
      auto worker = [&]() {
        for (;;) {
          const int r = next.fetch_add(1);
          if (r >= config.replicates) return;
          results[static_cast<std::size_t>(r)] = run_replicate(config, ai, r);
        }
      };
      std::vector<std::thread> pool;
      for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }

    // fixed-order aggregation
    std::vector<double> powers, fdrs;
    for (int r = 0; r < config.replicates; ++r) {
      const ReplicateResult& res = results[static_cast<std::size_t>(r)];
      report.runs.insert(report.runs.end(), res.records.begin(), res.records.end());
      fdrs.push_back(res.mean_fdr);
      if (res.has_power) powers.push_back(res.mean_power);
    }
    AmplitudeSummary summary;
    summary.u = config.amplitudes[ai];
    summary.mean_fdr = mean(fdrs);
    summary.se_fdr = fdrs.size() > 1 ? std::sqrt(variance(fdrs) / fdrs.size()) : 0.0;
    summary.mean_power = powers.empty() ? 0.0 : mean(powers);
    summary.se_power =
        powers.size() > 1 ? std::sqrt(variance(powers) / powers.size()) : 0.0;
    summary.runtime_s = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - started)
                            .count();
    report.summary.push_back(summary);
  }
  return report;
}

DataRunReport run_on_data(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const ModelSpec& model, double q, int m, std::uint64_t seed,
                          int threads) {
  model.validate();
  if (X.cols() != model.p)
    throw std::invalid_argument("run_on_data: data has " + std::to_string(X.cols()) +
                                " columns but the model has p = " + std::to_string(model.p));
  if (X.rows() != y.size()) throw std::invalid_argument("run_on_data: X/y row mismatch");
  if (m < 1) throw std::invalid_argument("run_on_data: m must be >= 1");
  const int n_threads = resolve_threads(threads);

  DataRunReport report;
  report.per_knockoff.resize(static_cast<std::size_t>(m));
  auto run_one = [&](int k) {
    RandomStream rng(seed, static_cast<std::uint64_t>(k + 1));
    filter::RegressionData data{X, y, knockoff_matrix(model, X, rng)};
    report.per_knockoff[static_cast<std::size_t>(k)] = filter::select(data, q, true);
  };
  if (n_threads <= 1) {
    for (int k = 0; k < m; ++k) run_one(k);
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int k = next.fetch_add(1);
        if (k >= m) return;
        run_one(k);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  report.selection_frequency = Eigen::VectorXd::Zero(X.cols());
  std::map<std::vector<int>, int> set_counts;
  for (const auto& stats : report.per_knockoff) {
    for (int i : stats.selected) report.selection_frequency[i] += 1.0;
    ++set_counts[stats.selected];
  }
  report.selection_frequency /= static_cast<double>(m);
  int best = 0;
  for (const auto& [sel, count] : set_counts)
    if (count > best) {
      best = count;
      report.modal_selection = sel;
    }
  return report;
}

}  // namespace cik::experiments
