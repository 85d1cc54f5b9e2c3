#include "cik/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace cik {

double mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean: empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  if (v.size() < 2) throw std::invalid_argument("variance: need at least 2 points");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double covariance(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("covariance: size mismatch or too few points");
  const double mx = mean(x), my = mean(y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
  return s / static_cast<double>(x.size() - 1);
}

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
  const double c = covariance(x, y);
  const double sx = std::sqrt(variance(x));
  const double sy = std::sqrt(variance(y));
  if (sx == 0.0 || sy == 0.0) throw std::invalid_argument("correlation: degenerate sample");
  return c / (sx * sy);
}

double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("two_sample_ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double one_sample_ks(std::vector<double> a, const std::function<double(double)>& cdf) {
  if (a.empty()) throw std::invalid_argument("one_sample_ks: empty sample");
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = cdf(a[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

namespace {

// Energy statistic T = nm/(n+m) * (2*E|X-Y| - E|X-X'| - E|Y-Y'|), V-statistic
// convention with zero diagonals.

// Mean pairwise sums for a labeling of an already sorted pool. labels[k] is
// 0 or 1 for the value at sorted position k.
double energy_1d_from_sorted(const std::vector<double>& sorted,
                             const std::vector<std::uint8_t>& labels, std::size_t n,
                             std::size_t m) {
  double sum_x = 0.0, sum_y = 0.0;   // running sums of values seen so far
  double cnt_x = 0.0, cnt_y = 0.0;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;  // sums of |v_i - v_j| over i<j by pair type
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const double v = sorted[k];
    if (labels[k] == 0) {
      sxx += cnt_x * v - sum_x;
      sxy += cnt_y * v - sum_y;
      cnt_x += 1.0;
      sum_x += v;
    } else {
      syy += cnt_y * v - sum_y;
      sxy += cnt_x * v - sum_x;
      cnt_y += 1.0;
      sum_y += v;
    }
  }
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  const double a = sxy / (dn * dm);
  const double b = 2.0 * sxx / (dn * dn);
  const double c = 2.0 * syy / (dm * dm);
  return dn * dm / (dn + dm) * (2.0 * a - b - c);
}

void shuffle_labels(std::vector<std::uint8_t>& labels, RandomStream& rng) {
  for (std::size_t k = labels.size(); k > 1; --k) {
    const std::size_t j = static_cast<std::size_t>(rng.uniform_index(k));
    std::swap(labels[k - 1], labels[j]);
  }
}

}  // namespace

EnergyTestResult energy_test_1d(const std::vector<double>& x, const std::vector<double>& y,
                                int n_perms, RandomStream& rng) {
  if (x.size() < 2 || y.size() < 2)
    throw std::invalid_argument("energy_test_1d: need at least 2 points per group");
  const std::size_t n = x.size(), m = y.size();
  std::vector<std::pair<double, std::uint8_t>> pool;
  pool.reserve(n + m);
  for (double v : x) pool.emplace_back(v, 0);
  for (double v : y) pool.emplace_back(v, 1);
  std::sort(pool.begin(), pool.end());
  std::vector<double> sorted(pool.size());
  std::vector<std::uint8_t> labels(pool.size());
  for (std::size_t k = 0; k < pool.size(); ++k) {
    sorted[k] = pool[k].first;
    labels[k] = pool[k].second;
  }

  EnergyTestResult res;
  res.statistic = energy_1d_from_sorted(sorted, labels, n, m);
  res.permutations = n_perms;
  int exceed = 0;
  for (int b = 0; b < n_perms; ++b) {
    shuffle_labels(labels, rng);
    if (energy_1d_from_sorted(sorted, labels, n, m) >= res.statistic) ++exceed;
  }
  res.p_value = (1.0 + exceed) / (1.0 + n_perms);
  return res;
}

namespace {

double energy_from_dist(const std::vector<float>& dist, const std::vector<std::uint8_t>& labels,
                        std::size_t total, std::size_t n, std::size_t m) {
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    const std::uint8_t li = labels[i];
    const float* row = dist.data() + i * total;
    for (std::size_t j = i + 1; j < total; ++j) {
      const double d = row[j];
      if (li == labels[j]) {
        if (li == 0) sxx += d; else syy += d;
      } else {
        sxy += d;
      }
    }
  }
  const double dn = static_cast<double>(n), dm = static_cast<double>(m);
  const double a = sxy / (dn * dm);
  const double b = 2.0 * sxx / (dn * dn);
  const double c = 2.0 * syy / (dm * dm);
  return dn * dm / (dn + dm) * (2.0 * a - b - c);
}

std::vector<Eigen::VectorXd> stride_subsample(const std::vector<Eigen::VectorXd>& v,
                                              std::size_t cap) {
  if (v.size() <= cap) return v;
  std::vector<Eigen::VectorXd> out;
  out.reserve(cap);
  const double stride = static_cast<double>(v.size()) / static_cast<double>(cap);
  for (std::size_t k = 0; k < cap; ++k)
    out.push_back(v[static_cast<std::size_t>(k * stride)]);
  return out;
}

}  // namespace

EnergyTestResult energy_test(const std::vector<Eigen::VectorXd>& x,
                             const std::vector<Eigen::VectorXd>& y, int n_perms,
                             RandomStream& rng, std::size_t max_per_group) {
  if (x.size() < 2 || y.size() < 2)
    throw std::invalid_argument("energy_test: need at least 2 points per group");
  const std::vector<Eigen::VectorXd> xs = stride_subsample(x, max_per_group);
  const std::vector<Eigen::VectorXd> ys = stride_subsample(y, max_per_group);
  const std::size_t n = xs.size(), m = ys.size(), total = n + m;

  std::vector<float> dist(total * total, 0.0f);
  auto point = [&](std::size_t k) -> const Eigen::VectorXd& {
    return k < n ? xs[k] : ys[k - n];
  };
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = i + 1; j < total; ++j) {
      const float d = static_cast<float>((point(i) - point(j)).norm());
      dist[i * total + j] = d;
      dist[j * total + i] = d;
    }

  std::vector<std::uint8_t> labels(total, 0);
  for (std::size_t k = n; k < total; ++k) labels[k] = 1;

  EnergyTestResult res;
  res.statistic = energy_from_dist(dist, labels, total, n, m);
  res.permutations = n_perms;
  int exceed = 0;
  for (int b = 0; b < n_perms; ++b) {
    shuffle_labels(labels, rng);
    if (energy_from_dist(dist, labels, total, n, m) >= res.statistic) ++exceed;
  }
  res.p_value = (1.0 + exceed) / (1.0 + n_perms);
  return res;
}

}  // namespace cik
