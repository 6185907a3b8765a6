#include "vanhove/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <vector>

#include "vanhove/propagator.hpp"
#include "vanhove/rng.hpp"

namespace vanhove {

namespace {

void validate(const EnsembleConfig& cfg) {
  if (cfg.members < 1) {
    throw std::invalid_argument("run_ensemble: members must be >= 1");
  }
  if (cfg.threads < 1) {
    throw std::invalid_argument("run_ensemble: threads must be >= 1");
  }
  if (cfg.times.empty()) {
    throw std::invalid_argument("run_ensemble: times must be non-empty");
  }
  if (cfg.times.front() < 0.0) {
    throw std::invalid_argument("run_ensemble: times must be >= 0");
  }
  for (std::size_t i = 1; i < cfg.times.size(); ++i) {
    if (cfg.times[i] <= cfg.times[i - 1]) {
      throw std::invalid_argument("run_ensemble: times must be strictly ascending");
    }
  }
}

// Sample mean and standard error down the columns of a members x times block.
void column_stats(const Mat& block, std::vector<double>& mean,
                  std::vector<double>& stderr_out) {
  const auto members = block.rows();
  const auto points = block.cols();
  mean.resize(points);
  stderr_out.assign(points, 0.0);
  for (Eigen::Index j = 0; j < points; ++j) {
    mean[j] = block.col(j).mean();
    if (members > 1) {
      const double ss = (block.col(j).array() - mean[j]).square().sum();
      stderr_out[j] = std::sqrt(ss / (members - 1)) / std::sqrt(double(members));
    }
  }
}

}  // namespace

EnsembleResult run_ensemble(const EnsembleConfig& cfg) {
  validate(cfg);
  const auto points = static_cast<Eigen::Index>(cfg.times.size());
  const CVec psi0 =
      make_initial_state(cfg.model, cfg.site, cfg.band_lo, cfg.band_hi);
  const CMat h0 = build_h0(cfg.model);

  Mat p1(cfg.members, points), p2(cfg.members, points), norm(cfg.members, points);
  const auto member_job = [&](int i) {
    const auto v = sample_interaction(cfg.model, member_seed(cfg.master_seed, i));
    const CMat h = assemble_hamiltonian(h0, v, cfg.model.coupling);
    const auto trace = relax(diagonalize(h), psi0, cfg.times, cfg.model.n_levels);
    for (Eigen::Index j = 0; j < points; ++j) {
      p1(i, j) = trace.p1[j];
      p2(i, j) = trace.p2[j];
      norm(i, j) = trace.norm[j];
    }
  };

  const int workers = std::min(cfg.threads, cfg.members);
  if (workers == 1) {
    for (int i = 0; i < cfg.members; ++i) member_job(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int i = w; i < cfg.members; i += workers) member_job(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  EnsembleResult out;
  out.stats.times = cfg.times;
  out.stats.scaled_times.resize(cfg.times.size());
  const double scale = cfg.model.coupling * cfg.model.coupling;
  std::transform(cfg.times.begin(), cfg.times.end(),
                 out.stats.scaled_times.begin(),
                 [scale](double t) { return scale * t; });
  column_stats(p1, out.stats.p1_mean, out.stats.p1_stderr);
  column_stats(p2, out.stats.p2_mean, out.stats.p2_stderr);
  std::vector<double> norm_stderr;
  column_stats(norm, out.stats.norm_mean, norm_stderr);
  out.member_p1 = std::move(p1);
  return out;
}

namespace {

struct WindowedSeries {
  std::vector<double> x;      // T
  std::vector<double> y;      // log D
  std::vector<double> sigma;  // sigma of log D, 0 when unknown
};

WindowedSeries window_log_imbalance(const EnsembleStats& stats,
                                    double window_lo, double window_hi) {
  if (!(window_lo < window_hi)) {
    throw std::invalid_argument("fit_rate: window_lo must be < window_hi");
  }
  WindowedSeries s;
  for (std::size_t j = 0; j < stats.scaled_times.size(); ++j) {
    const double T = stats.scaled_times[j];
    if (T < window_lo || T > window_hi) continue;
    const double d = stats.p1_mean[j] - stats.p2_mean[j];
    if (d <= 0.0) {
      throw std::runtime_error(
          "fit_rate: imbalance is not positive inside the fit window");
    }
    s.x.push_back(T);
    s.y.push_back(std::log(d));
    s.sigma.push_back(2.0 * stats.p1_stderr[j] / d);
  }
  if (s.x.size() < 4) {
    throw std::runtime_error("fit_rate: fewer than 4 grid points in the window");
  }
  return s;
}

}  // namespace

RateFit fit_rate(const EnsembleStats& stats, double window_lo,
                 double window_hi) {
  const auto s = window_log_imbalance(stats, window_lo, window_hi);
  const std::size_t n = s.x.size();

  const double sigma_floor =
      *std::min_element(s.sigma.begin(), s.sigma.end());
  const bool known_sigma = sigma_floor > 0.0;

  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = known_sigma ? 1.0 / (s.sigma[i] * s.sigma[i]) : 1.0;
    sw += w;
    sx += w * s.x[i];
    sy += w * s.y[i];
    sxx += w * s.x[i] * s.x[i];
    sxy += w * s.x[i] * s.y[i];
  }
  const double det = sw * sxx - sx * sx;
  if (det <= 0.0) {
    throw std::runtime_error("fit_rate: degenerate fit window");
  }
  const double slope = (sw * sxy - sx * sy) / det;
  const double intercept = (sxx * sy - sx * sxy) / det;

  double var_slope = sw / det;
  if (!known_sigma) {
    double ss_res_w = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = s.y[i] - (intercept + slope * s.x[i]);
      ss_res_w += r * r;
    }
    var_slope *= ss_res_w / double(n - 2);
  }

  double ss_res = 0.0, ss_tot = 0.0;
  const double y_bar =
      std::accumulate(s.y.begin(), s.y.end(), 0.0) / double(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = s.y[i] - (intercept + slope * s.x[i]);
    ss_res += r * r;
    ss_tot += (s.y[i] - y_bar) * (s.y[i] - y_bar);
  }

  RateFit fit;
  fit.rate = -slope;
  fit.rate_stderr = std::sqrt(var_slope);
  fit.intercept = intercept;
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.points_used = static_cast<int>(n);

  // Last fifth of the grid by point count; a time threshold would let the
  // boundary point flip on last-ulp differences in the scaled times.
  const std::size_t n_points = stats.scaled_times.size();
  const std::size_t tail_count = (n_points + 4) / 5;
  double tail_sum = 0.0;
  for (std::size_t j = n_points - tail_count; j < n_points; ++j) {
    tail_sum += stats.p1_mean[j];
  }
  fit.equilibrium_p1 = tail_sum / double(tail_count);
  return fit;
}

double jackknife_rate_stderr(const EnsembleResult& result, double window_lo,
                             double window_hi) {
  const auto members = result.member_p1.rows();
  const auto points = result.member_p1.cols();
  if (members < 2) {
    throw std::invalid_argument(
        "jackknife_rate_stderr: needs at least 2 members");
  }
  // Leave-one-out refits. Per-member norm conservation pins p2 = 1 - p1.
  std::vector<double> rates;
  rates.reserve(members);
  const Vec col_sums = result.member_p1.colwise().sum();
  for (Eigen::Index i = 0; i < members; ++i) {
    EnsembleStats loo;
    loo.times = result.stats.times;
    loo.scaled_times = result.stats.scaled_times;
    loo.p1_mean.resize(points);
    loo.p1_stderr.resize(points);
    loo.p2_mean.resize(points);
    loo.p2_stderr.resize(points);
    for (Eigen::Index j = 0; j < points; ++j) {
      const double mean = (col_sums(j) - result.member_p1(i, j)) / (members - 1);
      double ss = 0.0;
      for (Eigen::Index k = 0; k < members; ++k) {
        if (k == i) continue;
        const double d = result.member_p1(k, j) - mean;
        ss += d * d;
      }
      loo.p1_mean[j] = mean;
      loo.p1_stderr[j] = members > 2
                             ? std::sqrt(ss / (members - 2)) /
                                   std::sqrt(double(members - 1))
                             : 0.0;
      loo.p2_mean[j] = 1.0 - mean;
      loo.p2_stderr[j] = loo.p1_stderr[j];
    }
    rates.push_back(fit_rate(loo, window_lo, window_hi).rate);
  }
  const double mean_rate =
      std::accumulate(rates.begin(), rates.end(), 0.0) / double(members);
  double ss = 0.0;
  for (double r : rates) ss += (r - mean_rate) * (r - mean_rate);
  return std::sqrt(ss * double(members - 1) / double(members));
}

std::vector<SweepRow> vanhove_sweep(const ModelConfig& base,
                                    const std::vector<double>& couplings,
                                    int members,
                                    const std::vector<double>& scaled_grid,
                                    std::uint64_t master_seed, int threads,
                                    double window_lo, double window_hi) {
  if (couplings.empty()) {
    throw std::invalid_argument("vanhove_sweep: couplings must be non-empty");
  }
  std::vector<SweepRow> rows;
  rows.reserve(couplings.size());
  for (double lambda : couplings) {
    if (lambda <= 0.0) {
      throw std::invalid_argument("vanhove_sweep: couplings must be > 0");
    }
    EnsembleConfig cfg;
    cfg.model = base;
    cfg.model.coupling = lambda;
    cfg.members = members;
    cfg.master_seed = master_seed;
    cfg.threads = threads;
    cfg.times.resize(scaled_grid.size());
    const double inv = 1.0 / (lambda * lambda);
    std::transform(scaled_grid.begin(), scaled_grid.end(), cfg.times.begin(),
                   [inv](double T) { return T * inv; });
    const auto result = run_ensemble(cfg);
    const auto fit = fit_rate(result.stats, window_lo, window_hi);
    SweepRow row;
    row.n_levels = base.n_levels;
    row.coupling = lambda;
    row.members = members;
    row.rate = fit.rate;
    row.rate_stderr = jackknife_rate_stderr(result, window_lo, window_hi);
    row.equilibrium_p1 = fit.equilibrium_p1;
    row.r_squared = fit.r_squared;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace vanhove
