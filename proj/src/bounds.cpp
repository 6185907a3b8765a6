#include "vanhove/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>

#include "vanhove/effective.hpp"
#include "vanhove/quadrature.hpp"
#include "vanhove/types.hpp"

namespace vanhove {

namespace {

// Shared half-width of the real-line truncation in the multi-pole integrals.
constexpr double kDomainHalfWidth = 4.0;

// Adaptive quadrature that is pre-split around each pole so the error
// estimator sees the eta-wide layers instead of stepping over them.
template <typename F>
double integrate_with_peaks(F&& f, double a, double b,
                            const std::vector<double>& centers, double eta,
                            double rel_tol = 1e-7) {
  std::vector<double> cuts{a, b};
  for (double c : centers) {
    for (double p : {c - 5.0 * eta, c, c + 5.0 * eta}) {
      if (p > a && p < b) cuts.push_back(p);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto piece = integrate(f, cuts[i], cuts[i + 1], rel_tol);
    if (!piece.converged) {
      throw std::runtime_error("bounds: quadrature failed to converge");
    }
    total += piece.value;
  }
  return total;
}

double clamp_to(double v, double lo, double hi) {
  return std::min(hi, std::max(lo, v));
}

}  // namespace

const char* inequality_name(Inequality inequality) {
  switch (inequality) {
    case Inequality::kPower: return "POWER";
    case Inequality::kProduct: return "PRODUCT";
    case Inequality::kOneMinusA: return "ONE_MINUS_A";
    case Inequality::kAbLog: return "AB_LOG";
    case Inequality::kAbDelta: return "AB_DELTA";
    case Inequality::kFourK: return "FOUR_K";
    case Inequality::kThetaLipschitz: return "THETA_LIPSCHITZ";
  }
  return "UNKNOWN";
}

double check_power_bound(int k, double alpha, double eta) {
  if (k < 2) throw std::invalid_argument("check_power_bound: k must be >= 2");
  if (eta <= 0.0) throw std::invalid_argument("check_power_bound: eta must be > 0");
  // The integrand (-1/(w - z))^k has the elementary antiderivative
  // (-1)^k (w - z)^{1-k} / (1 - k), analytic along the contour since
  // Im(w - z) = -eta never touches the branch cut.  Evaluating it at the
  // endpoints is exact for every k; quadrature of the signed real and
  // imaginary parts instead loses up to (5 eta)^{1-k} to cancellation
  // between pole-adjacent panels.
  const Complex z(alpha, eta);
  const double lhs =
      std::abs(std::pow(1.0 - z, 1.0 - k) - std::pow(-z, 1.0 - k)) / (k - 1);
  const double rhs = std::pow(std::hypot(1.0 - alpha, eta), 1 - k) +
                     std::pow(std::hypot(alpha, eta), 1 - k);
  return lhs / rhs;
}

double check_product_bound(int k, int p, double alpha, double beta,
                           double eta) {
  if (k < 1 || p < 1 || k + p < 2) {
    throw std::invalid_argument("check_product_bound: need k, p >= 1");
  }
  if (eta <= 0.0) throw std::invalid_argument("check_product_bound: eta must be > 0");
  const double lhs = integrate_with_peaks(
      [&](double w) {
        return std::pow(std::hypot(w - alpha, eta), -k) *
               std::pow(std::hypot(w - beta, eta), -p);
      },
      0.0, 1.0, {alpha, beta}, eta);
  const double rhs = kPi * std::pow(eta, 1 - k - p);
  return lhs / rhs;
}

double check_one_minus_a(double delta, double alpha, double eta,
                         double domain) {
  if (delta <= 1.0) {
    throw std::invalid_argument("check_one_minus_a: delta must be > 1");
  }
  if (eta <= 0.0) throw std::invalid_argument("check_one_minus_a: eta must be > 0");
  const double lhs = integrate_with_peaks(
      [&](double w) { return std::pow(std::hypot(w - alpha, eta), -delta); },
      -domain, domain, {alpha}, eta);
  // Full-line value of the same integral.
  const double c_delta = std::sqrt(kPi) * std::tgamma((delta - 1.0) / 2.0) /
                         std::tgamma(delta / 2.0);
  const double rhs = c_delta * std::pow(eta, 1.0 - delta);
  return lhs / rhs;
}

LogBoundRatios check_log_bounds(double x, double y, double eta,
                                double domain) {
  if (eta <= 0.0 || eta >= 1.0) {
    throw std::invalid_argument("check_log_bounds: eta must be in (0, 1)");
  }
  if (std::abs(x) > domain || std::abs(y) > domain) {
    throw std::invalid_argument("check_log_bounds: poles must sit inside the domain");
  }
  const std::vector<double> centers{x, y};
  const double separation = std::hypot(x - y, eta);

  const double lhs_log = integrate_with_peaks(
      [&](double a) {
        return 1.0 / (std::hypot(a - x, eta) * std::hypot(a - y, eta));
      },
      -domain, domain, centers, eta);

  constexpr double delta = 0.75;
  const double lhs_delta = integrate_with_peaks(
      [&](double a) {
        return std::pow(std::hypot(a - x, eta) * std::hypot(a - y, eta),
                        -delta);
      },
      -domain, domain, centers, eta);

  LogBoundRatios out;
  out.log_ratio =
      lhs_log * separation / (kAbLogConstant * std::abs(std::log(eta)));
  out.delta_ratio = lhs_delta * std::pow(separation, delta) / kAbDeltaConstant;
  return out;
}

double check_four_propagator(double x, int k, double eta, int nodes) {
  if (k < 1) throw std::invalid_argument("check_four_propagator: k must be >= 1");
  if (eta <= 0.0 || eta > 0.2) {
    throw std::invalid_argument("check_four_propagator: eta must be in (0, 0.2]");
  }
  const double C = kDomainHalfWidth;
  const auto band_overlap = [&](double alpha, double beta) {
    return integrate_peaked(
        [&](double w) {
          return 1.0 / (std::hypot(w - alpha, eta) * std::hypot(w - beta, eta));
        },
        0.0, 1.0, {clamp_to(alpha, 0.0, 1.0), clamp_to(beta, 0.0, 1.0)}, eta,
        nodes);
  };
  const auto overlap_energy = [&](double alpha) {
    return integrate_peaked(
        [&](double beta) {
          const double g = band_overlap(alpha, beta);
          return g * g;
        },
        -C, C, {alpha, 0.0, 1.0}, eta, nodes);
  };
  const double lhs = integrate_peaked(
      [&](double alpha) {
        return std::pow(std::hypot(x - alpha, eta), -k) *
               overlap_energy(alpha);
      },
      -C, C, {x, 0.0, 1.0}, eta, nodes);
  const double log_eta = std::log(eta);
  const double rhs =
      kFourKConstant * log_eta * log_eta * std::pow(eta, -k);
  return lhs / rhs;
}

double check_theta_lipschitz(double alpha, double omega, double eta) {
  const double lhs = std::abs(theta_reg(alpha, eta) - theta(omega));
  const double rhs = std::hypot(omega - alpha, eta) *
                     (1.0 / std::hypot(1.0 - alpha, eta) +
                      1.0 / std::abs(1.0 - omega) +
                      1.0 / std::hypot(alpha, eta) + 1.0 / std::abs(omega));
  return lhs / rhs;
}

namespace {

struct SweepAccumulator {
  Inequality inequality;
  double constant;
  std::vector<double> ratios;
};

// Deterministic tuple tables drawn up front; evaluation order never matters.
void run_striped(int threads, int jobs, const std::function<void(int)>& job) {
  const int workers = std::max(1, std::min(threads, jobs));
  if (workers == 1) {
    for (int i = 0; i < jobs; ++i) job(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < jobs; i += workers) job(i);
    });
  }
  for (auto& th : pool) th.join();
}

double log_uniform(std::mt19937_64& gen, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(gen));
}

// Pins every 8th sample's eta to a range end: the extremes drive the ratios.
double pin_eta(int i, double eta, double lo, double hi) {
  if (i % 8 == 0) return hi;
  if (i % 8 == 4) return lo;
  return eta;
}

}  // namespace

std::vector<BoundCheckReport> sweep_bounds(int samples, std::uint64_t seed,
                                           int threads) {
  if (samples < 1) {
    throw std::invalid_argument("sweep_bounds: samples must be >= 1");
  }
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> pole(-2.0, 3.0);
  std::uniform_real_distribution<double> band(0.01, 0.99);
  std::uniform_real_distribution<double> exponent(1.2, 2.5);
  std::uniform_int_distribution<int> power_k(2, 5);
  std::uniform_int_distribution<int> product_k(1, 4);

  struct PowerSample { int k; double alpha, eta; };
  struct ProductSample { int k, p; double alpha, beta, eta; };
  struct OneMinusASample { double delta, alpha, eta; };
  struct PairSample { double x, y, eta; };
  struct FourKSample { double x; int k; double eta; };
  struct ThetaSample { double alpha, omega, eta; };

  std::vector<PowerSample> power(samples);
  std::vector<ProductSample> product(samples);
  std::vector<OneMinusASample> one_minus_a(samples);
  std::vector<PairSample> pair(samples);
  std::vector<FourKSample> four_k(samples);
  std::vector<ThetaSample> theta_s(samples);
  for (int i = 0; i < samples; ++i) {
    power[i] = {power_k(gen), pole(gen),
                pin_eta(i, log_uniform(gen, 1e-3, 1.0), 1e-3, 1.0)};
    const int pk = product_k(gen);
    std::uniform_int_distribution<int> product_p(1, 5 - pk);
    product[i] = {pk, product_p(gen), pole(gen), pole(gen),
                  pin_eta(i, log_uniform(gen, 1e-3, 0.5), 1e-3, 0.5)};
    if (i % 16 == 8) product[i].beta = product[i].alpha;  // coincident poles
    one_minus_a[i] = {exponent(gen), pole(gen),
                      pin_eta(i, log_uniform(gen, 1e-3, 0.5), 1e-3, 0.5)};
    pair[i] = {pole(gen), pole(gen),
               pin_eta(i, log_uniform(gen, 1e-3, 0.5), 1e-3, 0.5)};
    if (i % 16 == 0) pair[i].y = pair[i].x;  // coincident-pole corner
    four_k[i] = {pole(gen), 1 + i % 3,
                 pin_eta(i, log_uniform(gen, 1e-3, 0.2), 1e-3, 0.2)};
    theta_s[i] = {pole(gen), band(gen),
                  pin_eta(i, log_uniform(gen, 1e-3, 0.5), 1e-3, 0.5)};
    if (i % 16 == 0) theta_s[i].alpha = theta_s[i].omega;
  }

  std::vector<SweepAccumulator> acc;
  acc.push_back({Inequality::kPower, 1.0, std::vector<double>(samples)});
  acc.push_back({Inequality::kProduct, kPi, std::vector<double>(samples)});
  acc.push_back({Inequality::kOneMinusA, 1.0, std::vector<double>(samples)});
  acc.push_back({Inequality::kAbLog, kAbLogConstant, std::vector<double>(samples)});
  acc.push_back({Inequality::kAbDelta, kAbDeltaConstant, std::vector<double>(samples)});
  acc.push_back({Inequality::kFourK, kFourKConstant, std::vector<double>(samples)});
  acc.push_back({Inequality::kThetaLipschitz, 1.0, std::vector<double>(samples)});

  run_striped(threads, samples, [&](int i) {
    acc[0].ratios[i] = check_power_bound(power[i].k, power[i].alpha, power[i].eta);
    acc[1].ratios[i] = check_product_bound(product[i].k, product[i].p,
                                           product[i].alpha, product[i].beta,
                                           product[i].eta);
    acc[2].ratios[i] =
        check_one_minus_a(one_minus_a[i].delta, one_minus_a[i].alpha,
                          one_minus_a[i].eta, kDomainHalfWidth);
    const auto log_pair =
        check_log_bounds(pair[i].x, pair[i].y, pair[i].eta, kDomainHalfWidth);
    acc[3].ratios[i] = log_pair.log_ratio;
    acc[4].ratios[i] = log_pair.delta_ratio;
    acc[5].ratios[i] =
        check_four_propagator(four_k[i].x, four_k[i].k, four_k[i].eta);
    acc[6].ratios[i] = check_theta_lipschitz(theta_s[i].alpha,
                                             theta_s[i].omega, theta_s[i].eta);
  });

  std::vector<BoundCheckReport> reports;
  reports.reserve(acc.size());
  for (const auto& a : acc) {
    BoundCheckReport r;
    r.inequality = a.inequality;
    r.samples = samples;
    r.constant = a.constant;
    r.max_ratio = *std::max_element(a.ratios.begin(), a.ratios.end());
    r.violations = static_cast<int>(
        std::count_if(a.ratios.begin(), a.ratios.end(),
                      [](double v) { return v > 1.0 + kRatioTolerance; }));
    reports.push_back(r);
  }
  return reports;
}

}  // namespace vanhove
