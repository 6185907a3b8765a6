#include "vanhove/effective.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace vanhove {

Complex theta_reg(double alpha, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("theta_reg: eta must be positive");
  const Complex z(alpha, eta);
  // antiderivative of -1/(omega - z) evaluated across the band; the path
  // stays below the log cut for eta > 0, so principal branches are safe
  return std::log(-z) - std::log(1.0 - z);
}

Complex theta(double omega) {
  if (!(omega > 0.0 && omega < 1.0))
    throw std::invalid_argument("theta: omega must lie inside the open band (0,1)");
  return Complex(std::log(omega / (1.0 - omega)), -kPi);
}

double theta_jump(double omega) {
  const Complex th = theta(omega);
  const Complex jump = Complex(0.0, 1.0) * (th - std::conj(th));
  return jump.real();
}

Populations closed_form(double T, Populations p0, double rate) {
  if (T < 0.0) throw std::invalid_argument("closed_form: T must be >= 0");
  const double mean = 0.5 * (p0.p1 + p0.p2);
  const double half_gap = 0.5 * (p0.p1 - p0.p2) * std::exp(-rate * T);
  return {mean + half_gap, mean - half_gap};
}

Populations poisson_resum(double T, Populations p0, int nbar_max) {
  if (T < 0.0) throw std::invalid_argument("poisson_resum: T must be >= 0");
  if (nbar_max < 0) throw std::invalid_argument("poisson_resum: nbar_max must be >= 0");
  const double x = 2.0 * kPi * T;
  double term = std::exp(-x);  // nbar = 0
  Populations acc;
  for (int nbar = 0; nbar <= nbar_max; ++nbar) {
    if (nbar > 0) term *= x / nbar;
    // even orders keep the initial site assignment, odd orders swap it
    if (nbar % 2 == 0) {
      acc.p1 += term * p0.p1;
      acc.p2 += term * p0.p2;
    } else {
      acc.p1 += term * p0.p2;
      acc.p2 += term * p0.p1;
    }
  }
  return acc;
}

std::vector<Populations> rate_ode(Populations p0, const std::vector<double>& T_grid,
                                  double coeff, double max_step) {
  if (!(max_step > 0.0)) throw std::invalid_argument("rate_ode: max_step must be positive");
  if (!T_grid.empty() && T_grid.front() < 0.0)
    throw std::invalid_argument("rate_ode: grid must start at T >= 0");
  for (std::size_t i = 1; i < T_grid.size(); ++i)
    if (T_grid[i] < T_grid[i - 1])
      throw std::invalid_argument("rate_ode: grid must be ascending");

  auto deriv = [coeff](const Populations& p) {
    const double flow = coeff * (p.p1 - p.p2);
    return Populations{-flow, flow};
  };
  auto axpy = [](const Populations& p, double h, const Populations& d) {
    return Populations{p.p1 + h * d.p1, p.p2 + h * d.p2};
  };

  std::vector<Populations> out;
  out.reserve(T_grid.size());
  Populations state = p0;
  double T = 0.0;
  for (double target : T_grid) {
    const double gap = target - T;
    if (gap > 0.0) {
      const int steps = static_cast<int>(std::ceil(gap / max_step));
      const double h = gap / steps;
      for (int s = 0; s < steps; ++s) {
        const Populations k1 = deriv(state);
        const Populations k2 = deriv(axpy(state, 0.5 * h, k1));
        const Populations k3 = deriv(axpy(state, 0.5 * h, k2));
        const Populations k4 = deriv(axpy(state, h, k3));
        state.p1 += h / 6.0 * (k1.p1 + 2.0 * k2.p1 + 2.0 * k3.p1 + k4.p1);
        state.p2 += h / 6.0 * (k1.p2 + 2.0 * k2.p2 + 2.0 * k3.p2 + k4.p2);
      }
      T = target;
    }
    out.push_back(state);
  }
  return out;
}

}  // namespace vanhove
