#pragma once

#include <vector>

#include "vanhove/types.hpp"

// Effective description in the scaled time T = lambda^2 t: the band resolvent
// Theta that carries the golden-rule rate, the closed-form two-site solution,
// its series (Poisson) form, and the rate equation integrated numerically.

namespace vanhove {

struct Populations {
  double p1 = 0.0;
  double p2 = 0.0;
};

// Band resolvent at real regulator: integral over the band (0,1) of
// -1/(omega - alpha - i eta), in closed form log(-z) - log(1-z), z = alpha+i eta.
Complex theta_reg(double alpha, double eta);

// eta -> 0+ limit on the open band: log(omega/(1-omega)) - i pi. The sign of
// the imaginary part follows the integral itself (approach from below the
// cut), which is what makes i(Theta - conj Theta) come out +2 pi.
Complex theta(double omega);

// The golden-rule combination i(Theta - conj Theta); equals 2 pi on the band.
double theta_jump(double omega);

// P1/P2 at scaled time T from initial populations p0:
// mean + (imbalance/2) exp(-rate T), rate defaults to 4 pi.
Populations closed_form(double T, Populations p0, double rate = 4.0 * kPi);

// Series form: sum over nbar of exp(-2 pi T) (2 pi T)^nbar / nbar! with the
// populations swapping at each odd order. Converges to closed_form.
Populations poisson_resum(double T, Populations p0, int nbar_max = 60);

// Fixed-step RK4 for dp1/dT = -coeff (p1 - p2), dp2/dT = -coeff (p2 - p1),
// evaluated at the given (ascending, from 0) grid. Each grid gap is cut into
// equal steps no longer than max_step. The imbalance then decays at 2*coeff,
// so coeff = 2 pi reproduces closed_form's 4 pi law.
std::vector<Populations> rate_ode(Populations p0, const std::vector<double>& T_grid,
                                  double coeff = 2.0 * kPi, double max_step = 1e-4);

}  // namespace vanhove
