#pragma once

#include <vector>

#include "vanhove/types.hpp"

// Exact unitary dynamics through full diagonalization, plus the Duhamel
// expansion of the propagator in powers of the coupling. The expansion is
// integrated in the interaction picture so the free phases never limit the
// step size.

namespace vanhove {

// Eigenpairs of a Hermitian matrix, eigenvalues ascending. Satisfies
// H = U diag(w) U^dagger with unitary U.
struct SpectralFactors {
  Vec eigenvalues;    // w, ascending
  CMat eigenvectors;  // U, columns are eigenvectors
};

SpectralFactors diagonalize(const CMat& hamiltonian);

// exp(-i H t) psi0 through the spectral factors: U exp(-i w t) U^dagger psi0.
CVec evolve(const SpectralFactors& factors, const CVec& psi0, double t);

// Site populations and norm of one evolving state sampled on a time grid.
struct RelaxationTrace {
  std::vector<double> times;
  std::vector<double> p1;    // weight on site 1
  std::vector<double> p2;    // weight on site 2
  std::vector<double> norm;  // ||psi||, unit up to roundoff
};

RelaxationTrace relax(const SpectralFactors& factors, const CVec& psi0,
                      const std::vector<double>& times, int n_levels);

// Terms of psi(t) = sum_n psi_n(t) where psi_n carries exactly n powers of
// lambda V (lambda folded in). Computed by trapezoidal integration of the
// interaction-picture recursion
//   u_n(t) = -i lambda int_0^t e^{i H0 s} V e^{-i H0 s} u_{n-1}(s) ds,
// with the grid doubled until the finest order moves by less than step_tol.
struct DuhamelExpansion {
  std::vector<CVec> orders;  // orders[n] = psi_n(t), size max_order + 1
  int steps = 0;             // accepted grid size
  double step_error = 0.0;   // change of the finest order on the last doubling
};

DuhamelExpansion duhamel_expansion(const Vec& h0_diag, const CMat& v_full,
                                   double coupling, const CVec& psi0, double t,
                                   int max_order, double step_tol = 1e-6,
                                   int initial_steps = 64,
                                   int max_steps = 1 << 18);

// || psi_exact - sum_{n <= max_order} psi_n ||.
double remainder_norm(const CVec& psi_exact, const DuhamelExpansion& expansion,
                      int max_order);

}  // namespace vanhove
