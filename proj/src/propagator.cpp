#include "vanhove/propagator.hpp"

#include <cmath>
#include <stdexcept>

#include "vanhove/model.hpp"

#ifdef VANHOVE_USE_LAPACKE
#include <lapacke.h>
#endif

namespace vanhove {

SpectralFactors diagonalize(const CMat& hamiltonian) {
  if (hamiltonian.rows() != hamiltonian.cols() || hamiltonian.rows() == 0) {
    throw std::invalid_argument("diagonalize: matrix must be square and non-empty");
  }
  SpectralFactors f;
#ifdef VANHOVE_USE_LAPACKE
  const lapack_int dim = static_cast<lapack_int>(hamiltonian.rows());
  f.eigenvectors = hamiltonian;  // zheevd overwrites with eigenvectors
  f.eigenvalues.resize(dim);
  const lapack_int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, 'V', 'L', dim,
      reinterpret_cast<lapack_complex_double*>(f.eigenvectors.data()), dim,
      f.eigenvalues.data());
  if (info != 0) {
    throw std::runtime_error("diagonalize: zheevd failed to converge");
  }
#else
  Eigen::SelfAdjointEigenSolver<CMat> solver(hamiltonian);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("diagonalize: eigensolver failed to converge");
  }
  f.eigenvalues = solver.eigenvalues();
  f.eigenvectors = solver.eigenvectors();
#endif
  return f;
}

namespace {

// exp(-i w t) as a vector, w real.
CVec phase_vector(const Vec& w, double t) {
  return (w.array().cast<Complex>() * Complex(0.0, -t)).exp().matrix();
}

}  // namespace

CVec evolve(const SpectralFactors& factors, const CVec& psi0, double t) {
  const CVec coeffs = factors.eigenvectors.adjoint() * psi0;
  const CVec phased =
      phase_vector(factors.eigenvalues, t).cwiseProduct(coeffs);
  return factors.eigenvectors * phased;
}

RelaxationTrace relax(const SpectralFactors& factors, const CVec& psi0,
                      const std::vector<double>& times, int n_levels) {
  RelaxationTrace trace;
  trace.times = times;
  trace.p1.reserve(times.size());
  trace.p2.reserve(times.size());
  trace.norm.reserve(times.size());
  // One adjoint matvec up front, one matvec per sample time.
  const CVec coeffs = factors.eigenvectors.adjoint() * psi0;
  for (double t : times) {
    const CVec phased =
        phase_vector(factors.eigenvalues, t).cwiseProduct(coeffs);
    const CVec psi = factors.eigenvectors * phased;
    trace.p1.push_back(site_weight(psi, n_levels, 1));
    trace.p2.push_back(site_weight(psi, n_levels, 2));
    trace.norm.push_back(psi.norm());
  }
  return trace;
}

namespace {

// One sweep of the trapezoidal recursion: given u_{n-1} on the grid, produce
// u_n on the same grid. phases[j] = exp(i h0 t_j) elementwise.
std::vector<CVec> next_order(const std::vector<CVec>& prev,
                             const std::vector<CVec>& phases, const CMat& v_full,
                             double coupling, double step) {
  const auto points = prev.size();
  std::vector<CVec> next(points);
  std::vector<CVec> kicks(points);  // e^{i H0 s} V e^{-i H0 s} u_{n-1}(s)
  for (std::size_t j = 0; j < points; ++j) {
    const CVec rotated = phases[j].conjugate().cwiseProduct(prev[j]);
    kicks[j] = phases[j].cwiseProduct(CVec(v_full * rotated));
  }
  const Complex weight = Complex(0.0, -coupling) * (step / 2.0);
  next[0] = CVec::Zero(prev[0].size());
  for (std::size_t j = 1; j < points; ++j) {
    next[j] = next[j - 1] + weight * (kicks[j - 1] + kicks[j]);
  }
  return next;
}

// Runs the full recursion at a fixed grid size; returns psi_n(t) for all n.
std::vector<CVec> expand_on_grid(const Vec& h0_diag, const CMat& v_full,
                                 double coupling, const CVec& psi0, double t,
                                 int max_order, int steps) {
  const double step = t / steps;
  std::vector<CVec> phases(steps + 1);  // phases[j] = exp(+i h0 t_j)
  for (int j = 0; j <= steps; ++j) {
    phases[j] = phase_vector(h0_diag, -step * j);
  }
  std::vector<CVec> current(steps + 1, psi0);  // u_0 is constant
  std::vector<CVec> result(max_order + 1);
  const CVec final_phase = phases[steps].conjugate();
  result[0] = final_phase.cwiseProduct(current[steps]);
  for (int n = 1; n <= max_order; ++n) {
    current = next_order(current, phases, v_full, coupling, step);
    result[n] = final_phase.cwiseProduct(current[steps]);
  }
  return result;
}

}  // namespace

DuhamelExpansion duhamel_expansion(const Vec& h0_diag, const CMat& v_full,
                                   double coupling, const CVec& psi0, double t,
                                   int max_order, double step_tol,
                                   int initial_steps, int max_steps) {
  if (max_order < 0) {
    throw std::invalid_argument("duhamel_expansion: max_order must be >= 0");
  }
  if (t < 0.0) {
    throw std::invalid_argument("duhamel_expansion: t must be >= 0");
  }
  if (initial_steps < 1 || max_steps < initial_steps) {
    throw std::invalid_argument("duhamel_expansion: bad step limits");
  }
  DuhamelExpansion out;
  if (t == 0.0) {
    out.orders.assign(max_order + 1, CVec::Zero(psi0.size()));
    out.orders[0] = psi0;
    out.steps = 0;
    return out;
  }
  int steps = initial_steps;
  std::vector<CVec> coarse =
      expand_on_grid(h0_diag, v_full, coupling, psi0, t, max_order, steps);
  while (true) {
    const int doubled = steps * 2;
    std::vector<CVec> fine =
        expand_on_grid(h0_diag, v_full, coupling, psi0, t, max_order, doubled);
    double moved = 0.0;
    for (int n = 0; n <= max_order; ++n) {
      moved = std::max(moved, (fine[n] - coarse[n]).norm());
    }
    coarse = std::move(fine);
    steps = doubled;
    if (moved < step_tol) {
      out.step_error = moved;
      break;
    }
    if (doubled >= max_steps) {
      throw std::runtime_error("duhamel_expansion: step doubling did not settle");
    }
  }
  out.orders = std::move(coarse);
  out.steps = steps;
  return out;
}

double remainder_norm(const CVec& psi_exact, const DuhamelExpansion& expansion,
                      int max_order) {
  if (max_order < 0 ||
      max_order >= static_cast<int>(expansion.orders.size())) {
    throw std::invalid_argument("remainder_norm: max_order out of range");
  }
  CVec partial = CVec::Zero(psi_exact.size());
  for (int n = 0; n <= max_order; ++n) {
    partial += expansion.orders[n];
  }
  return (psi_exact - partial).norm();
}

}  // namespace vanhove
