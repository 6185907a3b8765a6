#include "vanhove/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "vanhove/rng.hpp"

namespace vanhove {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

CMat BlockRandomMatrix::full() const {
  const auto n = upper.rows();
  CMat v = CMat::Zero(2 * n, 2 * n);
  v.topRightCorner(n, n) = upper;
  v.bottomLeftCorner(n, n) = upper.adjoint();
  return v;
}

Vec level_energies(int n_levels) {
  require(n_levels >= 2, "level_energies: need at least 2 levels per site");
  Vec e(n_levels);
  for (int n = 1; n <= n_levels; ++n) e(n - 1) = static_cast<double>(n) / n_levels;
  return e;
}

Vec h0_diagonal(const ModelConfig& cfg) {
  const Vec e = level_energies(cfg.n_levels);
  Vec d(2 * cfg.n_levels);
  d.head(cfg.n_levels) = e;
  d.tail(cfg.n_levels) = e;
  return d;
}

CMat build_h0(const ModelConfig& cfg) {
  return h0_diagonal(cfg).cast<Complex>().asDiagonal();
}

BlockRandomMatrix sample_interaction(const ModelConfig& cfg, std::uint64_t seed) {
  const int n = cfg.n_levels;
  require(n >= 2, "sample_interaction: need at least 2 levels per site");
  GaussianStream g(seed);
  const double scale = 1.0 / std::sqrt(2.0 * n);
  BlockRandomMatrix v;
  v.upper.resize(n, n);
  // Fixed row-major fill order; part of the reproducibility contract.
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const double a = g();
      const double b = g();
      v.upper(r, c) = Complex(a * scale, b * scale);
    }
  return v;
}

CMat assemble_hamiltonian(const CMat& h0, const BlockRandomMatrix& v, double coupling) {
  require(h0.rows() == h0.cols(), "assemble_hamiltonian: H0 must be square");
  require(2 * v.upper.rows() == h0.rows(),
          "assemble_hamiltonian: interaction size does not match H0");
  if (coupling == 0.0) return h0;  // exact, no roundoff from adding zeros
  return h0 + coupling * v.full();
}

CVec make_initial_state(const ModelConfig& cfg, int site, double band_lo, double band_hi) {
  const int n = cfg.n_levels;
  const double eps = cfg.edge_cutoff;
  require(site == 1 || site == 2, "make_initial_state: site must be 1 or 2");
  require(eps > 0.0 && eps < 0.5, "make_initial_state: edge cutoff must lie in (0, 0.5)");
  require(band_lo < band_hi, "make_initial_state: empty energy window");
  require(band_lo >= eps && band_hi <= 1.0 - eps,
          "make_initial_state: window must stay inside the edge-trimmed band [eps, 1-eps]");

  const Vec e = level_energies(n);
  CVec psi = CVec::Zero(2 * n);
  const int offset = (site - 1) * n;
  int support = 0;
  for (int i = 0; i < n; ++i) {
    // Half-open window (lo, hi]; the edge trim keeps amplitudes off E <= eps
    // and E >= 1-eps, where the density of decay channels degenerates.
    if (e(i) > band_lo && e(i) <= band_hi && e(i) > eps && e(i) < 1.0 - eps) {
      psi(offset + i) = 1.0;
      ++support;
    }
  }
  require(support > 0, "make_initial_state: no level inside the window");
  psi /= std::sqrt(static_cast<double>(support));
  return psi;
}

double site_weight(const CVec& psi, int n_levels, int site) {
  if (site != 1 && site != 2) throw std::invalid_argument("site_weight: site must be 1 or 2");
  if (psi.size() != 2 * n_levels)
    throw std::invalid_argument("site_weight: state size does not match 2N");
  return psi.segment((site - 1) * n_levels, n_levels).squaredNorm();
}

}  // namespace vanhove
