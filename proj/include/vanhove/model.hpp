#pragma once

#include <cstdint>

#include "vanhove/types.hpp"

// Two-site model: N energy levels E_n = n/N on each site, hopping only
// between sites through a complex Gaussian block matrix. Basis ordering is
// site-1 levels first, then site-2 levels, index i = (site-1)*N + (n-1).

namespace vanhove {

struct ModelConfig {
  int n_levels = 32;          // N, levels per site (>= 2)
  double coupling = 0.05;     // lambda
  double edge_cutoff = 0.05;  // epsilon; initial states keep away from band edges
};

// Hermitian 2Nx2N with vanishing diagonal blocks. Only the upper block V1
// (site1 <- site2 couplings) is stored; the lower block is its adjoint.
struct BlockRandomMatrix {
  CMat upper;  // N x N

  CMat full() const;
};

// E_n = n/N, n = 1..N; spectrum fills (0, 1].
Vec level_energies(int n_levels);

// Diagonal of H0 over the full 2N basis (both sites carry the same spectrum).
Vec h0_diagonal(const ModelConfig& cfg);

// H0 as a dense diagonal matrix.
CMat build_h0(const ModelConfig& cfg);

// Upper block entries are (a+ib)/sqrt(2N) with a,b standard normal, so
// E|V1_nm|^2 = 1/N. Same (config, seed) gives bit-identical matrices.
BlockRandomMatrix sample_interaction(const ModelConfig& cfg, std::uint64_t seed);

// H = H0 + lambda V.
CMat assemble_hamiltonian(const CMat& h0, const BlockRandomMatrix& v, double coupling);

// Normalized state with equal amplitude on every level of `site` whose energy
// lies in (band_lo, band_hi] (and strictly inside the epsilon-trimmed band).
// site is 1 or 2. Throws if the window violates the edge cutoff or is empty.
CVec make_initial_state(const ModelConfig& cfg, int site, double band_lo, double band_hi);

// |amplitude|^2 summed over one site's block.
double site_weight(const CVec& psi, int n_levels, int site);

}  // namespace vanhove
