#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

// Wick pairings of a product of n+m hopping-matrix factors, the energy-delta
// bookkeeping they induce, and the resulting exact moment formula for
// E[Tr V^(2k)].
//
// Conventions. Slots are numbered 1..n+m; the first m slots come from the
// conjugated side ("primed"), the rest from the direct side ("unprimed").
// Writing the factor chain's boundary energies in one line
//     E'_m, E'_(m-1), ..., E'_1, E_0, E_1, ..., E_n
// gives chain positions 0..n+m, where position m is the shared anchor E_0
// (primed and unprimed chains start from the same energy). Slot i sits
// between chain positions i-1 and i. A pairing of slots (a, b) forces the
// cross-identifications  chain[a-1] = chain[b]  and  chain[a] = chain[b-1].

namespace vanhove {

struct Pairing {
  // (a, b) with a < b, sorted by a; a perfect matching of 1..2k.
  std::vector<std::pair<int, int>> pairs;

  int slots() const { return 2 * static_cast<int>(pairs.size()); }
};

// (2k-1)!! and the Catalan numbers; the two counting baselines.
std::uint64_t double_factorial_odd(int k);
std::uint64_t catalan(int k);

// Visit every perfect matching of 1..2k, generated by always pairing the
// smallest unpaired slot with each larger unpaired slot in turn.
void for_each_pairing(int k, const std::function<void(const Pairing&)>& visit);

std::vector<Pairing> enumerate_pairings(int k);

enum class GraphClass { Simple, Nested, Crossing };

// Crossing: some pairs (i,j), (k,l) interleave as i<k<j<l. Nested: some pair
// strictly encloses another with both lying entirely on one side of the
// primed/unprimed boundary m. Simple: neither.
GraphClass classify(const Pairing& p, int n, int m);

struct EnergyClasses {
  int kappa = 0;              // number of independent energy variables
  std::vector<int> class_of;  // chain position -> class id, first-appearance order
};

// Independent energy variables of the open chain after imposing the pairing's
// deltas. For non-crossing pairings kappa = (n+m)/2 + 1, for crossing ones
// kappa <= (n+m)/2 - 1.
EnergyClasses kappa(const Pairing& p);

// Trace variant: chain ends are the same variable (E_0 = E_2k). The ends meet
// on their own for every pairing, so this agrees with kappa; kept separate
// because the moment formula is defined over the closed chain.
EnergyClasses kappa_cyclic(const Pairing& p);

// Whether the two chain ends E'_m and E_n share a class. True for every
// pairing; exercised exhaustively in tests.
bool ends_meet(const Pairing& p);

struct ClassMultiplicity {
  int left = 0;   // unprimed propagator slots attached to this class
  int right = 0;  // primed slots; the anchor position m counts once on each side
};

struct GraphSummary {
  GraphClass cls = GraphClass::Simple;
  int kappa = 0;
  int nbar = 0;    // (# classes with total multiplicity >= 2) - 1
  int nprime = 0;  // # classes with total multiplicity exactly 1
  std::vector<ClassMultiplicity> mults;  // indexed by class id
};

// Left/right multiplicities of each energy class plus the derived counts.
// Total multiplicity always sums to n+m+2 across classes.
GraphSummary multiplicities(const Pairing& p, int n, int m);

struct ClassCounts {
  std::uint64_t simple = 0;
  std::uint64_t nested = 0;
  std::uint64_t crossing = 0;

  std::uint64_t total() const { return simple + nested + crossing; }
  std::uint64_t noncrossing() const { return simple + nested; }
};

// Classify every pairing of n+m slots (n+m even).
ClassCounts count_by_class(int n, int m);

// Exact E[Tr V^(2k)] for the two-site block ensemble at size N: the pairing
// sum of N^(kappa_cyc - k) X(pi), where X counts site assignments compatible
// with the pairing and the off-diagonal block structure.
double moment_from_pairings(int k, int N);

// Same sum split into non-crossing and crossing parts. The non-crossing part
// equals 2 N Catalan(k) exactly; the crossing part carries at least two
// negative powers of N relative to it.
struct MomentSplit {
  double noncrossing = 0.0;
  double crossing = 0.0;

  double total() const { return noncrossing + crossing; }
};

MomentSplit moment_split(int k, int N);

// Number of valid site assignments for one pairing (the X factor above),
// brute-forced over all 2^kappa class labelings.
int site_assignment_count(const EnergyClasses& cyclic, int slots);

struct MomentEstimate {
  double mean = 0.0;
  double stderr = 0.0;
};

// Monte Carlo E[Tr V^p] over `samples` interaction draws (full matrix power;
// odd p vanishes identically through the block structure).
MomentEstimate trace_power_monte_carlo(int power, int n_levels, int samples,
                                       std::uint64_t seed);

inline MomentEstimate moment_monte_carlo(int k, int n_levels, int samples,
                                         std::uint64_t seed) {
  return trace_power_monte_carlo(2 * k, n_levels, samples, seed);
}

}  // namespace vanhove
