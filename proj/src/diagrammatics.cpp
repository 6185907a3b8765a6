#include "vanhove/diagrammatics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "vanhove/model.hpp"
#include "vanhove/rng.hpp"
#include "vanhove/types.hpp"

namespace vanhove {

namespace {

// Union-find with the smallest member as representative, so class ids are
// stable and independent of merge order.
class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<int> parent_;
};

void check_valid(const Pairing& p) {
  const int slots = p.slots();
  std::vector<bool> seen(slots + 1, false);
  for (auto [a, b] : p.pairs) {
    if (a < 1 || b <= a || b > slots) throw std::invalid_argument("pairing: bad slot pair");
    if (seen[a] || seen[b]) throw std::invalid_argument("pairing: slot paired twice");
    seen[a] = seen[b] = true;
  }
}

// Shared kappa kernel; `closed` identifies the two chain ends (trace).
EnergyClasses energy_classes(const Pairing& p, bool closed) {
  check_valid(p);
  const int slots = p.slots();
  UnionFind uf(slots + 1);
  for (auto [a, b] : p.pairs) {
    uf.unite(a - 1, b);
    uf.unite(a, b - 1);
  }
  if (closed && slots > 0) uf.unite(0, slots);

  EnergyClasses out;
  out.class_of.assign(slots + 1, -1);
  std::vector<int> id_of_root(slots + 1, -1);
  for (int pos = 0; pos <= slots; ++pos) {
    const int r = uf.find(pos);
    if (id_of_root[r] < 0) id_of_root[r] = out.kappa++;
    out.class_of[pos] = id_of_root[r];
  }
  return out;
}

void pair_sampler(int slots, std::vector<int>& partner, Pairing& scratch,
                  const std::function<void(const Pairing&)>& visit) {
  int a = 1;
  while (a <= slots && partner[a] != 0) ++a;
  if (a > slots) {
    visit(scratch);
    return;
  }
  for (int b = a + 1; b <= slots; ++b) {
    if (partner[b] != 0) continue;
    partner[a] = b;
    partner[b] = a;
    scratch.pairs.emplace_back(a, b);
    pair_sampler(slots, partner, scratch, visit);
    scratch.pairs.pop_back();
    partner[a] = 0;
    partner[b] = 0;
  }
}

}  // namespace

std::uint64_t double_factorial_odd(int k) {
  if (k < 0) throw std::invalid_argument("double_factorial_odd: k must be >= 0");
  std::uint64_t r = 1;
  for (int j = 3; j <= 2 * k - 1; j += 2) r *= static_cast<std::uint64_t>(j);
  return r;
}

std::uint64_t catalan(int k) {
  if (k < 0) throw std::invalid_argument("catalan: k must be >= 0");
  // C_0 = 1, C_{j+1} = C_j * 2(2j+1)/(j+2); exact in 64-bit well past k = 30
  std::uint64_t c = 1;
  for (int j = 0; j < k; ++j) c = c * 2 * (2 * j + 1) / (j + 2);
  return c;
}

void for_each_pairing(int k, const std::function<void(const Pairing&)>& visit) {
  if (k < 0) throw std::invalid_argument("for_each_pairing: k must be >= 0");
  const int slots = 2 * k;
  std::vector<int> partner(slots + 1, 0);
  Pairing scratch;
  scratch.pairs.reserve(k);
  pair_sampler(slots, partner, scratch, visit);
}

std::vector<Pairing> enumerate_pairings(int k) {
  std::vector<Pairing> out;
  out.reserve(double_factorial_odd(k));
  for_each_pairing(k, [&out](const Pairing& p) { out.push_back(p); });
  return out;
}

GraphClass classify(const Pairing& p, int n, int m) {
  check_valid(p);
  if (n < 0 || m < 0 || n + m != p.slots())
    throw std::invalid_argument("classify: n+m must match the pairing size");
  const auto& pr = p.pairs;
  const int npairs = static_cast<int>(pr.size());
  bool crossing = false;
  bool nested = false;
  for (int u = 0; u < npairs && !crossing; ++u) {
    for (int v = 0; v < npairs; ++v) {
      if (u == v) continue;
      const auto [i, j] = pr[u];
      const auto [kk, l] = pr[v];
      if (i < kk && kk < j && j < l) {
        crossing = true;
        break;
      }
      // (kk,l) strictly inside (i,j), both pairs on a single side of m
      if (i < kk && l < j && (j <= m || i > m)) nested = true;
    }
  }
  if (crossing) return GraphClass::Crossing;
  return nested ? GraphClass::Nested : GraphClass::Simple;
}

EnergyClasses kappa(const Pairing& p) { return energy_classes(p, false); }

EnergyClasses kappa_cyclic(const Pairing& p) { return energy_classes(p, true); }

bool ends_meet(const Pairing& p) {
  const auto cls = energy_classes(p, false);
  return cls.class_of.front() == cls.class_of.back();
}

GraphSummary multiplicities(const Pairing& p, int n, int m) {
  const auto cls = kappa(p);
  GraphSummary out;
  out.cls = classify(p, n, m);
  out.kappa = cls.kappa;
  out.mults.assign(cls.kappa, ClassMultiplicity{});
  const int slots = n + m;
  for (int pos = 0; pos <= slots; ++pos) {
    auto& mult = out.mults[cls.class_of[pos]];
    // positions m..n+m border unprimed slots, positions 0..m border primed
    // ones; the anchor at position m borders both chains.
    if (pos >= m) ++mult.left;
    if (pos <= m) ++mult.right;
  }
  for (const auto& mult : out.mults) {
    const int total = mult.left + mult.right;
    if (total == 1)
      ++out.nprime;
    else
      ++out.nbar;
  }
  --out.nbar;  // stored as (# multi-propagator classes) - 1
  return out;
}

ClassCounts count_by_class(int n, int m) {
  if ((n + m) % 2 != 0) throw std::invalid_argument("count_by_class: n+m must be even");
  ClassCounts counts;
  for_each_pairing((n + m) / 2, [&](const Pairing& p) {
    switch (classify(p, n, m)) {
      case GraphClass::Simple: ++counts.simple; break;
      case GraphClass::Nested: ++counts.nested; break;
      case GraphClass::Crossing: ++counts.crossing; break;
    }
  });
  return counts;
}

int site_assignment_count(const EnergyClasses& cyclic, int slots) {
  if (cyclic.kappa > 24) throw std::invalid_argument("site_assignment_count: too many classes");
  int count = 0;
  for (std::uint32_t mask = 0; mask < (1u << cyclic.kappa); ++mask) {
    bool ok = true;
    for (int i = 0; i < slots; ++i) {
      const std::uint32_t xi = (mask >> cyclic.class_of[i]) & 1u;
      const std::uint32_t xj = (mask >> cyclic.class_of[i + 1]) & 1u;
      if (xi == xj) {  // hopping matrix only connects different sites
        ok = false;
        break;
      }
    }
    if (ok) ++count;
  }
  return count;
}

namespace {

double pairing_weight(const Pairing& p, int k, int N) {
  const auto cyc = kappa_cyclic(p);
  const int x = site_assignment_count(cyc, 2 * k);
  if (x == 0) return 0.0;
  return std::pow(static_cast<double>(N), cyc.kappa - k) * x;
}

}  // namespace

double moment_from_pairings(int k, int N) {
  const auto split = moment_split(k, N);
  return split.total();
}

MomentSplit moment_split(int k, int N) {
  if (N < 2) throw std::invalid_argument("moment_split: need N >= 2");
  if (k < 0 || k > 8) throw std::invalid_argument("moment_split: k out of the exhaustive range");
  MomentSplit split;
  for_each_pairing(k, [&](const Pairing& p) {
    const double w = pairing_weight(p, k, N);
    // crossing status does not depend on the primed/unprimed split
    if (classify(p, 2 * k, 0) == GraphClass::Crossing)
      split.crossing += w;
    else
      split.noncrossing += w;
  });
  return split;
}

MomentEstimate trace_power_monte_carlo(int power, int n_levels, int samples,
                                       std::uint64_t seed) {
  if (power < 1) throw std::invalid_argument("trace_power_monte_carlo: power must be >= 1");
  if (samples < 2) throw std::invalid_argument("trace_power_monte_carlo: need >= 2 samples");
  ModelConfig cfg;
  cfg.n_levels = n_levels;
  double sum = 0.0;
  double sumsq = 0.0;
  for (int s = 0; s < samples; ++s) {
    const CMat v = sample_interaction(cfg, member_seed(seed, s)).full();
    CMat acc = v;
    for (int j = 1; j < power; ++j) acc = acc * v;
    const double tr = acc.trace().real();
    sum += tr;
    sumsq += tr * tr;
  }
  MomentEstimate est;
  est.mean = sum / samples;
  const double var = (sumsq - samples * est.mean * est.mean) / (samples - 1);
  est.stderr = std::sqrt(std::max(var, 0.0) / samples);
  return est;
}

}  // namespace vanhove
