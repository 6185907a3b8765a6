#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

// Two quadrature kernels used by the inequality checkers and the resolvent
// tests. Both integrate eta-regularized integrands whose peaks are finite but
// sharp (width eta down to 1e-3), so plain fixed rules are useless:
//   integrate        adaptive Gauss-Kronrod 7/15, worst-panel-first bisection
//   integrate_peaked fixed panels split at known peak locations, each panel
//                    mapped through sinh so the peak becomes a smooth bump;
//                    cost is deterministic, accuracy checked by node doubling

namespace vanhove {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // accumulated Kronrod-Gauss error estimate
  long evaluations = 0;
  bool converged = true;
};

namespace quad_detail {

// Kronrod 15 abscissae (positive half) and weights; Gauss 7 shares nodes 1,3,5.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr std::array<double, 4> kWg = {0.129484966168870, 0.279705391489277,
                                              0.381830050505119, 0.417959183673469};

// n-point Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on the
// Legendre recurrence.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const double pi = 3.14159265358979323846;
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p0 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

}  // namespace quad_detail

// Adaptive bisection: split the worst panel until the summed error estimate
// drops under abs_tol + rel_tol*|integral| or the panel budget runs out.
template <typename F>
QuadratureResult integrate(F&& f, double a, double b, double rel_tol = 1e-9,
                           double abs_tol = 0.0, int max_panels = 20000) {
  struct Interval {
    double a, b, value, error;
  };
  QuadratureResult res;
  auto eval = [&](double a0, double b0) {
    res.evaluations += 15;
    const double c = 0.5 * (a0 + b0);
    const double h = 0.5 * (b0 - a0);
    double ik = 0.0;
    double ig = 0.0;
    for (int i = 0; i < 7; ++i) {
      const double fx = f(c - h * quad_detail::kXgk[i]) + f(c + h * quad_detail::kXgk[i]);
      ik += quad_detail::kWgk[i] * fx;
      if (i % 2 == 1) ig += quad_detail::kWg[i / 2] * fx;
    }
    const double fc = f(c);
    ik += quad_detail::kWgk[7] * fc;
    ig += quad_detail::kWg[3] * fc;
    return Interval{a0, b0, ik * h, std::abs(ik - ig) * h};
  };

  std::vector<Interval> heap{eval(a, b)};
  auto worse = [](const Interval& x, const Interval& y) { return x.error < y.error; };
  while (true) {
    double total = 0.0;
    double err = 0.0;
    for (const auto& iv : heap) {
      total += iv.value;
      err += iv.error;
    }
    const double target = abs_tol + rel_tol * std::abs(total);
    if (err <= target || static_cast<int>(heap.size()) >= max_panels) {
      res.value = total;
      res.error = err;
      res.converged = err <= std::max(target, 1e-12 * std::abs(total));
      return res;
    }
    std::pop_heap(heap.begin(), heap.end(), worse);
    const Interval top = heap.back();
    const double mid = 0.5 * (top.a + top.b);
    if (mid <= top.a || mid >= top.b) {
      // floating point resolution floor; keep the panel and stop refining it
      res.value = total;
      res.error = err;
      res.converged = false;
      return res;
    }
    heap.pop_back();
    heap.push_back(eval(top.a, mid));
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back(eval(mid, top.b));
    std::push_heap(heap.begin(), heap.end(), worse);
  }
}

// Integral of f over [a,b] where f has regularized peaks of width `eta` at the
// given centers. Panels are cut at each interior peak; a panel side adjacent
// to a peak is mapped by omega = c + eta*sinh(s), which turns the peak into an
// O(1) feature that `nodes` Gauss-Legendre points resolve. Doubling `nodes`
// is the refinement self-check.
template <typename F>
double integrate_peaked(F&& f, double a, double b, const std::vector<double>& centers,
                        double eta, int nodes = 16) {
  if (!(b > a)) return 0.0;
  std::vector<double> cuts{a, b};
  for (double c : centers)
    if (c > a && c < b) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto is_peak = [&](double p) {
    for (double c : centers)
      if (std::abs(p - c) <= 1e-12 * (std::abs(c) + 1.0)) return true;
    return false;
  };

  std::vector<double> gx, gw;
  quad_detail::gauss_legendre(nodes, gx, gw);
  const int ng = static_cast<int>(gx.size());

  // straight Gauss-Legendre on [u,v]
  auto flat = [&](double u, double v) {
    const double c = 0.5 * (u + v);
    const double h = 0.5 * (v - u);
    double s = 0.0;
    for (int i = 0; i < ng; ++i) s += gw[i] * f(c + h * gx[i]);
    return s * h;
  };
  // sinh map from a peak at p across a span of |v - p|, sign picks the side
  auto sinh_from = [&](double p, double v, int sign) {
    const double smax = std::asinh(std::abs(v - p) / eta);
    double s = 0.0;
    for (int i = 0; i < ng; ++i) {
      const double si = 0.5 * smax * (gx[i] + 1.0);
      const double omega = p + sign * eta * std::sinh(si);
      s += gw[i] * f(omega) * eta * std::cosh(si);
    }
    return s * 0.5 * smax;
  };

  double total = 0.0;
  for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
    const double u = cuts[seg];
    const double v = cuts[seg + 1];
    const bool pl = is_peak(u);
    const bool pr = is_peak(v);
    if (pl && pr) {
      const double mid = 0.5 * (u + v);
      total += sinh_from(u, mid, +1) + sinh_from(v, mid, -1);
    } else if (pl) {
      total += sinh_from(u, v, +1);
    } else if (pr) {
      total += sinh_from(v, u, -1);
    } else {
      total += flat(u, v);
    }
  }
  return total;
}

}  // namespace vanhove
