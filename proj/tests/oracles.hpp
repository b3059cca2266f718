#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the solvers it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Pt = std::vector<double>;

inline double euclid(const Pt& a, const Pt& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc);
}

struct Assignment {
  std::vector<std::size_t> sigma;
  double value;
};

// Enumerates all permutations in lexicographic order; keeps the first one
// attaining the minimum bottleneck cost.
template <class Dist>
Assignment brute_force_bottleneck(const std::vector<Pt>& a,
                                  const std::vector<Pt>& b, Dist dist) {
  std::vector<std::size_t> sigma(a.size());
  std::iota(sigma.begin(), sigma.end(), 0);
  Assignment best{sigma, INFINITY};
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      worst = std::max(worst, dist(a[i], b[sigma[i]]));
    }
    if (worst < best.value) best = {sigma, worst};
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return best;
}

// S ratio of the half-angle map between angles differing by delta:
// the branches move by 2 sin(delta/4) or 2 cos(delta/4), the chord is
// 2 |sin(delta/2)|.
inline double half_angle_ratio(double delta) {
  const double moved = 2.0 * std::min(std::abs(std::sin(delta / 4.0)),
                                      std::abs(std::cos(delta / 4.0)));
  return moved / (2.0 * std::abs(std::sin(delta / 2.0)));
}

// Dense maximization of half_angle_ratio over (0, 2 pi).
inline double half_angle_lip(std::size_t grid = 2000000) {
  double best = 0.0;
  for (std::size_t k = 1; k < grid; ++k) {
    const double delta = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(grid);
    best = std::max(best, half_angle_ratio(delta));
  }
  return best;
}

// Tiles [k w, (k + 1) w), k = 0..n-1, met by the closed interval [a, a + len],
// by direct enumeration.
inline std::size_t tiles_met(double a, double len, double w, std::size_t n,
                             double lo, double hi) {
  const double left = std::max(a, lo), right = std::min(a + len, hi);
  std::size_t met = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t0 = lo + static_cast<double>(k) * w;
    const double t1 = lo + static_cast<double>(k + 1) * w;
    if (left <= right && left < t1 && right >= t0) ++met;
  }
  return met;
}

// Brute-force sweep of probe positions on a fine grid.
inline std::size_t swept_interval_multiplicity(double w, std::size_t n,
                                               double lo, double hi,
                                               double len,
                                               std::size_t steps = 100000) {
  std::size_t best = 0;
  const double a0 = lo - len, a1 = hi;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double a = a0 + (a1 - a0) * static_cast<double>(k) /
                              static_cast<double>(steps);
    best = std::max(best, tiles_met(a, len, w, n, lo, hi));
  }
  return best;
}

}  // namespace oracle
