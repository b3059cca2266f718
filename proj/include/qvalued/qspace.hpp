#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qvalued/spaces.hpp"

namespace qvalued {

// An element of Q_Q(Y): an unordered multiset of Q points of a space. The
// stored order is only a representative; every comparison offered here is
// permutation invariant.
class QPoint {
 public:
  QPoint(Space space, std::vector<Point> points);

  // Q copies of the same point.
  static QPoint repeated(Space space, const Point& p, std::size_t copies);

  const Space& space() const { return space_; }
  std::size_t q() const { return points_.size(); }
  const std::vector<Point>& points() const { return points_; }
  const Point& operator[](std::size_t i) const { return points_[i]; }

  // The representative with points sorted lexicographically by coordinates.
  QPoint canonical() const;

  // True iff both multisets coincide, i.e. S(*this, other) == 0.
  bool same_multiset(const QPoint& other) const;

 private:
  Space space_;
  std::vector<Point> points_;
};

// Entry (i, j) is d(a_i, b_j). Both solvers read distances from here so
// that they compare bit-identical numbers.
std::vector<std::vector<double>> distance_matrix(const QPoint& a,
                                                 const QPoint& b);

struct Matching {
  // sigma[i] = j pairs a_i with b_j (0-based).
  std::vector<std::size_t> sigma;
  double value = 0.0;
};

inline constexpr std::size_t kExhaustiveCap = 8;

// min over all Q! permutations of max_i d(a_i, b_sigma(i)). Throws
// CapExceeded for Q above `cap`.
double s_metric_exact(const QPoint& a, const QPoint& b,
                      std::size_t cap = kExhaustiveCap);

// The same value by binary search over the sorted pairwise distances with
// a Hopcroft-Karp feasibility test on the threshold graph.
double s_metric_bottleneck(const QPoint& a, const QPoint& b);

// A permutation attaining S(a, b); among all optimal permutations the
// lexicographically smallest sigma is returned.
Matching optimal_permutation(const QPoint& a, const QPoint& b);

// Smallest bottleneck cost over all permutations different from `sigma`.
// +infinity when Q == 1.
double second_best_cost(const QPoint& a, const QPoint& b,
                        const std::vector<std::size_t>& sigma);

// Multiset sum.
QPoint qpoint_concat(const QPoint& a, const QPoint& b);

struct SupportEntry {
  Point point;
  std::size_t multiplicity = 0;
};

// Distinct points with multiplicities. A point within `tol` of an earlier
// representative is merged into it.
std::vector<SupportEntry> support(const QPoint& a, double tol = 0.0);

// Perfect-matching feasibility for a bipartite graph given as adjacency
// lists from left vertices to right vertices (both sides of size n).
// Returns the size of a maximum matching; `match_left` receives the
// right partner of each left vertex or npos.
std::size_t max_bipartite_matching(
    const std::vector<std::vector<std::size_t>>& adj, std::size_t n_right,
    std::vector<std::size_t>* match_left = nullptr);

}  // namespace qvalued
