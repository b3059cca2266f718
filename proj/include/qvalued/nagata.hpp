#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "qvalued/qspace.hpp"
#include "qvalued/spaces.hpp"

namespace qvalued {

// Half-open [lo, hi) on the line.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Half-open product of [lo_a, hi_a).
struct Box {
  Point lo;
  Point hi;
};

// Closed ball.
struct Ball {
  Point center;
  double radius = 0.0;
};

// Indices into Cover::samples.
struct IndexSet {
  std::vector<std::size_t> indices;
};

using Member = std::variant<Interval, Box, Ball, IndexSet>;

// Regular tiling by cubes of side `width` starting at `origin`, with
// `counts[a]` tiles along axis a. Covers built by interval_cover and
// box_cover carry it; it enables the exact multiplicity sweep.
struct Grid {
  Point origin;
  double width = 0.0;
  std::vector<std::size_t> counts;
};

// A family of subsets of a ground set. The ground set is the box
// [range_lo, range_hi] for geometric covers and `samples` for covers with
// index-set members.
struct Cover {
  Space space;
  double c = 1.0;
  double s = 1.0;
  std::vector<Member> members;
  std::vector<Point> samples;
  Point range_lo;
  Point range_hi;
  std::optional<Grid> grid;

  std::size_t size() const { return members.size(); }
};

bool member_contains(const Cover& cover, std::size_t member,
                     std::span<const double> p);

std::vector<std::size_t> members_containing(const Cover& cover,
                                            std::span<const double> p);

// Tiles [lo + k cs, lo + (k + 1) cs) covering [lo, hi]. Requires c >= 3,
// which gives s-multiplicity 2.
Cover interval_cover(double c, double s, double lo, double hi);

// Grid of cubes of side cs covering the box [lo, hi] in R^n.
Cover box_cover(double c, double s, const Point& lo, const Point& hi,
                Norm norm = Norm::kSup);

// Greedy net of the samples: each member is the closed ball of radius cs/2
// around a center, stored as an index set.
Cover sample_cover(const Space& space, std::vector<Point> samples, double c,
                   double s);

double member_diameter(const Cover& cover, std::size_t member);
double cover_diameter(const Cover& cover);

struct ProbeStrategy {
  std::size_t probes = 10000;
  std::size_t points_per_probe = 16;
  std::uint64_t seed = 0;
};

struct MultiplicityResult {
  std::size_t value = 0;
  bool exact = false;  // false: lower bound from probes
  std::vector<std::size_t> per_probe;
};

// s-multiplicity of the cover. Grid covers in one dimension or under the
// sup norm are swept exactly over critical probe positions; everything
// else is a probe-based lower bound.
MultiplicityResult s_multiplicity(const Cover& cover, double s,
                                  const ProbeStrategy& probes = {});

inline constexpr std::size_t kProductMemberCap = 1000000;

// The cover of Q_Q(Y) indexed by Q-multisets {i_1, ..., i_Q} of base
// indices; member {i_j} holds the QPoints sum [[x_j]] with x_j in B_{i_j}.
struct ProductCover {
  Cover base;
  std::size_t q = 1;
  std::vector<std::vector<std::size_t>> members;  // sorted index multisets
  std::map<std::vector<std::size_t>, std::size_t> lookup;

  std::size_t size() const { return members.size(); }
};

// Number of Q-multisets of an n-element set, saturating at SIZE_MAX.
std::size_t multiset_count(std::size_t n, std::size_t q);

ProductCover product_cover(const Cover& base, std::size_t q,
                           std::size_t cap = kProductMemberCap);

bool product_member_contains(const ProductCover& cover, std::size_t member,
                             const QPoint& x);

// Indices of all product members containing x.
std::vector<std::size_t> product_members_containing(const ProductCover& cover,
                                                    const QPoint& x);

// Upper bound of the S-diameter of a member: the largest diameter of the
// base members it is built from (identity matching).
double product_member_diameter(const ProductCover& cover, std::size_t member);
double cover_diameter(const ProductCover& cover);

struct NagataReport {
  std::size_t q = 1;
  std::size_t base_multiplicity = 0;
  bool base_exact = false;
  std::size_t bound = 0;  // base_multiplicity^Q
  std::size_t product_multiplicity = 0;
  std::size_t product_members = 0;
  std::size_t probes = 0;
  bool coverage_ok = true;
  bool non_vacuous = false;  // some probe met >= 2 members
  std::vector<std::size_t> per_probe;

  bool passed() const {
    return coverage_ok && product_multiplicity <= bound;
  }
};

// Probes Q_Q(ground set) with families of QPoints of S-diameter <= s (all
// within s/2 of a seeded random center) and counts the product members
// each family meets. `declared_multiplicity` overrides the computed base
// multiplicity.
NagataReport verify_nagata_bound(
    const Cover& base, std::size_t q, const ProbeStrategy& probes = {},
    std::optional<std::size_t> declared_multiplicity = std::nullopt,
    std::size_t cap = kProductMemberCap);

}  // namespace qvalued
