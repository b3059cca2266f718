#include "qvalued/nagata.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>

#include "qvalued/error.hpp"

namespace qvalued {
namespace {

constexpr std::size_t kBoxMemberCap = 10000000;
constexpr std::size_t kExhaustiveCombos = 256;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double tile_start(const Grid& g, std::size_t axis, std::size_t k) {
  return g.origin[axis] + static_cast<double>(k) * g.width;
}

// Tile index of coordinate v along an axis, or nullopt outside the tiling.
std::optional<std::size_t> tile_of(const Grid& g, std::size_t axis, double v) {
  const std::size_t n = g.counts[axis];
  if (v < tile_start(g, axis, 0) || !(v < tile_start(g, axis, n))) {
    return std::nullopt;
  }
  const double guess = std::floor((v - g.origin[axis]) / g.width);
  std::size_t k = static_cast<std::size_t>(
      std::clamp(guess, 0.0, static_cast<double>(n - 1)));
  while (k > 0 && v < tile_start(g, axis, k)) --k;
  while (k + 1 < n && !(v < tile_start(g, axis, k + 1))) ++k;
  return k;
}

std::optional<std::size_t> grid_member(const Cover& cover,
                                       std::span<const double> p) {
  const Grid& g = *cover.grid;
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (p[a] < cover.range_lo[a] || p[a] > cover.range_hi[a]) return std::nullopt;
  }
  std::size_t index = 0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    const auto k = tile_of(g, a, p[a]);
    if (!k) return std::nullopt;
    index = index * g.counts[a] + *k;
  }
  return index;
}

// Largest number of tiles of one axis met by a closed interval of length
// <= s inside [lo, hi]. The count only grows when the right end reaches a
// tile start, so those are the critical positions.
std::size_t axis_multiplicity(const Grid& g, std::size_t axis, double lo,
                              double hi, double s) {
  const std::size_t n = g.counts[axis];
  std::vector<double> starts(n + 1);
  for (std::size_t k = 0; k <= n; ++k) starts[k] = tile_start(g, axis, k);

  auto met = [&](double a, double b) -> std::size_t {
    const double left = std::max(a, lo);
    const double right = std::min(b, hi);
    if (left > right) return 0;
    // first tile whose end exceeds `left`, last tile whose start <= `right`
    const auto first = std::upper_bound(starts.begin() + 1, starts.end(), left);
    const auto last = std::upper_bound(starts.begin(), starts.end() - 1, right);
    const std::ptrdiff_t i0 = first - (starts.begin() + 1);
    const std::ptrdiff_t i1 = (last - starts.begin()) - 1;
    return i1 >= i0 ? static_cast<std::size_t>(i1 - i0 + 1) : 0;
  };

  std::vector<double> rights(starts.begin(), starts.end() - 1);
  rights.push_back(hi);
  std::size_t best = 0;
  for (double b : rights) {
    if (b > hi) continue;
    double a = b - s;
    while (b - a > s) a = std::nextafter(a, b);
    best = std::max(best, met(a, b));
  }
  return best;
}

Point clamp_to_range(const Cover& cover, Point p) {
  for (std::size_t a = 0; a < p.size(); ++a) {
    p[a] = std::clamp(p[a], cover.range_lo[a], cover.range_hi[a]);
  }
  return p;
}

Point uniform_in_range(const Cover& cover, std::mt19937_64& rng) {
  Point p(cover.space.dim);
  for (std::size_t a = 0; a < p.size(); ++a) {
    std::uniform_real_distribution<double> u(cover.range_lo[a],
                                             cover.range_hi[a]);
    p[a] = u(rng);
  }
  return p;
}

// A point within `radius` of `center` (rejection sampling from the cube).
Point perturb(const Space& space, const Point& center, double radius,
              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-radius, radius);
  for (;;) {
    Point p = center;
    for (double& v : p) v += u(rng);
    if (distance(space, center, p) <= radius) return p;
  }
}

// Points at distance exactly `radius` from the center along each axis.
std::vector<Point> axis_extremes(const Point& center, double radius) {
  std::vector<Point> out;
  for (std::size_t a = 0; a < center.size(); ++a) {
    for (double sign : {-1.0, 1.0}) {
      Point p = center;
      p[a] += sign * radius;
      out.push_back(std::move(p));
    }
  }
  return out;
}

// Neighbours of a center the probe may use: the center, axis extremes and
// random perturbations, all clamped into the ground set. Clamping is
// coordinatewise and does not increase distances in any supported norm.
std::vector<Point> probe_neighbourhood(const Cover& cover, const Point& center,
                                       double radius, std::size_t extra,
                                       std::mt19937_64& rng) {
  std::vector<Point> out{center};
  for (Point& p : axis_extremes(center, radius)) {
    p = clamp_to_range(cover, std::move(p));
    if (distance(cover.space, center, p) <= radius) out.push_back(std::move(p));
  }
  for (std::size_t k = 0; k < extra; ++k) {
    out.push_back(
        clamp_to_range(cover, perturb(cover.space, center, radius, rng)));
  }
  return out;
}

std::vector<std::size_t> samples_within(const Cover& cover,
                                        const Point& center, double radius) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < cover.samples.size(); ++k) {
    if (distance(cover.space, cover.samples[k], center) <= radius) {
      out.push_back(k);
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> sample_member_table(const Cover& cover) {
  std::vector<std::vector<std::size_t>> table(cover.samples.size());
  for (std::size_t k = 0; k < cover.samples.size(); ++k) {
    table[k] = members_containing(cover, cover.samples[k]);
  }
  return table;
}

std::size_t saturating_pow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > std::numeric_limits<std::size_t>::max() / base) {
      return std::numeric_limits<std::size_t>::max();
    }
    out *= base;
  }
  return out;
}

void check_scale(double c, double s) {
  if (!(s > 0.0)) throw ParameterRange("scale s must be > 0");
  if (!(c > 0.0)) throw ParameterRange("constant c must be > 0");
}

}  // namespace

bool member_contains(const Cover& cover, std::size_t member,
                     std::span<const double> p) {
  check_dim(cover.space, p);
  return std::visit(
      Overloaded{
          [&](const Interval& iv) { return iv.lo <= p[0] && p[0] < iv.hi; },
          [&](const Box& b) {
            for (std::size_t a = 0; a < p.size(); ++a) {
              if (!(b.lo[a] <= p[a] && p[a] < b.hi[a])) return false;
            }
            return true;
          },
          [&](const Ball& b) {
            return distance(cover.space, b.center, p) <= b.radius;
          },
          [&](const IndexSet& set) {
            return std::any_of(set.indices.begin(), set.indices.end(),
                               [&](std::size_t k) {
                                 return distance(cover.space, cover.samples[k],
                                                 p) == 0.0;
                               });
          }},
      cover.members.at(member));
}

std::vector<std::size_t> members_containing(const Cover& cover,
                                            std::span<const double> p) {
  if (cover.grid) {
    const auto k = grid_member(cover, p);
    if (k) return {*k};
    return {};
  }
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < cover.members.size(); ++k) {
    if (member_contains(cover, k, p)) out.push_back(k);
  }
  return out;
}

Cover interval_cover(double c, double s, double lo, double hi) {
  check_scale(c, s);
  if (c < 3.0) {
    throw ParameterRange(
        "interval cover needs c >= 3 for its multiplicity guarantee");
  }
  if (!(lo < hi)) throw ParameterRange("interval cover needs lo < hi");
  const double width = c * s;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / width)) + 1;
  if (n > kBoxMemberCap) throw CapExceeded("interval cover has too many tiles");

  Cover cover;
  cover.space = Space{1, Norm::kEuclidean};
  cover.c = c;
  cover.s = s;
  cover.range_lo = {lo};
  cover.range_hi = {hi};
  cover.grid = Grid{{lo}, width, {n}};
  for (std::size_t k = 0; k < n; ++k) {
    cover.members.emplace_back(Interval{tile_start(*cover.grid, 0, k),
                                        tile_start(*cover.grid, 0, k + 1)});
  }
  return cover;
}

Cover box_cover(double c, double s, const Point& lo, const Point& hi,
                Norm norm) {
  check_scale(c, s);
  if (c < 3.0) {
    throw ParameterRange("box cover needs c >= 3 for its multiplicity guarantee");
  }
  if (lo.empty() || lo.size() != hi.size()) {
    throw DimensionMismatch("box cover corners differ in dimension");
  }
  const std::size_t dim = lo.size();
  const double width = c * s;
  Grid grid{lo, width, {}};
  std::size_t total = 1;
  for (std::size_t a = 0; a < dim; ++a) {
    if (!(lo[a] < hi[a])) throw ParameterRange("box cover needs lo < hi");
    const auto n = static_cast<std::size_t>(std::floor((hi[a] - lo[a]) / width)) + 1;
    grid.counts.push_back(n);
    if (n > kBoxMemberCap / total) {
      throw CapExceeded("box cover has too many tiles");
    }
    total *= n;
  }

  Cover cover;
  cover.space = Space{dim, norm};
  cover.c = c;
  cover.s = s;
  cover.range_lo = lo;
  cover.range_hi = hi;
  // Row-major, last axis fastest, matching grid_member.
  std::vector<std::size_t> idx(dim, 0);
  for (std::size_t m = 0; m < total; ++m) {
    Box b{Point(dim), Point(dim)};
    for (std::size_t a = 0; a < dim; ++a) {
      b.lo[a] = tile_start(grid, a, idx[a]);
      b.hi[a] = tile_start(grid, a, idx[a] + 1);
    }
    cover.members.emplace_back(std::move(b));
    for (std::size_t a = dim; a-- > 0;) {
      if (++idx[a] < grid.counts[a]) break;
      idx[a] = 0;
    }
  }
  cover.grid = std::move(grid);
  return cover;
}

Cover sample_cover(const Space& space, std::vector<Point> samples, double c,
                   double s) {
  check_scale(c, s);
  if (samples.empty()) throw InputError("sample cover needs samples");
  const double radius = 0.5 * c * s;

  Cover cover;
  cover.space = space;
  cover.c = c;
  cover.s = s;
  cover.samples = std::move(samples);
  cover.range_lo = cover.samples.front();
  cover.range_hi = cover.samples.front();
  for (const Point& p : cover.samples) {
    check_dim(space, p);
    for (std::size_t a = 0; a < p.size(); ++a) {
      cover.range_lo[a] = std::min(cover.range_lo[a], p[a]);
      cover.range_hi[a] = std::max(cover.range_hi[a], p[a]);
    }
  }

  std::vector<std::size_t> centers;
  for (std::size_t k = 0; k < cover.samples.size(); ++k) {
    const bool near = std::any_of(centers.begin(), centers.end(), [&](std::size_t c0) {
      return distance(space, cover.samples[c0], cover.samples[k]) <= radius;
    });
    if (!near) centers.push_back(k);
  }
  for (std::size_t c0 : centers) {
    cover.members.emplace_back(
        IndexSet{samples_within(cover, cover.samples[c0], radius)});
  }
  return cover;
}

double member_diameter(const Cover& cover, std::size_t member) {
  return std::visit(
      Overloaded{
          [&](const Interval& iv) { return iv.hi - iv.lo; },
          [&](const Box& b) {
            Point side(b.lo.size());
            for (std::size_t a = 0; a < side.size(); ++a) side[a] = b.hi[a] - b.lo[a];
            return norm(cover.space, side);
          },
          [&](const Ball& b) { return 2.0 * b.radius; },
          [&](const IndexSet& set) {
            if (set.indices.empty()) throw InputError("cover has an empty member");
            double d = 0.0;
            for (std::size_t i = 0; i < set.indices.size(); ++i) {
              for (std::size_t j = i + 1; j < set.indices.size(); ++j) {
                d = std::max(d, distance(cover.space,
                                         cover.samples[set.indices[i]],
                                         cover.samples[set.indices[j]]));
              }
            }
            return d;
          }},
      cover.members.at(member));
}

double cover_diameter(const Cover& cover) {
  double d = 0.0;
  for (std::size_t k = 0; k < cover.members.size(); ++k) {
    d = std::max(d, member_diameter(cover, k));
  }
  return d;
}

MultiplicityResult s_multiplicity(const Cover& cover, double s,
                                  const ProbeStrategy& probes) {
  if (!(s > 0.0)) throw ParameterRange("s-multiplicity needs s > 0");
  MultiplicityResult result;

  if (cover.grid &&
      (cover.space.dim == 1 || cover.space.norm == Norm::kSup)) {
    // A set of diameter <= s projects onto intervals of length <= s, and
    // under the sup norm the product of those intervals is itself a probe.
    result.value = 1;
    for (std::size_t a = 0; a < cover.space.dim; ++a) {
      result.value *= axis_multiplicity(*cover.grid, a, cover.range_lo[a],
                                        cover.range_hi[a], s);
    }
    result.exact = true;
    return result;
  }

  if (probes.probes == 0) throw InputError("no probes generated");
  std::mt19937_64 rng(probes.seed);
  const double radius = 0.5 * s;

  if (!cover.samples.empty()) {
    const auto table = sample_member_table(cover);
    std::uniform_int_distribution<std::size_t> pick(0, cover.samples.size() - 1);
    for (std::size_t k = 0; k < probes.probes; ++k) {
      std::vector<std::size_t> probe;
      if (k % 2 == 0) {
        probe = samples_within(cover, cover.samples[pick(rng)], radius);
      } else {
        // random subset of diameter <= s grown from a random sample
        probe.push_back(pick(rng));
        for (std::size_t t = 0; t < probes.points_per_probe; ++t) {
          const std::size_t cand = pick(rng);
          const bool fits = std::all_of(probe.begin(), probe.end(), [&](std::size_t m) {
            return distance(cover.space, cover.samples[m], cover.samples[cand]) <= s;
          });
          if (fits) probe.push_back(cand);
        }
      }
      std::set<std::size_t> met;
      for (std::size_t idx : probe) met.insert(table[idx].begin(), table[idx].end());
      result.per_probe.push_back(met.size());
      result.value = std::max(result.value, met.size());
    }
    return result;
  }

  for (std::size_t k = 0; k < probes.probes; ++k) {
    const Point center = uniform_in_range(cover, rng);
    std::set<std::size_t> met;
    for (const Point& p : probe_neighbourhood(cover, center, radius,
                                              probes.points_per_probe, rng)) {
      const auto ms = members_containing(cover, p);
      met.insert(ms.begin(), ms.end());
    }
    result.per_probe.push_back(met.size());
    result.value = std::max(result.value, met.size());
  }
  return result;
}

std::size_t multiset_count(std::size_t n, std::size_t q) {
  if (n == 0) return q == 0 ? 1 : 0;
  // C(n + i - 1, i) = C(n + i - 2, i - 1) (n + i - 1) / i, exact at each step.
  unsigned __int128 acc = 1;
  const auto limit =
      static_cast<unsigned __int128>(std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 1; i <= q; ++i) {
    acc = acc * (n + i - 1) / i;
    if (acc > limit) return std::numeric_limits<std::size_t>::max();
  }
  return static_cast<std::size_t>(acc);
}

ProductCover product_cover(const Cover& base, std::size_t q, std::size_t cap) {
  if (q < 1) throw ParameterRange("product cover needs Q >= 1");
  const std::size_t n = base.members.size();
  if (n == 0) throw InputError("product cover of an empty cover");
  const std::size_t count = multiset_count(n, q);
  if (count > cap) {
    throw CapExceeded("product cover would have " +
                      (count == std::numeric_limits<std::size_t>::max()
                           ? std::string("more than 2^64")
                           : std::to_string(count)) +
                      " members (cap " + std::to_string(cap) +
                      "); coarsen the base cover or shrink its range");
  }

  ProductCover pc;
  pc.base = base;
  pc.q = q;
  pc.members.reserve(count);
  std::vector<std::size_t> idx(q, 0);
  for (;;) {
    pc.lookup.emplace(idx, pc.members.size());
    pc.members.push_back(idx);
    // next nondecreasing sequence
    std::size_t pos = q;
    while (pos > 0 && idx[pos - 1] == n - 1) --pos;
    if (pos == 0) break;
    const std::size_t v = idx[pos - 1] + 1;
    for (std::size_t t = pos - 1; t < q; ++t) idx[t] = v;
  }
  return pc;
}

bool product_member_contains(const ProductCover& cover, std::size_t member,
                             const QPoint& x) {
  if (x.q() != cover.q) throw QMismatch("QPoint and product cover differ in Q");
  const auto& slots = cover.members.at(member);
  std::vector<std::vector<std::size_t>> adj(x.q());
  for (std::size_t j = 0; j < x.q(); ++j) {
    for (std::size_t t = 0; t < slots.size(); ++t) {
      if (member_contains(cover.base, slots[t], x[j])) adj[j].push_back(t);
    }
  }
  return max_bipartite_matching(adj, slots.size()) == x.q();
}

std::vector<std::size_t> product_members_containing(const ProductCover& cover,
                                                    const QPoint& x) {
  if (x.q() != cover.q) throw QMismatch("QPoint and product cover differ in Q");
  std::vector<std::vector<std::size_t>> choices;
  for (const Point& p : x.points()) {
    choices.push_back(members_containing(cover.base, p));
    if (choices.back().empty()) return {};
  }
  std::set<std::size_t> out;
  std::vector<std::size_t> pick(x.q(), 0);
  for (;;) {
    std::vector<std::size_t> key(x.q());
    for (std::size_t j = 0; j < x.q(); ++j) key[j] = choices[j][pick[j]];
    std::sort(key.begin(), key.end());
    out.insert(cover.lookup.at(key));
    std::size_t j = 0;
    while (j < x.q() && ++pick[j] == choices[j].size()) pick[j++] = 0;
    if (j == x.q()) break;
  }
  return {out.begin(), out.end()};
}

double product_member_diameter(const ProductCover& cover, std::size_t member) {
  double d = 0.0;
  for (std::size_t i : cover.members.at(member)) {
    d = std::max(d, member_diameter(cover.base, i));
  }
  return d;
}

double cover_diameter(const ProductCover& cover) {
  // Every member's bound is attained by a diagonal member {i, ..., i}.
  return cover_diameter(cover.base);
}

NagataReport verify_nagata_bound(const Cover& base, std::size_t q,
                                 const ProbeStrategy& probes,
                                 std::optional<std::size_t> declared_multiplicity,
                                 std::size_t cap) {
  const ProductCover pc = product_cover(base, q, cap);
  if (probes.probes == 0) throw InputError("no probes generated");

  NagataReport report;
  report.q = q;
  report.product_members = pc.size();
  if (declared_multiplicity) {
    report.base_multiplicity = *declared_multiplicity;
  } else {
    const auto m = s_multiplicity(base, base.s, probes);
    report.base_multiplicity = m.value;
    report.base_exact = m.exact;
  }
  report.bound = saturating_pow(report.base_multiplicity, q);

  std::mt19937_64 rng(probes.seed ^ 0x9e3779b97f4a7c15ULL);
  const double radius = 0.5 * base.s;
  const bool use_samples = !base.samples.empty();
  std::uniform_int_distribution<std::size_t> pick(
      0, use_samples ? base.samples.size() - 1 : 0);

  for (std::size_t k = 0; k < probes.probes; ++k) {
    // Per-coordinate candidate points, each within s/2 of its center, so
    // any two QPoints of the probe are within s under the identity matching.
    std::vector<std::vector<Point>> candidates(q);
    for (std::size_t j = 0; j < q; ++j) {
      if (use_samples) {
        const Point& c0 = base.samples[pick(rng)];
        for (std::size_t idx : samples_within(base, c0, radius)) {
          candidates[j].push_back(base.samples[idx]);
        }
      } else {
        candidates[j] = probe_neighbourhood(base, uniform_in_range(base, rng),
                                            radius, 0, rng);
      }
    }

    std::vector<QPoint> family;
    std::size_t combos = 1;
    for (const auto& c : candidates) {
      combos = combos > kExhaustiveCombos ? combos : combos * c.size();
    }
    if (combos <= kExhaustiveCombos) {
      std::vector<std::size_t> sel(q, 0);
      for (;;) {
        std::vector<Point> pts(q);
        for (std::size_t j = 0; j < q; ++j) pts[j] = candidates[j][sel[j]];
        family.emplace_back(base.space, std::move(pts));
        std::size_t j = 0;
        while (j < q && ++sel[j] == candidates[j].size()) sel[j++] = 0;
        if (j == q) break;
      }
    }
    for (std::size_t t = 0; t < probes.points_per_probe; ++t) {
      std::vector<Point> pts(q);
      for (std::size_t j = 0; j < q; ++j) {
        std::uniform_int_distribution<std::size_t> u(0, candidates[j].size() - 1);
        if (use_samples) {
          pts[j] = candidates[j][u(rng)];
        } else {
          pts[j] = clamp_to_range(
              base, perturb(base.space, candidates[j].front(), radius, rng));
        }
      }
      family.emplace_back(base.space, std::move(pts));
    }

    std::set<std::size_t> met;
    for (const QPoint& x : family) {
      const auto ms = product_members_containing(pc, x);
      if (ms.empty()) report.coverage_ok = false;
      met.insert(ms.begin(), ms.end());
    }
    report.per_probe.push_back(met.size());
    report.product_multiplicity = std::max(report.product_multiplicity, met.size());
  }
  report.probes = probes.probes;
  report.non_vacuous = report.product_multiplicity >= 2;
  return report;
}

}  // namespace qvalued
