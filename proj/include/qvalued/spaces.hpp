#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qvalued {

using Point = std::vector<double>;

enum class Norm { kEuclidean, kSup, kOne };

std::string_view norm_name(Norm norm);
Norm parse_norm(std::string_view name);

// A finite-dimensional normed space R^dim with one of the supported norms.
struct Space {
  std::size_t dim = 1;
  Norm norm = Norm::kEuclidean;

  friend bool operator==(const Space&, const Space&) = default;
};

// Norm of x in the given space. Throws DimensionMismatch if x has the
// wrong length.
double norm(const Space& space, std::span<const double> x);

// d(x, y) = |x - y|.
double distance(const Space& space, std::span<const double> x,
                std::span<const double> y);

void check_dim(const Space& space, std::span<const double> x);

// A geodesic bicombing: for every ordered pair (x, y) a unit-speed curve
// c_xy : [0, d(x, y)] -> Y. `rule` receives the pair, the parameter t and
// the precomputed length d(x, y); it is only called with 0 < t < d(x, y),
// endpoints are answered exactly by geodesic_eval.
struct Bicombing {
  using Rule = std::function<Point(std::span<const double> x,
                                   std::span<const double> y, double t,
                                   double length)>;

  Space space;
  double gamma = 1.0;
  std::string name;
  Rule rule;
};

// The straight-line bicombing c_xy(t) = x + (t / d(x, y)) (y - x), which is
// 1-weakly convex for every norm.
Bicombing linear_bicombing(const Space& space);

// c_xy(t). Throws ParameterRange unless 0 <= t <= d(x, y). For x == y the
// geodesic is the constant curve on {0}.
Point geodesic_eval(const Bicombing& b, std::span<const double> x,
                    std::span<const double> y, double t);

struct Triple {
  Point x, y, z;
};

struct WeakConvexityReport {
  double gamma = 1.0;
  double tolerance = 1e-9;
  // Minimum over all triples and t of
  //   gamma t d(y, z) - d(c_xy(t d(x, y)), c_xz(t d(x, z))).
  double min_slack = 0.0;
  std::size_t worst_triple = 0;
  double worst_t = 0.0;
  std::size_t evaluations = 0;
  bool passed = false;
};

WeakConvexityReport verify_weak_convexity(const Bicombing& b, double gamma,
                                          std::span<const Triple> triples,
                                          std::span<const double> ts,
                                          double tolerance = 1e-9);

// Seeded triples with coordinates uniform in [-scale, scale].
std::vector<Triple> random_triples(const Space& space, std::size_t count,
                                   std::uint64_t seed, double scale = 1.0);

}  // namespace qvalued
