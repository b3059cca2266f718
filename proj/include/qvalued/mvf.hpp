#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qvalued/qspace.hpp"
#include "qvalued/spaces.hpp"

namespace qvalued {

enum class MeshKind { kSphere, kBall, kExplicit };

// Points of a domain in R^{m+1}. Ball meshes keep the origin at index 0
// followed by `boundary_count` points of the unit sphere.
struct Mesh {
  MeshKind kind = MeshKind::kExplicit;
  int m = 1;
  std::uint64_t seed = 0;
  std::vector<Point> points;
  std::size_t boundary_count = 0;

  Space space() const { return Space{static_cast<std::size_t>(m) + 1, Norm::kEuclidean}; }
  std::size_t size() const { return points.size(); }
};

// m = 1: N equally spaced angles starting at (1, 0), seed ignored.
// m >= 2: N normalized Gaussian draws.
Mesh sample_sphere(int m, std::size_t n, std::uint64_t seed);

// Origin, a boundary shell of about a quarter of the points, and interior
// points with radius distributed like a uniform draw from the ball.
Mesh sample_ball(int m, std::size_t n, std::uint64_t seed);

// Origin plus the sphere mesh scaled to radii k / rings, k = 1..rings.
Mesh radial_ball_mesh(const Mesh& sphere, std::size_t rings);

// A multiple-valued function X -> Q_Q(Y), either given by a closed-form
// evaluator or by a table of samples.
class SampledMVF {
 public:
  using Evaluator = std::function<QPoint(std::span<const double>)>;

  SampledMVF(std::string name, Space domain, Space target, std::size_t q,
             Evaluator evaluator);

  static SampledMVF from_table(std::string name, Space domain, Space target,
                               std::vector<Point> xs,
                               std::vector<QPoint> values);

  const std::string& name() const { return name_; }
  const Space& domain() const { return domain_; }
  const Space& target() const { return target_; }
  std::size_t q() const { return q_; }

  bool is_table() const { return !table_x_.empty(); }
  const std::vector<Point>& table_points() const { return table_x_; }
  const std::vector<QPoint>& table_values() const { return table_v_; }

  // f(x). For tables, x must match a sample point within 1e-9.
  QPoint operator()(std::span<const double> x) const;

 private:
  std::string name_;
  Space domain_;
  Space target_;
  std::size_t q_ = 1;
  Evaluator evaluator_;
  std::vector<Point> table_x_;
  std::vector<QPoint> table_v_;
};

struct PairSample {
  std::size_t i = 0;
  std::size_t j = 0;
  double domain_distance = 0.0;
  double target_distance = 0.0;
};

using PairSink = std::function<void(const PairSample&)>;

inline constexpr std::size_t kAllPairsLimit = 1500;

// Empirical Lipschitz constant: max of S(f(x), f(y)) / |x - y| over all
// pairs when the mesh has fewer than kAllPairsLimit points, otherwise over
// `pairs` seeded random pairs (a longer budget extends the same sequence).
double lipschitz_estimate(const SampledMVF& f, const Mesh& mesh,
                          std::size_t pairs, std::uint64_t seed,
                          const PairSink& sink = {});

// Same estimator over precomputed values.
double lipschitz_estimate(const Space& domain, std::span<const Point> xs,
                          std::span<const QPoint> values, std::size_t pairs,
                          std::uint64_t seed, const PairSink& sink = {});

// Fixtures on S^1 with targets in the plane.
SampledMVF fixture_half_angle();
SampledMVF fixture_split_pair();
SampledMVF fixture_identity_circle();
SampledMVF fixture_constant3();
// Q = 3 with one branch near the origin and two near (100, 0).
SampledMVF fixture_two_cluster();

std::vector<std::string> fixture_names();
SampledMVF fixture_by_name(const std::string& name);

struct Monodromy {
  // permutation[i] = index (in the representation at the base point) of
  // the branch reached by continuing branch i around the loop.
  std::vector<std::size_t> permutation;
  double max_displacement = 0.0;
  double min_second_best = 0.0;
};

// Tracks the branches of f along theta = 0 .. 2 pi * loops in
// steps * loops increments by chaining optimal matchings. Throws
// ContinuationAmbiguity when some competing assignment is not more than
// twice the largest step displacement away.
Monodromy branch_monodromy(const SampledMVF& f, std::size_t steps,
                           std::size_t loops = 1);

bool is_identity(std::span<const std::size_t> permutation);

}  // namespace qvalued
