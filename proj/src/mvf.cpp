#include "qvalued/mvf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "qvalued/error.hpp"

namespace qvalued {
namespace {

constexpr double kTableMatchTol = 1e-9;

Point normalized(Point p) {
  double n = 0.0;
  for (double v : p) n += v * v;
  n = std::sqrt(n);
  for (double& v : p) v /= n;
  return p;
}

Point gaussian_direction(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    Point p(dim);
    double n2 = 0.0;
    for (double& v : p) {
      v = normal(rng);
      n2 += v * v;
    }
    if (n2 > 1e-24) return normalized(std::move(p));
  }
}

Point circle_point(double theta) { return {std::cos(theta), std::sin(theta)}; }

const Space kPlane{2, Norm::kEuclidean};

}  // namespace

Mesh sample_sphere(int m, std::size_t n, std::uint64_t seed) {
  if (m < 1) throw ParameterRange("sphere dimension m must be >= 1");
  if (n < 2) throw ParameterRange("sphere mesh needs N >= 2 points");
  Mesh mesh;
  mesh.kind = MeshKind::kSphere;
  mesh.m = m;
  mesh.seed = seed;
  mesh.points.reserve(n);
  if (m == 1) {
    for (std::size_t k = 0; k < n; ++k) {
      mesh.points.push_back(circle_point(2.0 * std::numbers::pi *
                                         static_cast<double>(k) /
                                         static_cast<double>(n)));
    }
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < n; ++k) {
      mesh.points.push_back(gaussian_direction(rng, static_cast<std::size_t>(m) + 1));
    }
  }
  mesh.boundary_count = n;
  return mesh;
}

Mesh sample_ball(int m, std::size_t n, std::uint64_t seed) {
  if (m < 1) throw ParameterRange("ball dimension m must be >= 1");
  if (n < 1) throw ParameterRange("ball mesh needs N >= 1 points");
  const std::size_t dim = static_cast<std::size_t>(m) + 1;
  Mesh mesh;
  mesh.kind = MeshKind::kBall;
  mesh.m = m;
  mesh.seed = seed;
  mesh.points.reserve(n);
  mesh.points.emplace_back(dim, 0.0);
  if (n == 1) return mesh;

  const std::size_t shell = std::max<std::size_t>(1, (n - 1) / 4);
  if (m == 1) {
    for (std::size_t k = 0; k < shell; ++k) {
      mesh.points.push_back(circle_point(2.0 * std::numbers::pi *
                                         static_cast<double>(k) /
                                         static_cast<double>(shell)));
    }
  }
  std::mt19937_64 rng(seed);
  if (m != 1) {
    for (std::size_t k = 0; k < shell; ++k) {
      mesh.points.push_back(gaussian_direction(rng, dim));
    }
  }
  mesh.boundary_count = shell;

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (mesh.points.size() < n) {
    Point p = gaussian_direction(rng, dim);
    const double r = std::pow(unit(rng), 1.0 / static_cast<double>(dim));
    for (double& v : p) v *= r;
    mesh.points.push_back(std::move(p));
  }
  return mesh;
}

Mesh radial_ball_mesh(const Mesh& sphere, std::size_t rings) {
  if (rings < 1) throw ParameterRange("radial mesh needs at least one ring");
  Mesh mesh;
  mesh.kind = MeshKind::kBall;
  mesh.m = sphere.m;
  mesh.seed = sphere.seed;
  mesh.points.emplace_back(sphere.space().dim, 0.0);
  // Outermost ring first so the boundary shell follows the origin.
  for (std::size_t k = rings; k >= 1; --k) {
    const double r = static_cast<double>(k) / static_cast<double>(rings);
    for (const Point& p : sphere.points) {
      Point q = p;
      if (k != rings) {
        for (double& v : q) v *= r;
      }
      mesh.points.push_back(std::move(q));
    }
  }
  mesh.boundary_count = sphere.points.size();
  return mesh;
}

SampledMVF::SampledMVF(std::string name, Space domain, Space target,
                       std::size_t q, Evaluator evaluator)
    : name_(std::move(name)),
      domain_(domain),
      target_(target),
      q_(q),
      evaluator_(std::move(evaluator)) {
  if (q_ < 1) throw InputError("multiple-valued function needs Q >= 1");
}

SampledMVF SampledMVF::from_table(std::string name, Space domain,
                                  Space target, std::vector<Point> xs,
                                  std::vector<QPoint> values) {
  if (xs.empty()) throw InputError("sample table is empty");
  if (xs.size() != values.size()) {
    throw InputError("sample table has " + std::to_string(xs.size()) +
                     " domain points but " + std::to_string(values.size()) +
                     " values");
  }
  const std::size_t q = values.front().q();
  for (const Point& x : xs) check_dim(domain, x);
  for (const QPoint& v : values) {
    if (v.q() != q) throw QMismatch("sample table values differ in Q");
    if (!(v.space() == target)) {
      throw DimensionMismatch("sample table value outside the target space");
    }
  }
  SampledMVF f(std::move(name), domain, target, q, {});
  f.table_x_ = std::move(xs);
  f.table_v_ = std::move(values);
  return f;
}

QPoint SampledMVF::operator()(std::span<const double> x) const {
  check_dim(domain_, x);
  if (is_table()) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < table_x_.size(); ++k) {
      const double d = distance(domain_, table_x_[k], x);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    if (best_d > kTableMatchTol) {
      throw InputError("sample table '" + name_ +
                       "' has no value at the requested point");
    }
    return table_v_[best];
  }
  QPoint v = evaluator_(x);
  if (v.q() != q_ || !(v.space() == target_)) {
    throw InputError("evaluator of '" + name_ +
                     "' returned a value of the wrong shape");
  }
  return v;
}

double lipschitz_estimate(const Space& domain, std::span<const Point> xs,
                          std::span<const QPoint> values, std::size_t pairs,
                          std::uint64_t seed, const PairSink& sink) {
  if (xs.size() != values.size()) {
    throw InputError("lipschitz_estimate: points and values differ in size");
  }
  if (xs.size() < 2) throw InputError("lipschitz_estimate needs >= 2 points");
  bool distinct = false;
  for (std::size_t k = 1; k < xs.size() && !distinct; ++k) {
    distinct = distance(domain, xs[0], xs[k]) > 0.0;
  }
  if (!distinct) throw InputError("lipschitz_estimate: all mesh points equal");

  double best = 0.0;
  auto visit = [&](std::size_t i, std::size_t j) {
    const double dx = distance(domain, xs[i], xs[j]);
    if (dx == 0.0) return;
    const double dy = s_metric_bottleneck(values[i], values[j]);
    if (sink) sink(PairSample{i, j, dx, dy});
    best = std::max(best, dy / dx);
  };

  const std::size_t n = xs.size();
  if (n < kAllPairsLimit) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) visit(i, j);
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> index(0, n - 1);
    for (std::size_t k = 0; k < pairs; ++k) {
      const std::size_t i = index(rng);
      const std::size_t j = index(rng);
      if (i != j) visit(i, j);
    }
  }
  return best;
}

double lipschitz_estimate(const SampledMVF& f, const Mesh& mesh,
                          std::size_t pairs, std::uint64_t seed,
                          const PairSink& sink) {
  std::vector<QPoint> values;
  values.reserve(mesh.size());
  for (const Point& x : mesh.points) values.push_back(f(x));
  return lipschitz_estimate(f.domain(), mesh.points, values, pairs, seed,
                            sink);
}

SampledMVF fixture_half_angle() {
  return SampledMVF("half-angle", kPlane, kPlane, 2,
                    [](std::span<const double> x) {
                      const double half = 0.5 * std::atan2(x[1], x[0]);
                      const double c = std::cos(half), s = std::sin(half);
                      return QPoint(kPlane, {{c, s}, {-c, -s}});
                    });
}

SampledMVF fixture_split_pair() {
  return SampledMVF("split-pair", kPlane, kPlane, 2,
                    [](std::span<const double> x) {
                      return QPoint(kPlane, {{x[0], x[1]}, {-x[0], -x[1]}});
                    });
}

SampledMVF fixture_identity_circle() {
  return SampledMVF("identity-circle", kPlane, kPlane, 1,
                    [](std::span<const double> x) {
                      return QPoint(kPlane, {{x[0], x[1]}});
                    });
}

SampledMVF fixture_constant3() {
  return SampledMVF("constant-3", kPlane, kPlane, 3,
                    [](std::span<const double>) {
                      return QPoint(kPlane, {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
                    });
}

SampledMVF fixture_two_cluster() {
  return SampledMVF(
      "two-cluster", kPlane, kPlane, 3, [](std::span<const double> x) {
        return QPoint(kPlane, {{0.5 * x[0], 0.5 * x[1]},
                               {100.0 + 0.5 * x[0], 0.5 * x[1]},
                               {100.0 - 0.5 * x[1], 0.5 * x[0]}});
      });
}

std::vector<std::string> fixture_names() {
  return {"half-angle", "split-pair", "identity-circle", "constant-3",
          "two-cluster"};
}

SampledMVF fixture_by_name(const std::string& name) {
  if (name == "half-angle") return fixture_half_angle();
  if (name == "split-pair") return fixture_split_pair();
  if (name == "identity-circle") return fixture_identity_circle();
  if (name == "constant-3") return fixture_constant3();
  if (name == "two-cluster") return fixture_two_cluster();
  std::string known;
  for (const auto& n : fixture_names()) known += (known.empty() ? "" : ", ") + n;
  throw InputError("unknown fixture '" + name + "' (known: " + known + ")");
}

Monodromy branch_monodromy(const SampledMVF& f, std::size_t steps,
                           std::size_t loops) {
  if (f.domain().dim != 2) {
    throw InputError("branch_monodromy needs a function on S^1");
  }
  if (steps < 2) throw ParameterRange("branch_monodromy needs >= 2 steps");
  if (loops < 1) throw ParameterRange("branch_monodromy needs >= 1 loop");

  auto at = [&](std::size_t k) {
    // Every multiple of `steps` is the base point (1, 0) exactly.
    const std::size_t r = k % steps;
    return f(circle_point(2.0 * std::numbers::pi * static_cast<double>(r) /
                          static_cast<double>(steps)));
  };

  Monodromy out;
  out.permutation.resize(f.q());
  for (std::size_t i = 0; i < f.q(); ++i) out.permutation[i] = i;
  out.min_second_best = std::numeric_limits<double>::infinity();

  QPoint current = at(0);
  for (std::size_t k = 1; k <= steps * loops; ++k) {
    QPoint next = at(k);
    const Matching step = optimal_permutation(current, next);
    out.max_displacement = std::max(out.max_displacement, step.value);
    out.min_second_best = std::min(out.min_second_best,
                                   second_best_cost(current, next, step.sigma));
    for (std::size_t& p : out.permutation) p = step.sigma[p];
    current = std::move(next);
  }

  if (!(out.min_second_best > 2.0 * out.max_displacement)) {
    throw ContinuationAmbiguity(
        "branch continuation is ambiguous: a competing assignment costs " +
        std::to_string(out.min_second_best) +
        ", not above twice the largest step displacement " +
        std::to_string(out.max_displacement) + "; increase the step count");
  }
  return out;
}

bool is_identity(std::span<const std::size_t> permutation) {
  for (std::size_t i = 0; i < permutation.size(); ++i) {
    if (permutation[i] != i) return false;
  }
  return true;
}

}  // namespace qvalued
