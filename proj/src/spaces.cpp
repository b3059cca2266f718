#include "qvalued/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qvalued/error.hpp"

namespace qvalued {

std::string_view norm_name(Norm norm) {
  switch (norm) {
    case Norm::kEuclidean:
      return "euclidean";
    case Norm::kSup:
      return "sup";
    case Norm::kOne:
      return "one";
  }
  return "euclidean";
}

Norm parse_norm(std::string_view name) {
  if (name == "euclidean") return Norm::kEuclidean;
  if (name == "sup") return Norm::kSup;
  if (name == "one") return Norm::kOne;
  throw InputError("unknown norm '" + std::string(name) +
                   "' (expected euclidean, sup or one)");
}

void check_dim(const Space& space, std::span<const double> x) {
  if (x.size() != space.dim) {
    throw DimensionMismatch("point of dimension " + std::to_string(x.size()) +
                            " in a space of dimension " +
                            std::to_string(space.dim));
  }
}

double norm(const Space& space, std::span<const double> x) {
  check_dim(space, x);
  double acc = 0.0;
  switch (space.norm) {
    case Norm::kEuclidean:
      for (double v : x) acc += v * v;
      return std::sqrt(acc);
    case Norm::kSup:
      for (double v : x) acc = std::max(acc, std::abs(v));
      return acc;
    case Norm::kOne:
      for (double v : x) acc += std::abs(v);
      return acc;
  }
  return acc;
}

double distance(const Space& space, std::span<const double> x,
                std::span<const double> y) {
  check_dim(space, x);
  check_dim(space, y);
  double acc = 0.0;
  switch (space.norm) {
    case Norm::kEuclidean:
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        acc += d * d;
      }
      return std::sqrt(acc);
    case Norm::kSup:
      for (std::size_t i = 0; i < x.size(); ++i) {
        acc = std::max(acc, std::abs(x[i] - y[i]));
      }
      return acc;
    case Norm::kOne:
      for (std::size_t i = 0; i < x.size(); ++i) acc += std::abs(x[i] - y[i]);
      return acc;
  }
  return acc;
}

Bicombing linear_bicombing(const Space& space) {
  Bicombing b;
  b.space = space;
  b.gamma = 1.0;
  b.name = "linear";
  b.rule = [](std::span<const double> x, std::span<const double> y, double t,
              double length) {
    const double lambda = t / length;
    Point out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      out[i] = x[i] + lambda * (y[i] - x[i]);
    }
    return out;
  };
  return b;
}

Point geodesic_eval(const Bicombing& b, std::span<const double> x,
                    std::span<const double> y, double t) {
  const double length = distance(b.space, x, y);
  if (!(t >= 0.0 && t <= length)) {
    throw ParameterRange("geodesic parameter " + std::to_string(t) +
                         " outside [0, " + std::to_string(length) + "]");
  }
  if (t == 0.0) return Point(x.begin(), x.end());
  if (t == length) return Point(y.begin(), y.end());
  return b.rule(x, y, t, length);
}

WeakConvexityReport verify_weak_convexity(const Bicombing& b, double gamma,
                                          std::span<const Triple> triples,
                                          std::span<const double> ts,
                                          double tolerance) {
  if (triples.empty()) throw InputError("weak convexity: no triples");
  if (ts.empty()) throw InputError("weak convexity: no parameters t");
  for (double t : ts) {
    if (!(t >= 0.0 && t <= 1.0)) {
      throw ParameterRange("weak convexity: t must lie in [0, 1]");
    }
  }

  WeakConvexityReport report;
  report.gamma = gamma;
  report.tolerance = tolerance;
  report.min_slack = std::numeric_limits<double>::infinity();

  const Space& space = b.space;
  for (std::size_t k = 0; k < triples.size(); ++k) {
    const Triple& tr = triples[k];
    const double dxy = distance(space, tr.x, tr.y);
    const double dxz = distance(space, tr.x, tr.z);
    const double dyz = distance(space, tr.y, tr.z);
    for (double t : ts) {
      // t * d may round above d when t == 1; clamp onto the interval.
      const Point p = geodesic_eval(b, tr.x, tr.y, std::min(t * dxy, dxy));
      const Point q = geodesic_eval(b, tr.x, tr.z, std::min(t * dxz, dxz));
      const double slack = gamma * t * dyz - distance(space, p, q);
      ++report.evaluations;
      if (slack < report.min_slack) {
        report.min_slack = slack;
        report.worst_triple = k;
        report.worst_t = t;
      }
    }
  }
  report.passed = report.min_slack >= -tolerance;
  return report;
}

std::vector<Triple> random_triples(const Space& space, std::size_t count,
                                   std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-scale, scale);
  auto draw = [&] {
    Point p(space.dim);
    for (double& v : p) v = coord(rng);
    return p;
  };
  std::vector<Triple> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Triple t;
    t.x = draw();
    t.y = draw();
    t.z = draw();
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace qvalued
