#include "qvalued/extension.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qvalued/error.hpp"

namespace qvalued {
namespace {

std::string budget_hint(double radius) {
  return " (D = " + std::to_string(radius) +
         "); f is not Lipschitz with the assumed constant. Inflate Lip(f), "
         "e.g. --lip-inflation " +
         std::to_string(kDefaultLipInflation);
}

double euclidean_norm(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc);
}

}  // namespace

ExtensionParams make_extension_params(double lip, double gamma,
                                      std::size_t domain_dim,
                                      Point base_point) {
  if (!(lip >= 0.0)) throw ParameterRange("Lip(f) must be >= 0");
  if (!(gamma >= 1.0)) throw ParameterRange("gamma must be >= 1");
  ExtensionParams p;
  p.lip = lip;
  p.radius = std::max(2.0 * lip, kMinClusterRadius);
  p.gamma = gamma;
  if (base_point.empty()) {
    base_point.assign(domain_dim, 0.0);
    base_point.at(0) = 1.0;
  }
  if (base_point.size() != domain_dim) {
    throw DimensionMismatch("base point has the wrong dimension");
  }
  p.base_point = std::move(base_point);
  return p;
}

std::size_t ClusterDecomposition::total_q() const {
  std::size_t q = 0;
  for (const Cluster& c : clusters) q += c.size();
  return q;
}

ClusterDecomposition cluster_support(const QPoint& base_value, double radius) {
  if (!(radius > 0.0)) throw ParameterRange("cluster radius D must be > 0");
  const auto spt = support(base_value, 0.0);
  const std::size_t n = spt.size();
  const double link = 4.0 * radius;

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t u) {
    while (parent[u] != u) u = parent[u] = parent[parent[u]];
    return u;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (distance(base_value.space(), spt[i].point, spt[j].point) <= link) {
        parent[find(i)] = find(j);
      }
    }
  }

  std::vector<std::vector<Point>> groups(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& g = groups[find(i)];
    g.insert(g.end(), spt[i].multiplicity, spt[i].point);
  }

  ClusterDecomposition out;
  out.space = base_value.space();
  out.radius = radius;
  for (auto& g : groups) {
    if (g.empty()) continue;
    std::sort(g.begin(), g.end());
    out.clusters.push_back(Cluster{std::move(g)});
  }
  std::sort(out.clusters.begin(), out.clusters.end(),
            [](const Cluster& a, const Cluster& b) { return a.base() < b.base(); });
  return out;
}

std::vector<QPoint> decompose_value(const QPoint& value,
                                    const ClusterDecomposition& clusters) {
  if (!(value.space() == clusters.space)) {
    throw DimensionMismatch("value and decomposition live in different spaces");
  }
  if (value.q() != clusters.total_q()) {
    throw QMismatch("value has Q = " + std::to_string(value.q()) +
                    " but the decomposition covers Q = " +
                    std::to_string(clusters.total_q()));
  }
  const double radius = clusters.radius;
  std::vector<std::vector<Point>> parts(clusters.clusters.size());
  for (const Point& p : value.points()) {
    std::size_t owner = parts.size();
    std::size_t hits = 0;
    for (std::size_t i = 0; i < clusters.clusters.size(); ++i) {
      const auto& members = clusters.clusters[i].members;
      const bool inside = std::any_of(members.begin(), members.end(),
                                      [&](const Point& m) {
        return distance(clusters.space, m, p) <= radius;
      });
      if (inside) {
        owner = i;
        ++hits;
      }
    }
    if (hits == 0) {
      throw BudgetViolation("a value point lies within D of no cluster" +
                            budget_hint(radius));
    }
    if (hits > 1) {
      throw BudgetViolation(
          "a value point lies within D of two clusters; the decomposition "
          "does not match this input" + budget_hint(radius));
    }
    parts[owner].push_back(p);
  }

  std::vector<QPoint> out;
  out.reserve(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].size() != clusters.clusters[i].size()) {
      throw BudgetViolation("cluster " + std::to_string(i) + " received " +
                            std::to_string(parts[i].size()) +
                            " points instead of Q_i = " +
                            std::to_string(clusters.clusters[i].size()) +
                            budget_hint(radius));
    }
    out.emplace_back(clusters.space, std::move(parts[i]));
  }
  return out;
}

std::vector<QPoint> decompose_at(const SampledMVF& f,
                                 const ClusterDecomposition& clusters,
                                 std::span<const double> x) {
  return decompose_value(f(x), clusters);
}

Extension::Extension(SampledMVF f, Bicombing bicombing, ExtensionParams params)
    : f_(std::move(f)),
      bicombing_(std::move(bicombing)),
      params_(std::move(params)) {
  if (f_.domain().norm != Norm::kEuclidean) {
    throw InputError("extension needs a Euclidean sphere as domain");
  }
  if (!(bicombing_.space == f_.target())) {
    throw DimensionMismatch("bicombing and target space differ");
  }
  if (!(params_.radius > 0.0)) throw ParameterRange("D must be > 0");
  check_dim(f_.domain(), params_.base_point);
  clusters_ = cluster_support(f_(params_.base_point), params_.radius);
}

Extension::Extension(SampledMVF f, Bicombing bicombing, ExtensionParams params,
                     ClusterDecomposition decomposition)
    : Extension(std::move(f), std::move(bicombing), std::move(params)) {
  if (decomposition.radius != params_.radius) {
    throw ParameterRange("decomposition radius differs from D");
  }
  decompose_value(f_(params_.base_point), decomposition);
  clusters_ = std::move(decomposition);
}

QPoint Extension::at_origin() const {
  std::vector<Point> pts;
  for (const Cluster& c : clusters_.clusters) {
    pts.insert(pts.end(), c.size(), c.base());
  }
  return QPoint(f_.target(), std::move(pts));
}

QPoint Extension::operator()(std::span<const double> x) const {
  check_dim(f_.domain(), x);
  const double r = euclidean_norm(x);
  if (r > 1.0 + kOriginRadius) {
    throw ParameterRange("extension evaluated outside the unit ball (|x| = " +
                         std::to_string(r) + ")");
  }
  if (r < kOriginRadius) return at_origin();

  Point theta(x.begin(), x.end());
  for (double& v : theta) v /= r;
  const double scale = std::min(r, 1.0);

  const auto parts = decompose_at(f_, clusters_, theta);
  std::vector<Point> pts;
  pts.reserve(f_.q());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const Point& base = clusters_.clusters[i].base();
    for (const Point& q : parts[i].points()) {
      const double length = distance(f_.target(), base, q);
      pts.push_back(geodesic_eval(bicombing_, base, q, scale * length));
    }
  }
  return QPoint(f_.target(), std::move(pts));
}

QPoint extend_eval(const SampledMVF& f, const Bicombing& b,
                   const ExtensionParams& params, std::span<const double> x) {
  return Extension(f, b, params)(x);
}

ExtensionReport verify_extension(const Extension& extension,
                                 const Mesh& sphere_mesh,
                                 const Mesh& ball_mesh,
                                 const VerifyOptions& options,
                                 const PairSink& sink) {
  const SampledMVF& f = extension.function();
  const ExtensionParams& params = extension.params();
  const double q = static_cast<double>(f.q());

  ExtensionReport report;
  report.q = f.q();
  report.clusters = extension.decomposition().clusters.size();
  report.gamma = params.gamma;
  report.lip = params.lip;
  report.radius = params.radius;
  report.lip_bound = (params.gamma + 8.0 * q - 6.0) * params.lip;
  report.near_origin_bound = (8.0 * q - 6.0) * params.lip;
  report.boundary_tolerance = options.boundary_tolerance;
  report.relative_tolerance = options.relative_tolerance;

  for (const Point& x : sphere_mesh.points) {
    report.boundary_error = std::max(
        report.boundary_error, s_metric_bottleneck(extension(x), f(x)));
  }

  std::vector<QPoint> values;
  values.reserve(ball_mesh.size());
  for (const Point& x : ball_mesh.points) values.push_back(extension(x));

  if (ball_mesh.size() >= 2) {
    report.lip_extension =
        lipschitz_estimate(f.domain(), ball_mesh.points, values, options.pairs,
                           options.seed, sink);
  }

  const QPoint origin = extension.at_origin();
  for (std::size_t k = 0; k < ball_mesh.size(); ++k) {
    const double r = euclidean_norm(ball_mesh.points[k]);
    if (r < kOriginRadius) continue;
    report.near_origin_ratio = std::max(
        report.near_origin_ratio, s_metric_bottleneck(values[k], origin) / r);
  }

  const double rel = 1.0 + options.relative_tolerance;
  report.boundary_pass = report.boundary_error <= options.boundary_tolerance;
  report.lip_pass = report.lip_extension <= report.lip_bound * rel;
  report.near_origin_pass =
      report.near_origin_ratio <= report.near_origin_bound * rel;
  return report;
}

ChainReport chain_radius_check(const ClusterDecomposition& clusters) {
  const double d = clusters.radius;
  const double q = static_cast<double>(clusters.total_q());
  ChainReport report;
  report.global_bound = d * (4.0 * q - 3.0);
  report.passed = true;
  for (const Cluster& c : clusters.clusters) {
    ClusterRadius cr;
    for (const Point& p : c.members) {
      cr.radius = std::max(cr.radius, distance(clusters.space, c.base(), p));
    }
    // D times an exact integer, so cr.bound <= global_bound iff Q_i <= Q
    cr.bound = d * static_cast<double>(4 * c.size() - 3);
    report.worst_ratio = std::max(report.worst_ratio, cr.radius / cr.bound);
    report.passed = report.passed && cr.radius <= cr.bound &&
                    cr.bound <= report.global_bound;
    report.clusters.push_back(cr);
  }
  return report;
}

}  // namespace qvalued
