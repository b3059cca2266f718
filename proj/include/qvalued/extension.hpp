#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qvalued/mvf.hpp"
#include "qvalued/qspace.hpp"
#include "qvalued/spaces.hpp"

namespace qvalued {

// Smallest admissible cluster radius. A constant f has Lip(f) = 0 and
// would otherwise get D = 0.
inline constexpr double kMinClusterRadius = 1e-9;

// Below this norm a ball point is treated as the origin.
inline constexpr double kOriginRadius = 1e-12;

inline constexpr double kDefaultLipInflation = 1.05;

struct ExtensionParams {
  double lip = 0.0;    // Lip(f), estimated or supplied
  double radius = 0.0; // D = 2 Lip(f)
  double gamma = 1.0;
  Point base_point;    // plays the role of (1, 0, ..., 0)
};

// D = max(2 lip, kMinClusterRadius); base point defaults to e_1.
ExtensionParams make_extension_params(double lip, double gamma,
                                      std::size_t domain_dim,
                                      Point base_point = {});

struct Cluster {
  // Members p(i, 1..Q_i) with multiplicity; members.front() is the base
  // p(i, 1). cluster_support sorts them lexicographically.
  std::vector<Point> members;

  const Point& base() const { return members.front(); }
  std::size_t size() const { return members.size(); }
};

struct ClusterDecomposition {
  Space space;
  double radius = 0.0;
  std::vector<Cluster> clusters;

  std::size_t total_q() const;
};

// Single-linkage components of spt(base_value) at threshold 4D: members of
// one cluster chain together with steps <= 4D, distinct clusters are more
// than 4D apart. Clusters are ordered by their base point.
ClusterDecomposition cluster_support(const QPoint& base_value, double radius);

// Splits `value` into (f_1, ..., f_s) by membership in the closed
// D-neighbourhoods of the clusters. Throws BudgetViolation if a point is in
// no neighbourhood or in two, or if the part sizes differ from Q_i.
std::vector<QPoint> decompose_value(const QPoint& value,
                                    const ClusterDecomposition& clusters);

std::vector<QPoint> decompose_at(const SampledMVF& f,
                                 const ClusterDecomposition& clusters,
                                 std::span<const double> x);

// The radial extension F : B^{m+1} -> Q_Q(Y) of f : S^m -> Q_Q(Y).
//
//   F(0) = sum_i Q_i [[p(i, 1)]]
//   F(x) = sum_i sum_j [[c_{p(i,1), q}( |x| d(p(i,1), q) )]]
//
// where q runs over the points of f_i(x / |x|).
class Extension {
 public:
  Extension(SampledMVF f, Bicombing bicombing, ExtensionParams params);

  // Uses a caller-chosen decomposition, e.g. with a different base p(i, 1)
  // per cluster (members.front()). It must split f(base point).
  Extension(SampledMVF f, Bicombing bicombing, ExtensionParams params,
            ClusterDecomposition decomposition);

  QPoint operator()(std::span<const double> x) const;
  QPoint at_origin() const;

  const SampledMVF& function() const { return f_; }
  const Bicombing& bicombing() const { return bicombing_; }
  const ExtensionParams& params() const { return params_; }
  const ClusterDecomposition& decomposition() const { return clusters_; }

 private:
  SampledMVF f_;
  Bicombing bicombing_;
  ExtensionParams params_;
  ClusterDecomposition clusters_;
};

QPoint extend_eval(const SampledMVF& f, const Bicombing& b,
                   const ExtensionParams& params, std::span<const double> x);

struct ExtensionReport {
  std::size_t q = 0;
  std::size_t clusters = 0;
  double gamma = 1.0;
  double lip = 0.0;
  double radius = 0.0;

  double boundary_error = 0.0;
  double lip_extension = 0.0;
  double lip_bound = 0.0;          // (gamma + 8Q - 6) Lip(f)
  double near_origin_ratio = 0.0;  // max S(F(x), F(0)) / |x|
  double near_origin_bound = 0.0;  // (8Q - 6) Lip(f)

  double boundary_tolerance = 1e-9;
  double relative_tolerance = 1e-6;
  bool boundary_pass = false;
  bool lip_pass = false;
  bool near_origin_pass = false;

  bool passed() const { return boundary_pass && lip_pass && near_origin_pass; }
};

struct VerifyOptions {
  std::size_t pairs = 200000;
  std::uint64_t seed = 0;
  double boundary_tolerance = 1e-9;
  double relative_tolerance = 1e-6;
};

ExtensionReport verify_extension(const Extension& extension,
                                 const Mesh& sphere_mesh,
                                 const Mesh& ball_mesh,
                                 const VerifyOptions& options = {},
                                 const PairSink& sink = {});

struct ClusterRadius {
  double radius = 0.0;  // max_k d(p(i, 1), p(i, k))
  double bound = 0.0;   // 4D(Q_i - 1) + D
};

struct ChainReport {
  std::vector<ClusterRadius> clusters;
  double global_bound = 0.0;  // D(4Q - 3)
  double worst_ratio = 0.0;   // max radius / bound
  bool passed = false;
};

ChainReport chain_radius_check(const ClusterDecomposition& clusters);

}  // namespace qvalued
