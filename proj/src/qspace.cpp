#include "qvalued/qspace.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "qvalued/error.hpp"

namespace qvalued {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr double kInf = std::numeric_limits<double>::infinity();

using Matrix = std::vector<std::vector<double>>;

void check_compatible(const QPoint& a, const QPoint& b) {
  if (!(a.space() == b.space())) {
    throw DimensionMismatch("QPoints live in different spaces");
  }
  if (a.q() != b.q()) {
    throw QMismatch("QPoints have different Q (" + std::to_string(a.q()) +
                    " vs " + std::to_string(b.q()) + ")");
  }
}

bool perfect_at(const Matrix& dm, double threshold) {
  const std::size_t n = dm.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (dm[i][j] <= threshold) adj[i].push_back(j);
    }
    if (adj[i].empty()) return false;
  }
  return max_bipartite_matching(adj, n) == n;
}

// Bottleneck value of a square cost matrix; infinite entries are forbidden
// edges. Returns +infinity if no finite perfect matching exists.
double bottleneck_value(const Matrix& dm) {
  std::vector<double> candidates;
  candidates.reserve(dm.size() * dm.size());
  for (const auto& row : dm) {
    for (double v : row) {
      if (v != kInf) candidates.push_back(v);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  if (candidates.empty() || !perfect_at(dm, candidates.back())) return kInf;

  std::size_t lo = 0, hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (perfect_at(dm, candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

}  // namespace

QPoint::QPoint(Space space, std::vector<Point> points)
    : space_(space), points_(std::move(points)) {
  if (points_.empty()) throw InputError("a QPoint needs Q >= 1 points");
  for (const Point& p : points_) check_dim(space_, p);
}

QPoint QPoint::repeated(Space space, const Point& p, std::size_t copies) {
  return QPoint(space, std::vector<Point>(copies, p));
}

QPoint QPoint::canonical() const {
  std::vector<Point> sorted = points_;
  std::sort(sorted.begin(), sorted.end());
  return QPoint(space_, std::move(sorted));
}

bool QPoint::same_multiset(const QPoint& other) const {
  if (!(space_ == other.space_) || q() != other.q()) return false;
  return canonical().points_ == other.canonical().points_;
}

Matrix distance_matrix(const QPoint& a, const QPoint& b) {
  check_compatible(a, b);
  const std::size_t n = a.q();
  Matrix dm(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      dm[i][j] = distance(a.space(), a[i], b[j]);
    }
  }
  return dm;
}

std::size_t max_bipartite_matching(
    const std::vector<std::vector<std::size_t>>& adj, std::size_t n_right,
    std::vector<std::size_t>* match_left) {
  // Hopcroft-Karp.
  const std::size_t n_left = adj.size();
  std::vector<std::size_t> left(n_left, kNone), right(n_right, kNone);
  std::vector<std::size_t> dist(n_left);

  auto bfs = [&] {
    std::queue<std::size_t> queue;
    bool reachable_free = false;
    for (std::size_t u = 0; u < n_left; ++u) {
      if (left[u] == kNone) {
        dist[u] = 0;
        queue.push(u);
      } else {
        dist[u] = kNone;
      }
    }
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop();
      for (std::size_t v : adj[u]) {
        const std::size_t w = right[v];
        if (w == kNone) {
          reachable_free = true;
        } else if (dist[w] == kNone) {
          dist[w] = dist[u] + 1;
          queue.push(w);
        }
      }
    }
    return reachable_free;
  };

  auto dfs = [&](auto&& self, std::size_t u) -> bool {
    for (std::size_t v : adj[u]) {
      const std::size_t w = right[v];
      if (w == kNone || (dist[w] == dist[u] + 1 && self(self, w))) {
        left[u] = v;
        right[v] = u;
        return true;
      }
    }
    dist[u] = kNone;
    return false;
  };

  std::size_t matched = 0;
  while (bfs()) {
    for (std::size_t u = 0; u < n_left; ++u) {
      if (left[u] == kNone && dfs(dfs, u)) ++matched;
    }
  }
  if (match_left != nullptr) *match_left = std::move(left);
  return matched;
}

double s_metric_exact(const QPoint& a, const QPoint& b, std::size_t cap) {
  check_compatible(a, b);
  const std::size_t n = a.q();
  if (n > cap) {
    throw CapExceeded("exhaustive S metric limited to Q <= " +
                      std::to_string(cap) + " (got Q = " + std::to_string(n) +
                      "); use s_metric_bottleneck instead");
  }
  const Matrix dm = distance_matrix(a, b);
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  double best = kInf;
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < n && worst < best; ++i) {
      worst = std::max(worst, dm[i][sigma[i]]);
    }
    best = std::min(best, worst);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return best;
}

double s_metric_bottleneck(const QPoint& a, const QPoint& b) {
  return bottleneck_value(distance_matrix(a, b));
}

Matching optimal_permutation(const QPoint& a, const QPoint& b) {
  const Matrix dm = distance_matrix(a, b);
  const std::size_t n = dm.size();
  const double value = bottleneck_value(dm);

  // Fix sigma(0), sigma(1), ... greedily to the smallest column that still
  // admits a perfect matching of the remaining rows at the optimal value.
  Matching m;
  m.value = value;
  m.sigma.assign(n, kNone);
  std::vector<bool> used(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || dm[i][j] > value) continue;
      std::vector<std::size_t> columns;
      for (std::size_t c = 0; c < n; ++c) {
        if (!used[c] && c != j) columns.push_back(c);
      }
      std::vector<std::vector<std::size_t>> adj;
      for (std::size_t r = i + 1; r < n; ++r) {
        std::vector<std::size_t> row;
        for (std::size_t k = 0; k < columns.size(); ++k) {
          if (dm[r][columns[k]] <= value) row.push_back(k);
        }
        adj.push_back(std::move(row));
      }
      if (max_bipartite_matching(adj, columns.size()) == adj.size()) {
        m.sigma[i] = j;
        used[j] = true;
        break;
      }
    }
  }
  return m;
}

double second_best_cost(const QPoint& a, const QPoint& b,
                        const std::vector<std::size_t>& sigma) {
  const Matrix dm = distance_matrix(a, b);
  if (sigma.size() != dm.size()) {
    throw QMismatch("permutation length differs from Q");
  }
  double best = kInf;
  for (std::size_t i = 0; i < dm.size(); ++i) {
    Matrix forbidden = dm;
    forbidden[i][sigma[i]] = kInf;
    best = std::min(best, bottleneck_value(forbidden));
  }
  return best;
}

QPoint qpoint_concat(const QPoint& a, const QPoint& b) {
  if (!(a.space() == b.space())) {
    throw DimensionMismatch("cannot concatenate QPoints of different spaces");
  }
  std::vector<Point> pts = a.points();
  pts.insert(pts.end(), b.points().begin(), b.points().end());
  return QPoint(a.space(), std::move(pts));
}

std::vector<SupportEntry> support(const QPoint& a, double tol) {
  if (tol < 0.0) throw ParameterRange("support tolerance must be >= 0");
  std::vector<SupportEntry> out;
  for (const Point& p : a.points()) {
    auto it = std::find_if(out.begin(), out.end(), [&](const SupportEntry& e) {
      return distance(a.space(), e.point, p) <= tol;
    });
    if (it == out.end()) {
      out.push_back({p, 1});
    } else {
      ++it->multiplicity;
    }
  }
  return out;
}

}  // namespace qvalued
