#include "qvalued/serialize.hpp"

#include <fstream>
#include <sstream>

#include "qvalued/error.hpp"

namespace qvalued {
namespace {

std::string_view mesh_kind_name(MeshKind kind) {
  switch (kind) {
    case MeshKind::kSphere:
      return "sphere";
    case MeshKind::kBall:
      return "ball";
    case MeshKind::kExplicit:
      return "explicit";
  }
  return "explicit";
}

MeshKind parse_mesh_kind(const std::string& s) {
  if (s == "sphere") return MeshKind::kSphere;
  if (s == "ball") return MeshKind::kBall;
  if (s == "explicit") return MeshKind::kExplicit;
  throw InputError("unknown mesh kind '" + s + "'");
}

// Runs a reader and turns JSON library errors into InputError.
template <class F>
auto guarded(const char* what, F&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

void to_json(json& j, const Space& space) {
  j = json{{"dim", space.dim}, {"norm", std::string(norm_name(space.norm))}};
}

void from_json(const json& j, Space& space) {
  space.dim = j.at("dim").get<std::size_t>();
  if (space.dim == 0) throw InputError("space dimension must be positive");
  space.norm = parse_norm(j.value("norm", std::string("euclidean")));
}

json qpoint_to_json(const QPoint& x) {
  json j{{"Q", x.q()}, {"points", x.points()}};
  if (x.space().norm != Norm::kEuclidean) j["space"] = x.space();
  return j;
}

QPoint qpoint_from_json(const json& j, std::optional<Space> space) {
  return guarded("QPoint", [&] {
    auto points = j.at("points").get<std::vector<Point>>();
    if (points.empty()) throw InputError("QPoint has no points");
    if (j.contains("Q") && j.at("Q").get<std::size_t>() != points.size()) {
      throw InputError("QPoint declares Q = " +
                       std::to_string(j.at("Q").get<std::size_t>()) +
                       " but lists " + std::to_string(points.size()) +
                       " points");
    }
    Space sp;
    if (j.contains("space")) {
      sp = j.at("space").get<Space>();
    } else if (space) {
      sp = *space;
    } else {
      sp = Space{points.front().size(), Norm::kEuclidean};
      if (sp.dim == 0) throw InputError("QPoint points have dimension 0");
    }
    return QPoint(sp, std::move(points));
  });
}

json matching_to_json(const Matching& m) {
  return json{{"sigma", m.sigma}, {"value", m.value}};
}

json mesh_to_json(const Mesh& mesh) {
  return json{{"kind", std::string(mesh_kind_name(mesh.kind))},
              {"m", mesh.m},
              {"seed", mesh.seed},
              {"boundary_count", mesh.boundary_count},
              {"points", mesh.points}};
}

Mesh mesh_from_json(const json& j) {
  return guarded("mesh", [&] {
    Mesh mesh;
    mesh.kind = parse_mesh_kind(j.value("kind", std::string("explicit")));
    mesh.points = j.at("points").get<std::vector<Point>>();
    if (mesh.points.empty()) throw InputError("mesh has no points");
    const std::size_t dim = mesh.points.front().size();
    if (dim < 2) throw InputError("mesh points need dimension >= 2");
    for (const Point& p : mesh.points) {
      if (p.size() != dim) throw InputError("mesh points differ in dimension");
    }
    mesh.m = j.value("m", static_cast<int>(dim) - 1);
    if (static_cast<std::size_t>(mesh.m) + 1 != dim) {
      throw InputError("mesh m does not match point dimension");
    }
    mesh.seed = j.value("seed", std::uint64_t{0});
    mesh.boundary_count = j.value("boundary_count", std::size_t{0});
    return mesh;
  });
}

json mvf_table_to_json(const Mesh& domain, const SampledMVF& f) {
  json values = json::array();
  for (const Point& x : domain.points) values.push_back(qpoint_to_json(f(x)));
  return json{{"name", f.name()},
              {"target", f.target()},
              {"domain", mesh_to_json(domain)},
              {"values", values}};
}

SampledMVF mvf_table_from_json(const json& j) {
  return guarded("sample table", [&] {
    const Mesh domain = mesh_from_json(j.at("domain"));
    std::optional<Space> target;
    if (j.contains("target")) target = j.at("target").get<Space>();
    std::vector<QPoint> values;
    for (const json& v : j.at("values")) {
      values.push_back(qpoint_from_json(v, target));
    }
    if (values.empty()) throw InputError("sample table has no values");
    const Space tgt = target.value_or(values.front().space());
    return SampledMVF::from_table(j.value("name", std::string("table")),
                                  domain.space(), tgt, domain.points,
                                  std::move(values));
  });
}

json decomposition_to_json(const ClusterDecomposition& d) {
  json clusters = json::array();
  for (const Cluster& c : d.clusters) {
    clusters.push_back(
        json{{"base", c.base()}, {"size", c.size()}, {"members", c.members}});
  }
  return json{{"D", d.radius}, {"s", d.clusters.size()}, {"clusters", clusters}};
}

json chain_report_to_json(const ChainReport& r) {
  json clusters = json::array();
  for (const ClusterRadius& c : r.clusters) {
    clusters.push_back(json{{"radius", c.radius}, {"bound", c.bound}});
  }
  return json{{"clusters", clusters},
              {"global_bound", r.global_bound},
              {"worst_ratio", r.worst_ratio},
              {"pass", r.passed}};
}

json extension_report_to_json(const ExtensionReport& r) {
  return json{
      {"Q", r.q},
      {"clusters", r.clusters},
      {"gamma", r.gamma},
      {"lip_f", r.lip},
      {"D", r.radius},
      {"boundary_error", r.boundary_error},
      {"boundary_tolerance", r.boundary_tolerance},
      {"lip_F", r.lip_extension},
      {"lip_bound", r.lip_bound},
      {"near_origin_ratio", r.near_origin_ratio},
      {"near_origin_bound", r.near_origin_bound},
      {"relative_tolerance", r.relative_tolerance},
      {"pass",
       {{"boundary", r.boundary_pass},
        {"lipschitz", r.lip_pass},
        {"near_origin", r.near_origin_pass},
        {"all", r.passed()}}}};
}

json weak_convexity_to_json(const WeakConvexityReport& r) {
  return json{{"gamma", r.gamma},
              {"tolerance", r.tolerance},
              {"min_slack", r.min_slack},
              {"worst_triple", r.worst_triple},
              {"worst_t", r.worst_t},
              {"evaluations", r.evaluations},
              {"pass", r.passed}};
}

json cover_to_json(const Cover& cover) {
  json members = json::array();
  for (const Member& m : cover.members) {
    if (const auto* iv = std::get_if<Interval>(&m)) {
      members.push_back(json{{"interval", {iv->lo, iv->hi}}});
    } else if (const auto* b = std::get_if<Box>(&m)) {
      members.push_back(json{{"box", {{"lo", b->lo}, {"hi", b->hi}}}});
    } else if (const auto* ball = std::get_if<Ball>(&m)) {
      members.push_back(
          json{{"ball", {{"center", ball->center}, {"radius", ball->radius}}}});
    } else {
      members.push_back(json{{"indices", std::get<IndexSet>(m).indices}});
    }
  }
  json j{{"c", cover.c},
         {"s", cover.s},
         {"space", cover.space},
         {"range", {{"lo", cover.range_lo}, {"hi", cover.range_hi}}},
         {"members", members}};
  if (!cover.samples.empty()) j["samples"] = cover.samples;
  if (cover.grid) {
    j["grid"] = json{{"origin", cover.grid->origin},
                     {"width", cover.grid->width},
                     {"counts", cover.grid->counts}};
  }
  return j;
}

Cover cover_from_json(const json& j) {
  return guarded("cover", [&] {
    Cover cover;
    cover.c = j.at("c").get<double>();
    cover.s = j.at("s").get<double>();
    cover.space = j.value("space", json{{"dim", 1}}).get<Space>();
    if (j.contains("samples")) {
      cover.samples = j.at("samples").get<std::vector<Point>>();
      for (const Point& p : cover.samples) check_dim(cover.space, p);
    }
    for (const json& m : j.at("members")) {
      if (m.contains("interval")) {
        const auto v = m.at("interval").get<std::vector<double>>();
        if (v.size() != 2) throw InputError("interval needs [lo, hi]");
        cover.members.emplace_back(Interval{v[0], v[1]});
      } else if (m.contains("box")) {
        Box b{m.at("box").at("lo").get<Point>(), m.at("box").at("hi").get<Point>()};
        check_dim(cover.space, b.lo);
        check_dim(cover.space, b.hi);
        cover.members.emplace_back(std::move(b));
      } else if (m.contains("ball")) {
        Ball b{m.at("ball").at("center").get<Point>(),
               m.at("ball").at("radius").get<double>()};
        check_dim(cover.space, b.center);
        cover.members.emplace_back(std::move(b));
      } else if (m.contains("indices")) {
        IndexSet set{m.at("indices").get<std::vector<std::size_t>>()};
        for (std::size_t k : set.indices) {
          if (k >= cover.samples.size()) {
            throw InputError("cover member references a missing sample");
          }
        }
        cover.members.emplace_back(std::move(set));
      } else {
        throw InputError("cover member of unknown kind");
      }
    }
    if (cover.members.empty()) throw InputError("cover has no members");
    if (j.contains("range")) {
      cover.range_lo = j.at("range").at("lo").get<Point>();
      cover.range_hi = j.at("range").at("hi").get<Point>();
    } else if (!cover.samples.empty()) {
      cover.range_lo = cover.range_hi = cover.samples.front();
      for (const Point& p : cover.samples) {
        for (std::size_t a = 0; a < p.size(); ++a) {
          cover.range_lo[a] = std::min(cover.range_lo[a], p[a]);
          cover.range_hi[a] = std::max(cover.range_hi[a], p[a]);
        }
      }
    } else {
      throw InputError("geometric cover needs a \"range\"");
    }
    check_dim(cover.space, cover.range_lo);
    check_dim(cover.space, cover.range_hi);
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      cover.grid = Grid{g.at("origin").get<Point>(), g.at("width").get<double>(),
                        g.at("counts").get<std::vector<std::size_t>>()};
    }
    return cover;
  });
}

json nagata_report_to_json(const NagataReport& r) {
  return json{{"Q", r.q},
              {"base_multiplicity", r.base_multiplicity},
              {"base_multiplicity_exact", r.base_exact},
              {"bound", r.bound},
              {"product_multiplicity", r.product_multiplicity},
              {"product_members", r.product_members},
              {"probes", r.probes},
              {"coverage_ok", r.coverage_ok},
              {"non_vacuous", r.non_vacuous},
              {"pass", r.passed()}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

}  // namespace qvalued
