// qvalued: command-line front end for metric queries, radial extension,
// product covers and the fixture gallery.
//
// Exit codes: 0 pass, 1 bound violation, 2 input error, 3 Lipschitz budget
// error, 4 resource cap.

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qvalued/error.hpp"
#include "qvalued/extension.hpp"
#include "qvalued/mvf.hpp"
#include "qvalued/nagata.hpp"
#include "qvalued/qspace.hpp"
#include "qvalued/serialize.hpp"
#include "qvalued/spaces.hpp"

namespace fs = std::filesystem;
using namespace qvalued;

namespace {

enum Exit : int {
  kPass = 0,
  kBoundViolation = 1,
  kInputError = 2,
  kBudgetError = 3,
  kResourceCap = 4,
};

struct Common {
  std::uint64_t seed = 0;
  std::string out = "out";
  double tol = 1e-9;
};

struct ExtendArgs {
  std::string fixture;
  std::string input;
  std::size_t mesh_n = 1000;
  std::size_t ball_n = 2000;
  std::size_t pairs = 50000;
  std::optional<double> lip;
  double lip_inflation = kDefaultLipInflation;
  std::vector<double> base_point;
  bool write = true;
};

struct CoverArgs {
  std::string input;
  double c = 3.0;
  double s = 1.0;
  double lo = 0.0;
  double hi = 10.0;
  std::size_t q = 2;
  std::size_t probes = 10000;
  std::optional<std::size_t> declared;
};

const std::map<std::string, std::string>& fixture_descriptions() {
  static const std::map<std::string, std::string> d{
      {"half-angle",
       "Q=2 map S^1 -> R^2 taking e^{i theta} to the two square roots "
       "+-e^{i theta/2}; it admits no Lipschitz splitting into two branches"},
      {"split-pair", "Q=2 map x -> [[x]] + [[-x]], globally split"},
      {"identity-circle", "Q=1 inclusion of S^1 into R^2"},
      {"constant-3", "Q=3 constant map at (0,0), (1,0), (0,1)"},
      {"two-cluster",
       "Q=3 map with one branch near the origin and two near (100, 0)"},
  };
  return d;
}

std::string fixed17(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? " " : "") + std::to_string(v[k]);
  return s;
}

json envelope(const std::string& command, const json& config, const Common& common) {
  json j;
  j["command"] = command;
  j["version"] = QVALUED_VERSION;
  j["seed"] = common.seed;
  j["config"] = config;
  return j;
}

void write_report(const Common& common, const std::string& file, const json& j) {
  const fs::path path = fs::path(common.out) / file;
  write_text_file(path, j.dump(2) + "\n");
  std::cout << "wrote " << path.string() << "\n";
}

// ---------------------------------------------------------------- metric

int cmd_metric(const std::string& a_path, const std::string& b_path, bool write,
               const Common& common) {
  const QPoint a = qpoint_from_json(read_json_file(a_path));
  const QPoint b = qpoint_from_json(read_json_file(b_path), a.space());
  if (a.q() != b.q()) {
    throw QMismatch("Q differs: " + std::to_string(a.q()) + " vs " +
                    std::to_string(b.q()));
  }
  if (a.space() != b.space()) throw DimensionMismatch("the QPoints live in different spaces");

  const bool exhaustive = a.q() <= kExhaustiveCap;
  const double value = exhaustive ? s_metric_exact(a, b) : s_metric_bottleneck(a, b);
  const Matching m = optimal_permutation(a, b);
  const std::string solver = exhaustive ? "exact" : "bottleneck";

  std::cout << "value " << fixed17(value) << "\n"
            << "sigma " << join(m.sigma) << "\n"
            << "solver " << solver << "\n";
  if (write) {
    json j = envelope("metric", json{{"a", a_path}, {"b", b_path}}, common);
    j["value"] = value;
    j["sigma"] = m.sigma;
    j["solver"] = solver;
    write_report(common, "metric.json", j);
  }
  return kPass;
}

// ---------------------------------------------------------------- extend

struct ExtendRun {
  json report;
  bool passed = false;
};

ExtendRun run_extend(const ExtendArgs& args, const Common& common,
                     std::ostream& log) {
  if (args.fixture.empty() == args.input.empty()) {
    throw InputError("give exactly one of --fixture or --input");
  }
  if (args.lip_inflation < 1.0) throw InputError("--lip-inflation must be >= 1");
  if (args.lip && *args.lip < 0.0) throw InputError("--lip must be >= 0");

  std::optional<SampledMVF> f;
  Mesh sphere, ball;
  if (!args.fixture.empty()) {
    f.emplace(fixture_by_name(args.fixture));
    const int m = static_cast<int>(f->domain().dim) - 1;
    sphere = sample_sphere(m, args.mesh_n, common.seed);
    ball = sample_ball(m, args.ball_n, common.seed);
  } else {
    f.emplace(mvf_table_from_json(read_json_file(args.input)));
    sphere.kind = MeshKind::kSphere;
    sphere.m = static_cast<int>(f->domain().dim) - 1;
    sphere.points = f->table_points();
    // a table can only be evaluated along rays through its samples
    const std::size_t rings = std::max<std::size_t>(2, args.ball_n / sphere.size());
    ball = radial_ball_mesh(sphere, rings);
  }

  const double estimate =
      args.lip ? *args.lip : lipschitz_estimate(*f, sphere, args.pairs, common.seed);
  const double inflation = args.lip ? 1.0 : args.lip_inflation;
  Point base = args.base_point.empty() ? sphere.points.front() : Point(args.base_point);
  check_dim(f->domain(), base);

  const ExtensionParams params =
      make_extension_params(estimate * inflation, 1.0, f->domain().dim, base);
  const Extension ext(*f, linear_bicombing(f->target()), params);

  VerifyOptions opts;
  opts.pairs = args.pairs;
  opts.seed = common.seed;
  opts.boundary_tolerance = common.tol;

  std::ostringstream csv;
  csv << std::setprecision(17) << "i,j,domain_distance,target_distance,ratio\n";
  const ExtensionReport r = verify_extension(ext, sphere, ball, opts, [&](const PairSample& p) {
    csv << p.i << ',' << p.j << ',' << p.domain_distance << ',' << p.target_distance << ','
        << p.target_distance / p.domain_distance << '\n';
  });
  const ChainReport chain = chain_radius_check(ext.decomposition());

  json config{{"fixture", args.fixture},
              {"input", args.input},
              {"mesh_n", sphere.size()},
              {"ball_n", ball.size()},
              {"pairs", args.pairs},
              {"tol", common.tol},
              {"lip_supplied", args.lip.has_value()},
              {"lip_inflation", inflation},
              {"base_point", base}};
  ExtendRun run;
  run.report = envelope("extend", config, common);
  run.report["function"] = f->name();
  run.report["lip_estimate"] = estimate;
  run.report["extension"] = extension_report_to_json(r);
  run.report["decomposition"] = decomposition_to_json(ext.decomposition());
  run.report["chain"] = chain_report_to_json(chain);
  run.passed = r.passed() && chain.passed;

  log << "function " << f->name() << " (Q=" << f->q() << ")\n"
      << "Lip(f) " << fixed17(estimate) << (args.lip ? " supplied" : " estimated")
      << ", used " << fixed17(params.lip) << "\n"
      << "clusters " << r.clusters << ", D " << fixed17(r.radius) << "\n"
      << "boundary error " << fixed17(r.boundary_error) << " <= " << r.boundary_tolerance
      << (r.boundary_pass ? " pass" : " FAIL") << "\n"
      << "Lip(F) " << fixed17(r.lip_extension) << " <= " << fixed17(r.lip_bound)
      << (r.lip_pass ? " pass" : " FAIL") << "\n"
      << "near-origin ratio " << fixed17(r.near_origin_ratio) << " <= "
      << fixed17(r.near_origin_bound) << (r.near_origin_pass ? " pass" : " FAIL") << "\n"
      << "chain radius ratio " << fixed17(chain.worst_ratio)
      << (chain.passed ? " pass" : " FAIL") << "\n";

  if (args.write) {
    write_report(common, "extension_report.json", run.report);
    write_text_file(fs::path(common.out) / "extension_pairs.csv", csv.str());
    log << "wrote " << (fs::path(common.out) / "extension_pairs.csv").string() << "\n";
  }
  return run;
}

int cmd_extend(const ExtendArgs& args, const Common& common) {
  return run_extend(args, common, std::cout).passed ? kPass : kBoundViolation;
}

// ---------------------------------------------------------------- cover

int cmd_cover(const CoverArgs& args, const Common& common) {
  const Cover base = args.input.empty() ? interval_cover(args.c, args.s, args.lo, args.hi)
                                        : cover_from_json(read_json_file(args.input));
  if (args.q == 0) throw InputError("--q must be positive");
  ProbeStrategy probes;
  probes.probes = args.probes;
  probes.seed = common.seed;
  const NagataReport r = verify_nagata_bound(base, args.q, probes, args.declared);

  json config{{"input", args.input}, {"q", args.q}, {"probes", args.probes}};
  if (args.input.empty()) {
    config["interval"] = json{{"c", args.c}, {"s", args.s}, {"lo", args.lo}, {"hi", args.hi}};
  }
  if (args.declared) config["declared_multiplicity"] = *args.declared;
  json j = envelope("cover", config, common);
  j["base_members"] = base.size();
  j["base_diameter"] = cover_diameter(base);
  j["report"] = nagata_report_to_json(r);

  std::cout << "base members " << base.size() << ", multiplicity " << r.base_multiplicity
            << (r.base_exact ? " (exact)" : " (lower bound)") << "\n"
            << "product members " << r.product_members << "\n"
            << "product multiplicity " << r.product_multiplicity << " <= " << r.bound
            << (r.passed() ? " pass" : " FAIL") << "\n"
            << "non-vacuous " << (r.non_vacuous ? "yes" : "no") << "\n";

  std::ostringstream csv;
  csv << "probe,members_met\n";
  for (std::size_t k = 0; k < r.per_probe.size(); ++k) csv << k << ',' << r.per_probe[k] << '\n';
  write_report(common, "cover_report.json", j);
  write_text_file(fs::path(common.out) / "cover_probes.csv", csv.str());
  return r.passed() ? kPass : kBoundViolation;
}

// ---------------------------------------------------------------- examples

int cmd_examples(const std::string& name, ExtendArgs args, const Common& common,
                 bool write) {
  if (name.empty()) {
    for (const auto& n : fixture_names()) {
      std::cout << n << ": " << fixture_descriptions().at(n) << "\n";
    }
    return kPass;
  }
  const SampledMVF f = fixture_by_name(name);
  std::cout << name << ": " << fixture_descriptions().at(name) << "\n";

  const Monodromy mono = branch_monodromy(f, 360);
  std::cout << "monodromy " << join(mono.permutation)
            << (is_identity(mono.permutation) ? " (identity)" : " (nontrivial)")
            << ", certificate margin " << fixed17(mono.min_second_best) << " > 2 * "
            << fixed17(mono.max_displacement) << "\n";

  args.fixture = name;
  args.input.clear();
  args.write = false;
  ExtendRun run = run_extend(args, common, std::cout);
  if (write) {
    run.report["command"] = "examples";
    run.report["monodromy"] = json{{"permutation", mono.permutation},
                                   {"max_displacement", mono.max_displacement},
                                   {"min_second_best", mono.min_second_best}};
    write_report(common, "examples_" + name + ".json", run.report);
  }
  return run.passed ? kPass : kBoundViolation;
}

void add_common(CLI::App* app, Common& common) {
  app->add_option("--seed", common.seed, "seed for every random draw")->capture_default_str();
  app->add_option("--out", common.out, "output directory")->capture_default_str();
  app->add_option("--tol", common.tol, "boundary tolerance")->capture_default_str();
}

void add_extend_options(CLI::App* app, ExtendArgs& args) {
  app->add_option("--mesh-n", args.mesh_n, "sphere mesh size")->capture_default_str();
  app->add_option("--ball-n", args.ball_n, "ball mesh size")->capture_default_str();
  app->add_option("--pairs", args.pairs, "random pair budget")->capture_default_str();
  app->add_option("--lip", args.lip, "use this Lip(f) instead of estimating it");
  app->add_option("--lip-inflation", args.lip_inflation,
                  "safety factor applied to the estimated Lip(f)")
      ->capture_default_str();
  app->add_option("--base-point", args.base_point,
                  "domain point playing the role of (1, 0, ..., 0)")
      ->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Computation with Q-valued functions"};
  app.set_version_flag("--version", std::string(QVALUED_VERSION));
  app.require_subcommand(1);
  Common common;

  auto* metric = app.add_subcommand("metric", "S distance and optimal matching of two QPoints");
  std::string a_path, b_path;
  bool metric_write = false;
  metric->add_option("a", a_path, "QPoint JSON")->required();
  metric->add_option("b", b_path, "QPoint JSON")->required();
  metric->add_flag("--write", metric_write, "also write metric.json to --out");
  add_common(metric, common);

  auto* extend = app.add_subcommand("extend", "extend a sphere map to the ball and verify bounds");
  ExtendArgs ext;
  extend->add_option("--fixture", ext.fixture, "fixture name");
  extend->add_option("--input", ext.input, "sample table JSON");
  add_extend_options(extend, ext);
  add_common(extend, common);

  auto* cover = app.add_subcommand("cover", "product cover multiplicity check");
  CoverArgs cov;
  cover->add_option("--input", cov.input, "cover JSON (default: interval tiling)");
  cover->add_option("--c", cov.c, "interval tiling constant")->capture_default_str();
  cover->add_option("--s", cov.s, "scale")->capture_default_str();
  cover->add_option("--lo", cov.lo, "range start")->capture_default_str();
  cover->add_option("--hi", cov.hi, "range end")->capture_default_str();
  cover->add_option("--q", cov.q, "Q")->capture_default_str();
  cover->add_option("--probes", cov.probes, "probe count")->capture_default_str();
  cover->add_option("--declared-multiplicity", cov.declared,
                    "base multiplicity to use instead of the computed one");
  add_common(cover, common);

  auto* examples = app.add_subcommand("examples", "fixture gallery");
  std::string example_name;
  bool examples_write = false;
  examples->add_option("name", example_name, "fixture name (omit to list)");
  examples->add_option("--fixture", example_name, "fixture name");
  examples->add_flag("--write", examples_write, "also write the report to --out");
  ExtendArgs ex_args;
  add_extend_options(examples, ex_args);
  add_common(examples, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (metric->parsed()) return cmd_metric(a_path, b_path, metric_write, common);
    if (extend->parsed()) return cmd_extend(ext, common);
    if (cover->parsed()) return cmd_cover(cov, common);
    if (examples->parsed()) return cmd_examples(example_name, ex_args, common, examples_write);
  } catch (const BudgetViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBudgetError;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kResourceCap;
  } catch (const ContinuationAmbiguity& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBoundViolation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
