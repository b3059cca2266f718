#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "qvalued/serialize.hpp"

namespace fs = std::filesystem;
using namespace qvalued;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "qvalued_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args) {
  const fs::path log = workdir() / "stdout.txt";
  const std::string cmd = std::string(QVALUED_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(log)};
}

fs::path put(const std::string& name, const std::string& text) {
  const fs::path p = workdir() / name;
  write_text_file(p, text);
  return p;
}

std::string out_dir(const std::string& name) { return (workdir() / name).string(); }

}  // namespace

TEST_CASE("metric command") {
  const auto a = put("a.json", R"({"Q": 2, "points": [[0], [10]]})");
  const auto b = put("b.json", R"({"Q": 2, "points": [[1], [12]]})");
  Run r = run("metric " + a.string() + " " + b.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("value 2\n") != std::string::npos);
  CHECK(r.out.find("sigma 0 1\n") != std::string::npos);
  CHECK(r.out.find("solver exact") != std::string::npos);

  r = run("metric " + a.string() + " " + a.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("value 0\n") != std::string::npos);

  const auto one = put("one.json", R"({"Q": 1, "points": [[1]]})");
  CHECK(run("metric " + a.string() + " " + one.string()).code == 2);
  const auto bad = put("bad.json", "{\"Q\": 2, ");
  CHECK(run("metric " + bad.string() + " " + a.string()).code == 2);
  CHECK(run("metric " + a.string() + " " + (workdir() / "missing.json").string()).code == 2);
  CHECK(run("metric " + a.string()).code == 2);
}

TEST_CASE("extend command on fixtures") {
  Run r = run("extend --fixture half-angle --out " + out_dir("half"));
  CHECK(r.code == 0);
  const json rep = read_json_file(workdir() / "half" / "extension_report.json");
  const json& ext = rep.at("extension");
  CHECK(ext.at("pass").at("all") == true);
  const double lip = ext.at("lip_f").get<double>();
  CHECK(ext.at("lip_bound").get<double>() == doctest::Approx(11.0 * lip));
  CHECK(ext.at("near_origin_bound").get<double>() == doctest::Approx(10.0 * lip));
  CHECK(rep.at("seed") == 0);
  CHECK(rep.at("version") == QVALUED_VERSION);
  CHECK(std::abs(rep.at("lip_estimate").get<double>() - 1.0 / std::sqrt(2.0)) <= 1e-3);
  CHECK(fs::file_size(workdir() / "half" / "extension_pairs.csv") > 0);

  r = run("extend --fixture identity-circle --out " + out_dir("id"));
  CHECK(r.code == 0);
  const json id = read_json_file(workdir() / "id" / "extension_report.json");
  CHECK(id.at("extension").at("lip_bound").get<double>() ==
        doctest::Approx(3.0 * id.at("extension").at("lip_f").get<double>()));

  CHECK(run("extend --fixture nope --out " + out_dir("x")).code == 2);
  CHECK(run("extend --out " + out_dir("x")).code == 2);
}

TEST_CASE("extend reports are byte-reproducible") {
  const std::string args = "extend --fixture two-cluster --pairs 5000 --ball-n 600 --seed 7";
  REQUIRE(run(args + " --out " + out_dir("rep1")).code == 0);
  REQUIRE(run(args + " --out " + out_dir("rep2")).code == 0);
  CHECK(slurp(workdir() / "rep1" / "extension_report.json") ==
        slurp(workdir() / "rep2" / "extension_report.json"));
  CHECK(slurp(workdir() / "rep1" / "extension_pairs.csv") ==
        slurp(workdir() / "rep2" / "extension_pairs.csv"));
  CHECK(read_json_file(workdir() / "rep1" / "extension_report.json").at("seed") == 7);
}

TEST_CASE("extend command on sample tables") {
  const Mesh circle = sample_sphere(1, 64, 0);
  json table = mvf_table_to_json(circle, fixture_split_pair());
  const auto good = put("table.json", table.dump());
  CHECK(run("extend --input " + good.string() + " --out " + out_dir("tab")).code == 0);

  table["values"][17]["points"][0] = {50.0, 50.0};
  const auto outlier = put("outlier.json", table.dump());
  const Run r = run("extend --input " + outlier.string() + " --lip 1 --out " + out_dir("tab2"));
  CHECK(r.code == 3);
  CHECK(r.out.find("--lip-inflation") != std::string::npos);
}

TEST_CASE("cover command") {
  Run r = run("cover --c 3 --s 1 --q 2 --out " + out_dir("cov"));
  CHECK(r.code == 0);
  const json rep = read_json_file(workdir() / "cov" / "cover_report.json");
  CHECK(rep.at("report").at("product_multiplicity").get<int>() <= 4);
  CHECK(rep.at("report").at("pass") == true);
  const std::string csv = slurp(workdir() / "cov" / "cover_probes.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10001);

  r = run("cover --q 1 --out " + out_dir("cov1"));
  CHECK(r.code == 0);
  const json q1 = read_json_file(workdir() / "cov1" / "cover_report.json");
  CHECK(q1.at("report").at("product_multiplicity") == q1.at("report").at("base_multiplicity"));
  CHECK(q1.at("report").at("product_members") == q1.at("base_members"));

  CHECK(run("cover --hi 1e5 --q 5 --out " + out_dir("cov5")).code == 4);
  CHECK(run("cover --c 2 --out " + out_dir("cov6")).code == 2);

  const auto file = put("cover.json", cover_to_json(interval_cover(3.0, 1.0, 0.0, 10.0)).dump());
  CHECK(run("cover --input " + file.string() + " --q 3 --probes 2000 --out " + out_dir("cov7"))
            .code == 0);
}

TEST_CASE("examples command") {
  Run r = run("examples");
  CHECK(r.code == 0);
  CHECK(r.out.find("split-pair") != std::string::npos);

  r = run("examples half-angle --pairs 5000");
  CHECK(r.code == 0);
  CHECK(r.out.find("monodromy 1 0 (nontrivial)") != std::string::npos);

  r = run("examples split-pair --pairs 5000");
  CHECK(r.code == 0);
  CHECK(r.out.find("monodromy 0 1 (identity)") != std::string::npos);

  r = run("examples constant-3 --pairs 5000");
  CHECK(r.code == 0);
  CHECK(r.out.find("Lip(f) 0 estimated") != std::string::npos);

  r = run("examples no-such-fixture");
  CHECK(r.code == 2);
  CHECK(r.out.find("half-angle") != std::string::npos);
}
