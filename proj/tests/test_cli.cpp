#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("rgcost_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

Run cli(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt", err = scratch() / "stderr.txt";
  std::string cmd = "cd '" + scratch().string() + "' && '" RGCOST_CLI "' " + args + " >'" + out.string() + "' 2>'" +
                    err.string() + "'";
  int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("malformed graph file reports the line") {
  put(scratch() / "bad.elist", "graph 3 2 2\n0 1\n1 x\n");
  auto r = cli("stats --graph bad.elist");
  CHECK(r.code == 2);
  auto j = nlohmann::json::parse(r.err);
  CHECK(j["error"]["kind"] == "input");
  CHECK(j["error"]["line"] == 3);
}

TEST_CASE("usage errors exit 2") {
  CHECK(cli("no-such-command").code == 2);
  CHECK(cli("partition --graph cycle:10 --k notanumber").code == 2);
  CHECK(cli("rankgrad --graph cycle:10").code == 2);
}

TEST_CASE("torus rank gradients") {
  auto r = cli("rankgrad --family Z2-torus --params 2,3,4,5,6,7,8,9,10,11,12");
  REQUIRE(r.code == 0);
  auto rows = csv(r.out);
  REQUIRE(rows.size() == 12);
  CHECK(rows[0][3] == "r_lower");
  for (int m = 2; m <= 12; ++m) {
    const auto& row = rows[m - 1];
    CHECK(row[0] == std::to_string(m * m));
    CHECK(row[3] == "1/" + std::to_string(m * m));
    CHECK(row[4] == "1/" + std::to_string(m * m));
  }
}

TEST_CASE("cycle densities at L = 3") {
  // Short cycles admit a spanning star within stretch 3; from 12 on they do not.
  auto r = cli("ccost --graphs cycle:12 cycle:14 cycle:16 cycle:20 --L 3 --seed 5 --format json");
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  for (double d : j["densities"]) CHECK(d == 1.0);
}

TEST_CASE("rewire output round-trips through a file") {
  auto r = cli("rewire --graph torus:5x5 --L 2 --seed 2 --out h.elist --report rep.json");
  REQUIRE(r.code == 0);
  auto rep = nlohmann::json::parse(slurp(scratch() / "rep.json"));
  CHECK(rep["certificate"]["valid"] == true);
  auto s = cli("spectral --graph h.elist --format json");
  CHECK(s.code == 0);
  auto t = cli("transfer --from torus:5x5,h.elist --to torus:5x5 --L 2 --out h2.elist --report tr.json");
  CHECK(t.code == 0);
  auto tr = nlohmann::json::parse(slurp(scratch() / "tr.json"));
  CHECK(tr["report"]["problematic_fraction"] == 0.0);
  CHECK(tr["report"]["density_result"] == rep["density"]);
}

TEST_CASE("enumeration reproduces a family graph") {
  REQUIRE(cli("family --name Z2-torus --params 4 --out-dir fam").code == 0);
  auto e = cli("enumerate --presentation fam/presentation.pres --subgroup fam/graph_0.sub --out enum.json");
  REQUIRE(e.code == 0);
  auto a = nlohmann::json::parse(slurp(scratch() / "enum.json"));
  CHECK(a["n"] == 16);
  auto rs = cli("rs-presentation --presentation fam/presentation.pres --schreier enum.json --simplify");
  REQUIRE(rs.code == 0);
  auto p = nlohmann::json::parse(rs.out);
  CHECK(p["generators"].size() == 17);
  CHECK(p["abelianized_rank"] == 2);
  CHECK(p["simplified"]["d_upper"] == 2);
}

TEST_CASE("experiment runs are reproducible and tamper-evident") {
  put(scratch() / "spec.json", R"({"seed": 3,
    "inputs": {"family": {"name": "F2-random", "params": [8, 12, 16]}},
    "analyses": ["rankgrad", "spectral", "partition", "trichotomy", "farber"],
    "params": {"k": 2, "eps": 0.25, "c": 0.5, "radius": 1},
    "output": {"dir": "run1", "plot": true}})");
  REQUIRE(cli("run --spec spec.json").code == 0);
  REQUIRE(cli("run --spec spec.json --out-dir run2").code == 0);
  for (const auto& entry : fs::directory_iterator(scratch() / "run1")) {
    CHECK(slurp(entry.path()) == slurp(scratch() / "run2" / entry.path().filename()));
  }
  auto m = nlohmann::json::parse(slurp(scratch() / "run1" / "manifest.json"));
  CHECK(m["seed"] == 3);
  CHECK(m["analyses"].size() == 5);
  CHECK(cli("check-manifest --manifest run1/manifest.json").code == 0);
  put(scratch() / "run1" / "spectral.csv", "tampered\n");
  CHECK(cli("check-manifest --manifest run1/manifest.json").code == 1);
}

TEST_CASE("experiment errors are recorded per analysis") {
  put(scratch() / "mixed.json", R"({"seed": 1, "inputs": {"graphs": ["cycle:12"]},
    "analyses": ["stats", "rankgrad"], "output": {"dir": "mixed"}})");
  auto r = cli("run --spec mixed.json");
  CHECK(r.code == 2);
  auto m = nlohmann::json::parse(slurp(scratch() / "mixed" / "manifest.json"));
  CHECK(m["analyses"][0]["status"] == "ok");
  CHECK(m["analyses"][1]["status"] == "error");
  CHECK(m["analyses"][1]["error"]["kind"] == "input");

  put(scratch() / "noseed.json", R"({"inputs": {"graphs": ["cycle:12"]}, "analyses": ["ccost"]})");
  CHECK(cli("run --spec noseed.json").code == 2);
  put(scratch() / "missing.json", R"({"inputs": {"graphs": ["nope.elist"]}, "analyses": ["stats"]})");
  CHECK(cli("run --spec missing.json").code == 2);
}
