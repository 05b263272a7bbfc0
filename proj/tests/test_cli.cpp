#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "zetashift/cli.hpp"
#include "zetashift/serialize.hpp"

using namespace zetashift;
namespace fs = std::filesystem;
using io::Json;

namespace {

struct Sandbox {
  fs::path root;

  explicit Sandbox(const std::string& name) {
    root = fs::temp_directory_path() / ("zetashift_cli_" + name);
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Sandbox() {
    std::error_code ec;
    fs::remove_all(root, ec);
  }

  fs::path write(const std::string& name, const Json& j) const {
    std::ofstream(root / name) << j.dump(2);
    return root / name;
  }
};

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Json riemann() { return {{"kind", "riemann"}}; }

Json constant_target(double re) {
  return {{"free", Json::array({{{"center", {0.8, 0.0}}, {"coefficients", Json::array({{re, 0.0}})}}})}};
}

Json small_scan() {
  return {{"schema_version", 1},
          {"zspec", riemann()},
          {"target", constant_target(1.0)},
          {"region", {{"kind", "disc"}, {"center", {0.8, 0.0}}, {"radius", 0.02}, {"density", 100.0}}},
          {"epsilon", 0.3},
          {"mode", {{"type", "continuous"}, {"t_start", 0.0}, {"t_end", 60.0}, {"step", 0.05}}}};
}

}  // namespace

TEST_CASE("cli eval") {
  Sandbox box("eval");
  const auto cfg = box.write("c.json", {{"schema_version", 1}, {"zspec", riemann()}, {"points", {2.0}}});
  const auto r = run({"eval", "--config", cfg.string(), "--out", (box.root / "o").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("1.64493406684") != std::string::npos);
  const auto j = Json::parse(slurp(box.root / "o" / "eval.json"));
  CHECK(std::abs(j["values"][0]["value"][0][0].get<double>() - kPi * kPi / 6.0) < 1e-10);
  CHECK(j["config_hash"].get<std::string>().size() == 16);
}

TEST_CASE("cli schema errors exit 2") {
  Sandbox box("schema");
  const auto out = (box.root / "o").string();
  SUBCASE("mismatched tuple arity") {
    auto c = small_scan();
    c["zspec"] = {{"kind", "tuple"}, {"components", Json::array({riemann(), riemann()})}};
    const auto r = run({"scan", "--config", box.write("c.json", c).string(), "--out", out});
    CHECK(r.code == 2);
    const auto e = Json::parse(slurp(box.root / "o" / "error.json"));
    CHECK(e["error"] == "SchemaError");
    CHECK(e["exit_code"] == 2);
  }
  SUBCASE("unknown key") {
    auto c = small_scan();
    c["epsilom"] = 0.3;
    CHECK(run({"scan", "--config", box.write("c.json", c).string(), "--out", out}).code == 2);
  }
  SUBCASE("wrong schema version") {
    auto c = small_scan();
    c["schema_version"] = 2;
    CHECK(run({"scan", "--config", box.write("c.json", c).string(), "--out", out}).code == 2);
  }
  SUBCASE("missing config file is an I/O failure") {
    CHECK(run({"scan", "--config", (box.root / "none.json").string(), "--out", out}).code == 1);
  }
  SUBCASE("bad flags") { CHECK(run({"scan"}).code == 2); }
}

TEST_CASE("cli determinism") {
  Sandbox box("determinism");
  const auto cfg = box.write("c.json", small_scan()).string();
  const auto a = (box.root / "a"), b = (box.root / "b");
  REQUIRE(run({"scan", "--config", cfg, "--out", a.string()}).code == 0);
  REQUIRE(run({"scan", "--config", cfg, "--out", b.string(), "--threads", "3"}).code == 0);
  for (const char* f : {"scan.json", "scan.csv"}) CHECK(slurp(a / f) == slurp(b / f));
  const auto summary = Json::parse(slurp(a / "scan.json"));
  CHECK(slurp(a / "scan.csv").rfind("# config_hash=" + summary["config_hash"].get<std::string>(), 0) == 0);
}

TEST_CASE("cli verify") {
  Sandbox box("verify");
  const auto tower = TowerParams::make(1.0, 2, 1, 0, 0.6);
  const auto tc = TransferConstants::make(0.7, 0.6, 0.3, tower, 0.0, 0.0, 0.0);
  ContinuousWitnessSet V;
  V.horizon = 11.0;
  V.config_hash = "00000000000000aa";
  DiscreteWitnessSet W;
  W.alpha = 1.0;
  W.horizon = 20;
  W.kind = WitnessKind::W;
  W.config_hash = V.config_hash;
  auto k = io::to_json(tc);
  k["config_hash"] = V.config_hash;
  box.write("V.json", io::to_json(V));
  box.write("W.json", io::to_json(W));
  box.write("k.json", k);
  const Json cfg{{"schema_version", 1}, {"V", "V.json"}, {"W", "W.json"}, {"constants", "k.json"}, {"N", 10}};
  const auto out = (box.root / "o").string();

  SUBCASE("empty V holds") {
    CHECK(run({"verify", "--config", box.write("c.json", cfg).string(), "--out", out}).code == 0);
    const auto csv = slurp(box.root / "o" / "counting.csv");
    CHECK(csv.find("\n10,0,0,1,") != std::string::npos);
  }
  SUBCASE("violation exits 1") {
    V.intervals = {{2.0, 3.0}};
    box.write("V.json", io::to_json(V));
    CHECK(run({"verify", "--config", box.write("c.json", cfg).string(), "--out", out}).code == 1);
  }
  SUBCASE("mixed hashes are refused") {
    W.config_hash = "00000000000000bb";
    box.write("W.json", io::to_json(W));
    CHECK(run({"verify", "--config", box.write("c.json", cfg).string(), "--out", out}).code == 2);
  }
}

TEST_CASE("cli transfer with explicit constants") {
  Sandbox box("transfer");
  const Json cfg{{"schema_version", 1},
                 {"zspec", riemann()},
                 {"target", constant_target(1.0)},
                 {"region", {{"kind", "disc"}, {"center", {0.8, 0.0}}, {"radius", 0.02}, {"density", 100.0}}},
                 {"strip", {0.5, 1.0}},
                 {"epsilon", 0.6},
                 {"alpha", 0.05},
                 {"delta0", 0.03},
                 {"horizon", 100},
                 {"constants", {{"delta", 0.02}, {"delta1", 0.01}, {"M", 3}, {"N", 2}, {"L", 0}}}};
  const auto path = box.write("c.json", cfg).string();
  const auto out = box.root / "o";
  REQUIRE(run({"transfer", "--config", path, "--out", out.string()}).code == 0);
  const auto hash = Json::parse(slurp(out / "meta.json"))["config_hash"];
  for (const char* f : {"constants.json", "V.json", "W.json", "S.json", "transfer.json"}) {
    CHECK(Json::parse(slurp(out / f))["config_hash"] == hash);
  }
  // the stored triple verifies on its own
  const Json v{{"schema_version", 1},
               {"V", (out / "V.json").string()},
               {"W", (out / "W.json").string()},
               {"constants", (out / "constants.json").string()},
               {"N", 100}};
  CHECK(run({"verify", "--config", box.write("v.json", v).string(), "--out", (box.root / "v").string()}).code == 0);
  CHECK(slurp(out / "counting.csv").substr(slurp(out / "counting.csv").find('\n')) ==
        slurp(box.root / "v" / "counting.csv").substr(slurp(box.root / "v" / "counting.csv").find('\n')));

  auto paper = cfg;
  CHECK(run({"transfer", "--paper-defaults", "--config", box.write("p.json", paper).string(), "--out",
             out.string()})
            .code == 2);
}

TEST_CASE("cli tower and kronecker") {
  Sandbox box("tower");
  const Json t{{"schema_version", 1},
               {"region", {{"kind", "rect"}, {"sigma", {0.6, 0.9}}, {"t", {-0.1, 0.1}}, {"density", 20.0}}},
               {"tower", {{"alpha", 1.0}, {"M", 2}, {"N", 1}, {"L", 1}, {"delta", 0.6}}}};
  REQUIRE(run({"tower", "--config", box.write("t.json", t).string(), "--out", (box.root / "o").string()}).code == 0);
  const auto j = Json::parse(slurp(box.root / "o" / "tower.json"));
  CHECK(j["pieces"].size() == 4);
  const auto back = io::tower_from_json(j["tower"]);
  CHECK(back.M1() == 3.5);
  CHECK(back.L1() == 8);

  const Json k{{"schema_version", 1}, {"lambdas", {2.0, 3.0}}, {"epsilon", 0.5}, {"l_cap", 100000},
               {"targets", Json::array({{1.0, 0.0}, {0.0, 1.0}})}, {"l_max", 100000}};
  REQUIRE(run({"kronecker", "--config", box.write("k.json", k).string(), "--out", (box.root / "k").string()})
              .code == 0);
  const auto kr = Json::parse(slurp(box.root / "k" / "kronecker.json"));
  CHECK(kr["independence"]["verdict"] == "IndependentByPrimality");
  CHECK(kr["shift"].is_number_integer());
  CHECK(kr["shift"].get<std::int64_t>() <= kr["covering"]["L"].get<std::int64_t>());
}

TEST_CASE("serialization round trips") {
  const auto z = ZSpec::tuple({ZSpec::ratio(ZSpec::riemann(), {2.0, 0.0}), ZSpec::hurwitz(0.5),
                               ZSpec::product({ZSpec::riemann(), ZSpec::hurwitz(0.25)})});
  CHECK(io::zspec_from_json(io::to_json(z)) == z);
  const auto K1 = build_tower(CompactRegion::rect(0.6, 0.9, -0.2, 0.2, 30.0), TowerParams::make(0.5, 3, 1, 2, 0.3));
  const auto back = io::region_from_json(io::to_json(K1));
  CHECK(back.grid().size() == K1.grid().size());
  CHECK(io::to_json(back) == io::to_json(K1));
  const auto tc = TransferConstants::make(0.9, 0.3, 0.1, TowerParams::make(0.7, 3, 2, 5, 0.3), 0.25, 0.125, 0.5);
  const auto tc2 = io::constants_from_json(io::to_json(tc));
  CHECK(tc2.C == tc.C);
  CHECK(tc2.xi == tc.xi);
  auto bad = io::to_json(tc);
  bad["C"] = tc.C * (1.0 + 1e-9);
  CHECK_THROWS_AS(io::constants_from_json(bad), Error);
  bad = io::to_json(tc);
  bad["extra"] = 1;
  try {
    io::constants_from_json(bad);
    FAIL("expected SchemaError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemaError);
  }
  CHECK(io::config_hash(Json{{"a", 1}, {"b", 2}}) == io::config_hash(Json::parse(R"({"b":2,"a":1})")));
  CHECK(io::format_double(0.1) == "0.10000000000000001");
}
