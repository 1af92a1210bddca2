#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cdrum/cli.hpp"
#include "cdrum/fixtures.hpp"
#include "cdrum/io.hpp"

using namespace cdrum;
using nlohmann::json;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content)
      : path("/tmp/cdrum_test_" + name) {
    std::ofstream f(path);
    f << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("sizes prints the published row counts") {
  auto r = run({"sizes", "--n", "6"});
  CHECK(r.code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["E_rows"] == 3110400);
  CHECK(doc["F_rows"] == 48768);
}

TEST_CASE("check holds on the habit fixture and fails on the self-control fixture") {
  TempFile two("ex2.json", serialize_dataset(fixtures::perfect_habit<Rational>()));
  auto ok = run({"check", "--input", two.path});
  CHECK(ok.code == 0);
  json doc = json::parse(ok.out);
  CHECK(doc["cdrum"] == true);
  CHECK(doc["si_cdrum"] == true);

  TempFile one("ex1.json", serialize_dataset(fixtures::waning_self_control<Rational>()));
  auto bad = run({"check", "--input", one.path});
  CHECK(bad.code == 1);
  json bad_doc = json::parse(bad.out);
  CHECK(bad_doc["cdrum"] == false);
}

TEST_CASE("test subcommand returns exit 1 on infeasible input") {
  TempFile one("ex1b.json", serialize_dataset(fixtures::waning_self_control<Rational>()));
  auto r = run({"test", "--form", "facet", "--input", one.path});
  CHECK(r.code == 1);
  json doc = json::parse(r.out);
  CHECK(doc["feasible"] == false);

  auto v = run({"test", "--form", "vertex", "--input", one.path});
  CHECK(v.code == 1);
}

TEST_CASE("test subcommand honors a limited domain file") {
  TempFile data("ex4.json", serialize_dataset(fixtures::state_dependent_pair<Rational>()));
  TempFile dom("dom.json", R"({"periods":2,"observed":[[["x","y"],["x","y"]],[["y","z"],["x","y"]]]})");
  auto r = run({"test", "--form", "facet", "--input", data.path, "--limited", dom.path});
  CHECK(r.code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["feasible"] == true);
}

TEST_CASE("stdout is machine readable and byte-deterministic") {
  TempFile two("ex2c.json", serialize_dataset(fixtures::perfect_habit<Rational>()));
  auto a = run({"recover", "--input", two.path});
  auto b = run({"recover", "--input", two.path});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK_NOTHROW(json::parse(a.out));

  auto c = run({"mobius", "--input", two.path});
  CHECK(c.code == 0);
  CHECK_NOTHROW(json::parse(c.out));
}

TEST_CASE("validate reports table shape and worst deviation") {
  TempFile two("ex2d.json", serialize_dataset(fixtures::perfect_habit<Rational>()));
  auto r = run({"validate", "--input", two.path});
  CHECK(r.code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["valid"] == true);
  CHECK(doc["periods"] == 2);
  CHECK(doc["worst_normalization_deviation"] == "0");
}

TEST_CASE("parse failures exit with code 2 and a JSON error object") {
  TempFile broken("broken.json", "{ not json");
  auto r = run({"validate", "--input", broken.path});
  CHECK(r.code == 2);
  json doc = json::parse(r.out);
  CHECK(doc.contains("error"));

  auto usage = run({"test", "--form", "sideways", "--input", broken.path});
  CHECK(usage.code == 2);
}

TEST_CASE("fit and predict-longrun round-trip habit parameters") {
  HabitLogitParams params;
  params.u = Universe({"o", "x"});
  params.v = {0.0, 0.5};
  params.c = {{0.0}, {1.0}};
  auto ccs = eval_habit_logit(params, full_domain(params.u, 2), 2);
  TempFile data("habitdata.json", serialize_dataset(from_conditional(ccs)));
  auto fit = run({"fit", "--model", "habit", "--outside", "o", "--input", data.path});
  CHECK(fit.code == 0);
  json doc = json::parse(fit.out);
  CHECK(doc["model"] == "habit");
  CHECK(parse_number<double>(doc["v"]["x"].get<std::string>()) == doctest::Approx(0.5));
  CHECK(parse_number<double>(doc["c"]["x"][0].get<std::string>()) == doctest::Approx(1.0));

  TempFile pf("params.json", fit.out);
  auto lr = run({"predict-longrun", "--params", pf.path});
  CHECK(lr.code == 0);
  json lrdoc = json::parse(lr.out);
  double sx = parse_number<double>(lrdoc["stationary"]["x"].get<std::string>());
  CHECK(sx == doctest::Approx(0.7733520233717215).epsilon(1e-9));
}

TEST_CASE("classify labels habit data") {
  HabitLogitParams params;
  params.u = Universe({"o", "x"});
  params.v = {0.0, 0.5};
  params.c = {{0.0}, {1.0}};
  auto ccs = eval_habit_logit(params, full_domain(params.u, 2), 2);
  TempFile data("classifydata.json", serialize_dataset(from_conditional(ccs)));
  auto r = run({"classify", "--input", data.path});
  CHECK(r.code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["consumption_dependent"] == true);
  CHECK(doc["learning"] == true);
  CHECK(doc["habit_formation"] == true);
  CHECK(doc["variety"] == false);
}

TEST_CASE("simulate modes emit loadable datasets") {
  auto mix = run({"simulate", "--mode", "mixture", "--n", "3", "--k", "3", "--seed", "9",
                  "--numeric", "rational"});
  CHECK(mix.code == 0);
  Dataset ds = parse_dataset(mix.out);
  CHECK(ds.periods() == 2);

  TempFile data("mix.json", mix.out);
  auto pert = run({"simulate", "--mode", "perturb", "--input", data.path, "--epsilon", "0.2",
                   "--seed", "4"});
  CHECK(pert.code == 0);
  CHECK_NOTHROW(parse_dataset(pert.out));

  auto fix = run({"simulate", "--mode", "fixture", "--fixture", "example3", "--numeric",
                  "rational"});
  CHECK(fix.code == 0);
  CHECK_NOTHROW(parse_dataset(fix.out));
}

TEST_CASE("oracle subcommand reports unanimous agreement") {
  auto r = run({"oracle", "--trials", "10", "--seed", "3", "--n", "3"});
  CHECK(r.code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["all_agree"] == true);
  CHECK(doc["agreements"] == 10);
}

TEST_CASE("recover exits 1 on inconsistent data") {
  TempFile one("ex1c.json", serialize_dataset(fixtures::waning_self_control<Rational>()));
  auto r = run({"recover", "--input", one.path});
  CHECK(r.code == 1);
  json doc = json::parse(r.out);
  CHECK(doc["error"]["type"] == "NotCdrum");
}
