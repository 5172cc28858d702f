#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vexp/commands.hpp"

using namespace vexp;
namespace fs = std::filesystem;

namespace {

Json base_config() {
  return Json::parse(R"({
    "dimension": 1,
    "exponent": {"type": "constant", "p": 1.5},
    "weight": {"type": "power", "exponent": -0.5},
    "family": {"level_min": 0, "level_max": 2, "shrink_targets": [[0.0]], "shrink_levels": 6}
  })");
}

std::string config_error_path(const Json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("vexp_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(VEXP_CLI) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("config errors carry the offending path") {
  auto j = base_config();
  j["bogus"] = 1;
  CHECK(config_error_path(j) == "/bogus");

  j = base_config();
  j["exponent"]["p"] = "two";
  CHECK(config_error_path(j) == "/exponent/p");

  j = base_config();
  j["weight"]["colour"] = "red";
  CHECK(config_error_path(j) == "/weight/colour");

  j = base_config();
  j["exponent"] = Json::parse(R"({"type": "wavy"})");
  CHECK(config_error_path(j) == "/exponent/type");

  j = base_config();
  j["family"]["shrink_targets"] = Json::parse("[[0.0, 1.0]]");
  CHECK(config_error_path(j).rfind("/family/shrink_targets", 0) == 0);

  j = base_config();
  j["params"] = Json::parse(R"({"s_grid": [1.0, 0.5]})");
  CHECK(config_error_path(j) == "/params/s_grid/1");

  j = base_config();
  j["params"] = Json::parse(R"({"side": "UP"})");
  CHECK(config_error_path(j) == "/params/side");

  CHECK(config_error_path(base_config()) == "<no error>");

  // a command that needs a missing section
  auto nw = base_config();
  nw.erase("weight");
  CHECK_THROWS_AS(run_command("char", parse_config(nw)), ConfigError);
  CHECK_THROWS_AS(run_command("nope", parse_config(base_config())), InvalidInput);
}

TEST_CASE("csv and json emitters") {
  Report empty;
  empty.command = "x";
  empty.columns = {"a", "b"};
  CHECK(to_csv(empty) == "a,b\n");

  Report r;
  r.command = "sweep";
  r.columns = {"s", "sup"};
  r.add_row({1.0, 2.5});
  r.add_row({1.5, INFINITY}, "blew up");
  r.add_row({2.0, NAN});
  r.summary["sup"] = summary_number(INFINITY);
  r.verdicts.push_back({"ok", true, ""});
  const Json j = to_json(r);
  CHECK(j["rows"][1]["sup"].is_null());
  CHECK(j["rows"][1]["_divergent"] == Json::array({"sup"}));
  CHECK(j["summary"]["sup"].is_null());

  const Report back = report_from_json(Json::parse(j.dump()));
  REQUIRE(back.rows.size() == 3);
  CHECK(back.rows[0][1] == 2.5);
  CHECK(std::isinf(back.rows[1][1]));
  CHECK(std::isnan(back.rows[2][1]));
  CHECK(back.notes[1] == "blew up");
  CHECK(back.passed());
  CHECK(back.column("sup") == 1);
  CHECK_THROWS_AS(back.column("nope"), InvalidInput);

  const std::string csv = to_csv(r);
  CHECK(csv.find("1.5,inf") != std::string::npos);
  CHECK(csv.find("2,nan") != std::string::npos);

  r.plot_x = "s";
  r.plot_y = "sup";
  const std::string svg = to_svg(r);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("DIVERGENT") != std::string::npos);
  CHECK(to_svg(empty).find("no data") != std::string::npos);
  CHECK_THROWS_AS(parse_format("xml"), InvalidInput);
}

TEST_CASE("commands") {
  auto j = base_config();
  j["params"] = Json::parse(R"({"s_grid": [1.0, 1.1, 1.2, 1.3, 1.4], "expect_boundary": 1.34})");
  const auto sweep = run_command("openness", parse_config(j));
  CHECK(sweep.rows.size() == 5);
  CHECK(sweep.passed());
  CHECK(sweep.config == j);

  auto n = base_config();
  n["params"] = Json::parse(R"({"function": {"type": "constant", "value": 1.0},
                                "cube": {"center": [0.0], "side": 1.0}})");
  const auto norm = run_command("norm", parse_config(n));
  REQUIRE(norm.rows.size() == 1);
  CHECK(norm.rows[0][norm.column("norm")] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(norm.passed());

  auto rh = base_config();
  rh["params"] = Json::parse(R"({"delta": 1.0, "c1": 1.0})");
  CHECK(run_command("rh-exponent", parse_config(rh)).summary["r"].get<double>() ==
        doctest::Approx(1.0450842200).epsilon(1e-10));

  auto bad = base_config();
  bad["exponent"]["p"] = 2.5;
  const auto div = run_command("char", parse_config(bad));
  CHECK_FALSE(div.passed());
  CHECK(div.summary["divergent"] == true);
}

TEST_CASE("report re-ingests an emitted sweep") {
  const auto dir = scratch("reingest");
  auto j = base_config();
  j["params"] = Json::parse(R"({"s_grid": [1.0, 1.2, 1.4]})");
  const auto sweep = run_command("openness", parse_config(j));
  const std::string path = emit(sweep, dir.string(), Format::Json);

  auto rj = base_config();
  rj["params"] = Json{{"input", path}};
  const auto rep = run_command("report", parse_config(rj));
  CHECK(rep.passed());
  CHECK(rep.rows.size() == 3);
  fs::remove_all(dir);
}

TEST_CASE("cli exit codes and reproducible output") {
  const auto dir = scratch("exit");
  const auto write = [&](const std::string& name, const Json& j) {
    const fs::path p = dir / name;
    std::ofstream(p) << j.dump(2);
    return p.string();
  };
  auto j = base_config();
  j["params"] = Json::parse(R"({"s_grid": [1.0, 1.2, 1.4]})");
  const std::string good = write("good.json", j);

  const fs::path a = dir / "a", b = dir / "b";
  CHECK(run_cli("openness -c " + good + " -o " + a.string() + " -f csv") == 0);
  CHECK(run_cli("openness -c " + good + " -o " + b.string() + " -f csv") == 0);
  const std::string csv = slurp(a / "openness.csv");
  CHECK(csv.rfind("s,sup,divergent\n", 0) == 0);
  CHECK(csv == slurp(b / "openness.csv"));

  CHECK(run_cli("openness -c " + good + " -o " + a.string() + " -f svg") == 0);
  CHECK(slurp(a / "openness.svg").find("DIVERGENT") != std::string::npos);

  auto div = base_config();
  div["exponent"]["p"] = 2.5;
  CHECK(run_cli("char -c " + write("div.json", div) + " -o " + a.string()) == 1);

  auto bad = base_config();
  bad["exponent"]["p"] = "x";
  CHECK(run_cli("char -c " + write("bad.json", bad) + " -o " + a.string()) == 2);
  CHECK(run_cli("char -o " + a.string()) == 2);
  CHECK(run_cli("char -c " + good + " -f xml") == 2);
  CHECK(run_cli("char -c " + (dir / "missing.json").string()) == 2);
  fs::remove_all(dir);
}
