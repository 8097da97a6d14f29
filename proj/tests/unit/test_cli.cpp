#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "anormal/io.hpp"
#include "cli.hpp"

using anormal::io::Json;
namespace fs = std::filesystem;

namespace {

std::string data(const char* name) {
  return (fs::path(ANORMAL_TEST_DATA_DIR) / name).string();
}

struct Run {
  int code;
  std::string out;
  std::string err;
  Json json() const { return anormal::io::parse_json(out, "report"); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = anormal::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "anormal_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

const Json* find_predicate(const Json& list, const std::string& name) {
  for (const auto& v : list) {
    if (v["predicate"] == name) return &v;
  }
  return nullptr;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("classify the example") {
  const auto r = run({"classify", "--metric", data("example_metric.json"), "--operator",
                      data("example_operator.json"), "--n", "2", "--m", "1"});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  CHECK(j["command"] == "classify");
  CHECK(j["exit_status"] == 0);
  CHECK(j["inputs"].size() == 2);
  CHECK(j["inputs"][0]["sha256"].get<std::string>().size() == 64);
  const auto* normal = find_predicate(j["classes"], "nm_normal");
  const auto* quasi = find_predicate(j["classes"], "nm_quasinormal");
  REQUIRE(normal);
  REQUIRE(quasi);
  CHECK((*normal)["verdict"] == "pass");
  CHECK((*quasi)["verdict"] == "pass");
  const auto* a_normal = find_predicate(j["basic"], "a_normal");
  REQUIRE(a_normal);
  CHECK((*a_normal)["verdict"] == "fail");
  CHECK(j["t_sharp"]["data"][1] == Json::array({2.0, 0.0}));

  const auto one = run({"classify", "--metric", data("example_metric.json"), "--operator",
                        data("example_operator.json"), "--n", "1", "--m", "1"});
  CHECK((*find_predicate(one.json()["classes"], "nm_normal"))["verdict"] == "fail");
}

TEST_CASE("classify a Hermitian matrix with the identity metric") {
  const auto r = run({"classify", "--metric", data("identity2.json"), "--operator",
                      data("hermitian2.json")});
  REQUIRE(r.code == 0);
  const Json j = r.json();
  for (const auto& v : j["classes"]) CHECK(v["verdict"] == "pass");
  CHECK((*find_predicate(j["basic"], "a_normal"))["verdict"] == "pass");
  CHECK((*find_predicate(j["basic"], "a_selfadjoint"))["verdict"] == "pass");
}

TEST_CASE("classify rejects operators outside B_A") {
  const auto r = run({"classify", "--metric", data("singular_metric.json"), "--operator",
                      data("nilpotent.json")});
  CHECK(r.code == 2);
  CHECK(r.err.find("not-in-B_A") != std::string::npos);

  const auto forced = run({"classify", "--metric", data("singular_metric.json"),
                           "--operator", data("nilpotent.json"), "--force"});
  CHECK(forced.code == 0);
  CHECK(forced.json()["membership"]["in_B_A"] == "fail");
}

TEST_CASE("input errors exit 2 with distinct messages") {
  const auto missing = run({"classify", "--metric", "/nonexistent.json", "--operator",
                            data("example_operator.json")});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("file-not-found") != std::string::npos);

  const fs::path broken = scratch("broken.json");
  std::ofstream(broken) << "{\"rows\": 2,";
  const auto parse = run({"classify", "--metric", broken.string(), "--operator",
                          data("example_operator.json")});
  CHECK(parse.code == 2);
  CHECK(parse.err.find("parse-error") != std::string::npos);

  const fs::path small = scratch("one.json");
  std::ofstream(small) << R"({"rows":1,"cols":1,"data":[[1,0]]})";
  const auto dims = run({"classify", "--metric", small.string(), "--operator",
                         data("example_operator.json")});
  CHECK(dims.code == 2);
  CHECK(dims.err.find("dimension-mismatch") != std::string::npos);

  CHECK(run({"classify"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"classify", "--metric", data("example_metric.json"), "--operator",
             data("example_operator.json"), "--tol-residual", "1e-3"})
            .code == 2);
}

TEST_CASE("classify the shift exactly and by sections") {
  const auto exact = run({"classify", "--shift", data("unilateral_shift.json"), "--n", "2",
                          "--m", "1", "--exact"});
  REQUIRE(exact.code == 0);
  const Json e = exact.json();
  CHECK(e["path"] == "exact");
  CHECK(e["classes"][0]["class"] == "normal");
  CHECK(e["classes"][0]["verdict"] == "fail");
  CHECK(e["classes"][0]["witness_k"] == 1);
  CHECK(e["classes"][1]["verdict"] == "pass");

  const auto section = run({"classify", "--shift", data("unilateral_shift.json"), "--n",
                            "2", "--m", "1"});
  REQUIRE(section.code == 0);
  const Json s = section.json();
  CHECK(s["path"] == "finite_section");
  CHECK(s["classes"][0]["verdict"] == "fail");
  CHECK(s["classes"][1]["verdict"] == "pass");
}

TEST_CASE("verify") {
  const auto ok = run({"verify", "--config", data("suite_example.json")});
  CHECK(ok.code == 0);
  const Json j = ok.json();
  CHECK(j["summary"]["rows"].size() == 1);
  CHECK(j["summary"]["rows"][0]["status"] == "ok");
  CHECK(ok.err.find("thm2_1_fwd") != std::string::npos);

  const fs::path zero = scratch("zero_trials.json");
  std::ofstream(zero) << R"({"trials": 0})";
  CHECK(run({"verify", "--config", zero.string()}).code == 2);
  CHECK(run({"verify"}).code == 2);
}

TEST_CASE("reports are byte identical across runs") {
  const std::vector<std::string> args = {"verify", "--config", data("suite_example.json")};
  CHECK(run(args).out == run(args).out);
  const std::vector<std::string> cls = {"classify", "--metric", data("example_metric.json"),
                                        "--operator", data("example_operator.json")};
  CHECK(run(cls).out == run(cls).out);
}

TEST_CASE("--out writes the report to a file") {
  const fs::path out = scratch("report.json");
  fs::remove(out);
  const auto r = run({"classify", "--metric", data("example_metric.json"), "--operator",
                      data("example_operator.json"), "--out", out.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(anormal::io::parse_json(anormal::io::read_file(out), "r")["command"] == "classify");
}

TEST_CASE("search") {
  const fs::path witness = scratch("witness_dense.json");
  const auto dense = run({"search", "--target", "not_normal(1,1)", "--dim", "2", "--budget",
                          "10000", "--witness", witness.string()});
  REQUIRE(dense.code == 0);
  const Json w = anormal::io::parse_json(anormal::io::read_file(witness), "w");
  // The emitted witness classifies as not (1,1)-A-normal.
  const fs::path a = scratch("w_metric.json");
  const fs::path t = scratch("w_operator.json");
  std::ofstream(a) << anormal::io::dump(w["metric"]);
  std::ofstream(t) << anormal::io::dump(w["operator"]);
  const auto check = run({"classify", "--metric", a.string(), "--operator", t.string()});
  REQUIRE(check.code == 0);
  CHECK((*find_predicate(check.json()["classes"], "nm_normal"))["verdict"] == "fail");

  const fs::path sw = scratch("witness_shift.json");
  const auto shift = run({"search", "--target", "qn_not_normal(2,1)", "--domain", "shift",
                          "--witness", sw.string()});
  REQUIRE(shift.code == 0);
  const Json sj = anormal::io::parse_json(anormal::io::read_file(sw), "w");
  CHECK(anormal::io::shift_from_json(sj["shift"]) == anormal::shift::unilateral_shift());

  CHECK(run({"search", "--target", "bogus(1,1)"}).code == 2);
  CHECK(run({"search", "--target", "not_normal(1,1)", "--budget", "0"}).code == 2);
  CHECK(run({"search", "--target", "not_normal(1,1)", "--domain", "sideways"}).code == 2);
}

TEST_CASE("search exhaustion exits 3") {
  // A single random candidate is never (1,1)-A-quasinormal without being
  // (1,1)-A-normal.
  const fs::path w = scratch("never.json");
  const auto r = run({"search", "--target", "qn_not_normal(1,1)", "--dim", "3", "--budget",
                      "1", "--witness", w.string()});
  CHECK(r.code == 3);
  CHECK(r.json()["result"]["outcome"] == "exhausted");
}

TEST_CASE("version") {
  const auto r = run({"--version"});
  CHECK(r.code == 0);
  CHECK(r.out.find(ANORMAL_VERSION) != std::string::npos);
}

}  // TEST_SUITE
