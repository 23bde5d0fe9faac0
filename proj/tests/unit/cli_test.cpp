#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "findmy/cli.hpp"

using namespace findmy;
using namespace findmy::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "findmy_cli_test";
  fs::create_directories(dir);
  auto p = dir / name;
  fs::remove(p);
  return p;
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("config parsing") {
  auto c = config_from_json(json::parse(R"({
    "bounds": {"sessions": 1, "epochs": 2, "reports": 1, "deduction_depth": 4},
    "reveals": ["d0", "ski"],
    "lemmas": ["sanity_check"],
    "seed": 7,
    "output": {"report": "r.json"}
  })"));
  CHECK(c.bounds.epochs == 2);
  CHECK(c.bounds.deduction_depth == 4);
  CHECK(c.bounds.injection_bound == 4);
  REQUIRE(c.reveals.has_value());
  CHECK(c.reveals->d0);
  CHECK(c.reveals->ski);
  CHECK_FALSE(c.reveals->sk0);
  CHECK(c.seed == 7);
  CHECK(c.report_path == fs::path("r.json"));
  CHECK(selected_lemmas(c).size() == 1);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"bounds": {"epochs": -1}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"bounds": {"turns": 1}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"colour": 1})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"backend": "quantum"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"reveals": ["d7"]})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"custom_lemmas": [{"name": "x", "formula": "Ex #i. Nope() @ #i"}]})")),
                  ConfigError);
  ScenarioConfig c;
  c.lemmas = {"no_such_lemma"};
  CHECK_THROWS_AS(selected_lemmas(c), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("bound overrides") {
  ScenarioConfig c;
  apply_bound(c, "epochs=5");
  apply_bound(c, "reveals=d0,sk0");
  CHECK(c.bounds.epochs == 5);
  CHECK(c.reveals == RevealSet{true, true, false, false});
  apply_bound(c, "reveals=");
  CHECK(c.reveals->empty());
  CHECK_THROWS_AS(apply_bound(c, "epochs"), ConfigError);
  CHECK_THROWS_AS(apply_bound(c, "epochs=x"), ConfigError);
  CHECK_THROWS_AS(apply_bound(c, "epochs=-2"), ConfigError);
  CHECK_THROWS_AS(apply_bound(c, "width=2"), ConfigError);
}

TEST_CASE("custom lemmas shadow builtins and join the default selection") {
  auto c = config_from_json(json::parse(R"j({
    "custom_lemmas": [
      {"name": "d0_sec", "formula": "All O L d0 #i. LPFS1(L, O, d0, _, _, _) @ #i ==> not (Ex #j. K(d0) @ #j)",
       "reveals": ["d0"]},
      {"name": "extra", "formula": "Ex #i. KeyEst(_, _, _, _) @ #i", "kind": "exists-trace"}
    ]})j"));
  auto ls = selected_lemmas(c);
  REQUIRE(ls.size() == 13);
  CHECK(ls.back().name == "extra");
  CHECK(ls[11].name == "d0_sec");
  CHECK(ls[11].reveals.d0);
  CHECK_FALSE(ls[11].reveals.sk0);
  CHECK(std::count_if(ls.begin(), ls.end(), [](const Lemma& l) { return l.name == "d0_sec"; }) == 1);
}

TEST_CASE("verify exit codes") {
  std::ostringstream out, err;
  ScenarioConfig c;
  c.lemmas = {"sanity_check"};
  CHECK(cmd_verify(c, out, err) == kExitOk);
  auto report = json::parse(out.str());
  CHECK(report["results"].size() == 1);
  CHECK(report["results"][0]["verdict"] == "holds");
  CHECK(report["tool"]["version"] == std::string(tool_version()));
  CHECK_FALSE(report["results"][0].contains("seconds"));

  auto weak = config_from_json(json::parse(R"j({
    "bounds": {"epochs": 1, "reports": 0},
    "lemmas": ["d0_sec"],
    "custom_lemmas": [{"name": "d0_sec",
      "formula": "All O L d0 #i. LPFS1(L, O, d0, _, _, _) @ #i ==> not (Ex #j. K(d0) @ #j)", "reveals": ["d0"]}]})j"));
  out.str("");
  CHECK(cmd_verify(weak, out, err) == kExitRegression);
  report = json::parse(out.str());
  REQUIRE(report["results"][0].contains("counterexample"));
  CHECK(report["results"][0]["counterexample"]["knowledge"][0]["proof"]["rule"] == "known");

  ScenarioConfig concrete;
  concrete.backend = Backend::Concrete;
  CHECK(cmd_verify(concrete, out, err) == kExitUsage);
}

TEST_CASE("timed-out lemmas are labelled as bounded") {
  std::ostringstream out, err;
  ScenarioConfig c;
  c.lemmas = {"ski_sec"};
  c.bounds.epochs = 2;
  c.timing = true;
  CHECK(cmd_verify(c, out, err) == kExitOk);
  auto r = json::parse(out.str())["results"][0];
  CHECK(r["verdict"] == "holds-at-bound");
  CHECK(r["bounded_only"] == true);
  CHECK(r.contains("seconds"));
}

TEST_CASE("trace dumps") {
  ScenarioConfig c;
  c.bounds.epochs = 2;
  c.bounds.reports = 1;
  std::ostringstream a, b;
  auto stats = write_trace_dump(c, a);
  write_trace_dump(c, b);
  CHECK(a.str() == b.str());
  CHECK(lines(a.str()) == stats.trace_steps);
  std::istringstream in(a.str());
  std::string line;
  std::getline(in, line);
  auto first = json::parse(line);
  CHECK(first["trace"] == 0);
  CHECK(first["step"] == 1);
  CHECK(first["rule"] == "GenKeys");
  CHECK(first["event"] == "KeyEst");

  ScenarioConfig empty;
  empty.bounds.sessions = 0;
  std::ostringstream e;
  write_trace_dump(empty, e);
  CHECK(e.str() ==
        R"({"trace":0,"step":0,"rule":null,"event":null,"params":[],"actions":[],"consumed":[],"produced":[]})"
        "\n");
}

TEST_CASE("dump to an unwritable path") {
  ScenarioConfig c;
  c.dump_path = "/nonexistent/dir/out.jsonl";
  std::ostringstream out, err;
  CHECK(cmd_dump_traces(c, out, err) == kExitUsage);
}

TEST_CASE("demo round trip") {
  auto store = scratch("demo.jsonl");
  auto r1 = run_demo(1, 3, store);
  CHECK(r1.transcript.back() == "result ok");
  CHECK(std::find(r1.transcript.begin(), r1.transcript.end(), "owner.matched_epoch 3") != r1.transcript.end());
  CHECK(std::find(r1.transcript.begin(), r1.transcript.end(), "cross_epoch epoch 2 keys rejected (authentication)") !=
        r1.transcript.end());
  auto r2 = run_demo(1, 3, scratch("demo2.jsonl"));
  CHECK(r1.transcript == r2.transcript);
  auto r3 = run_demo(2, 3, scratch("demo3.jsonl"));
  CHECK(r1.transcript != r3.transcript);
  auto single = run_demo(5, 1, scratch("demo4.jsonl"));
  CHECK(single.transcript.back() == "result ok");
  CHECK_THROWS_AS(run_demo(1, 0, scratch("demo5.jsonl")), StageError);
}

TEST_CASE("demo reports a failing stage") {
  std::ostringstream out, err;
  ScenarioConfig c;
  c.store_path = "/nonexistent/dir/store.jsonl";
  CHECK(cmd_demo(c, out, err) == kExitRegression);
  CHECK(err.str().find("stage store") != std::string::npos);
}

TEST_CASE("file report store") {
  auto path = scratch("store.jsonl");
  FileReportStore store(path);
  crypto::ConcreteProvider prov(crypto::RandomSource::seeded(3));
  auto d = prov.fresh_secret("d");
  protocol::Beacon<crypto::ConcreteProvider> beacon{prov.pub_of(d), {}};
  auto report = protocol::finder_make_report(beacon, crypto::Bytes{1, 2, 3}, 9, prov);
  store.store(report, 10);
  store.store(report, 11);
  CHECK_THROWS_AS(store.fetch({{"O"}, false}, report.report_id), protocol::AuthenticationRequired);
  auto got = store.fetch({{"O"}, true}, report.report_id);
  REQUIRE(got.size() == 2);
  CHECK(got[0].ciphertext == report.ciphertext);
  CHECK(got[0].ephemeral_pub == report.ephemeral_pub);
  CHECK(got[1].upload_time == 11u);
  CHECK(store.fetch({{"O"}, true}, crypto::Digest{}).empty());
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  CHECK(json::parse(first)["report_id"] == crypto::to_hex(report.report_id));
}
