#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "textable/cli.hpp"

using namespace textable;
using testing::slurp;
using testing::TempDir;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = run_command(args, in, out, err);
  return {code, out.str(), err.str()};
}

struct Fixture {
  TempDir dir;
  std::string docs, nuggets, vectors, labels, truth;
  Fixture() {
    const auto r = run({"synth", "--seed", "42", "--documents", "60", "--out-dir", dir.path().string()});
    REQUIRE(r.code == 0);
    docs = (dir / "docs.jsonl").string();
    nuggets = (dir / "nuggets.jsonl").string();
    vectors = (dir / "vectors.txt").string();
    labels = (dir / "labels.map").string();
    truth = (dir / "truth.jsonl").string();
  }
  std::vector<std::string> match(const std::string& out, const std::string& session, std::vector<std::string> extra = {}) const {
    std::vector<std::string> a{"match",        "--docs",     docs,     "--nuggets",    nuggets,
                               "--vectors",    vectors,      "--labelmap", labels,     "--attributes",
                               "airline,departure_city,aircraft_model,probable_cause", "--feedback",
                               "oracle",       "--gt",       truth,    "--out",        out,
                               "--session-out", session};
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
  }
};

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"--no-such-flag"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"extract", "--docs", "x.jsonl"}).code == 2);
  CHECK(run({"extract", "--docs", "x", "--out", "y", "--bogus"}).code == 2);
  CHECK(run({"match", "--docs", "d", "--vectors", "v", "--attributes", "a", "--feedback", "mind-reading"}).code == 2);
  const auto r = run({"--no-such-flag"});
  CHECK(r.err.find("--no-such-flag") != std::string::npos);
}

TEST_CASE("help exits with 0") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("match") != std::string::npos);
  CHECK(run({"match", "--help"}).code == 0);
}

TEST_CASE("extract and import") {
  TempDir dir;
  const auto docs = dir.write("d.jsonl", "{\"id\":\"d1\",\"text\":\"The crash on October 25, 1999 involved US Airways.\"}\n");
  const auto out = dir / "n.jsonl";
  auto r = run({"extract", "--docs", docs.string(), "--out", out.string()});
  CHECK(r.code == 0);
  const auto content = slurp(out);
  CHECK(content.find("\"October 25, 1999\"") != std::string::npos);
  CHECK(content.find("\"US Airways\"") != std::string::npos);

  r = run({"import", "--docs", docs.string(), "--nuggets", out.string()});
  CHECK(r.code == 0);
  CHECK(r.err.find("2 nuggets") != std::string::npos);

  const auto broken = dir.write("b.jsonl", R"({"document_id":"zzz","label":"ORG","mention":"x","start":0,"end":1,"context_sentence":null})" "\n");
  r = run({"import", "--docs", docs.string(), "--nuggets", broken.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("zzz") != std::string::npos);
  CHECK(run({"extract", "--docs", (dir / "missing.jsonl").string(), "--out", out.string()}).code == 1);
}

TEST_CASE("match with oracle feedback is deterministic") {
  Fixture f;
  const auto t1 = (f.dir / "t1.csv").string(), s1 = (f.dir / "s1.json").string();
  const auto t2 = (f.dir / "t2.csv").string(), s2 = (f.dir / "s2.json").string();
  const auto r1 = run(f.match(t1, s1, {"--budget", "25", "--seed", "7"}));
  REQUIRE(r1.code == 0);
  const auto r2 = run(f.match(t2, s2, {"--budget", "25", "--seed", "7"}));
  REQUIRE(r2.code == 0);
  CHECK(slurp(t1) == slurp(t2));
  CHECK(slurp(s1) == slurp(s2));
  CHECK(slurp(t1).rfind("document_id,airline,departure_city,aircraft_model,probable_cause\n", 0) == 0);

  const auto rep1 = (f.dir / "r1.json").string(), rep2 = (f.dir / "r2.json").string();
  const auto e1 = run({"eval", "--table", t1, "--gt", f.truth, "--docs", f.docs, "--out", rep1});
  const auto e2 = run({"eval", "--table", t2, "--gt", f.truth, "--docs", f.docs, "--out", rep2});
  CHECK(e1.code == 0);
  CHECK(e1.out == e2.out);
  CHECK(slurp(rep1) == slurp(rep2));
  CHECK(e1.out.find("macro avg f1") != std::string::npos);

  const auto tj = (f.dir / "t.json").string();
  CHECK(run(f.match(tj, (f.dir / "s3.json").string(), {"--seed", "7", "--format", "json"})).code == 0);
  const auto ej = run({"eval", "--table", tj, "--gt", f.truth, "--docs", f.docs});
  CHECK(ej.code == 0);
  CHECK(ej.out == e1.out);
}

TEST_CASE("match flags reach the engine") {
  Fixture f;
  const auto t = (f.dir / "t.csv").string(), s = (f.dir / "s.json").string();
  REQUIRE(run(f.match(t, s, {"--budget", "3", "--threshold", "2", "--k", "3", "--q0", "0.5", "--tau", "0.4", "--seed",
                             "9", "--w-label", "0.5", "--w-mention", "2", "--w-context", "1", "--w-position", "0.1"}))
              .code == 0);
  const auto j = nlohmann::json::parse(slurp(s));
  const auto& cfg = j["query"]["config"];
  CHECK(cfg["budget"] == 3);
  CHECK(cfg["confirm_threshold"] == 2);
  CHECK(cfg["k"] == 3);
  CHECK(cfg["q0"] == 0.5);
  CHECK(cfg["tau"] == 0.4);
  CHECK(cfg["seed"] == 9);
  CHECK(j["query"]["weights"]["mention"] == 2.0);
  CHECK(j["query"]["weights"]["position"] == 0.1);
  for (const auto& st : j["sessions"]) CHECK(st["interactions_used"].get<int>() <= 3);
}

TEST_CASE("match domain errors exit with 1") {
  Fixture f;
  auto args = f.match((f.dir / "t.csv").string(), (f.dir / "s.json").string());
  auto no_gt = args;
  const auto it = std::find(no_gt.begin(), no_gt.end(), "--gt");
  no_gt.erase(it, it + 2);
  CHECK(run(no_gt).code == 1);
  auto bad_attr = args;
  *(std::find(bad_attr.begin(), bad_attr.end(), "--attributes") + 1) = "qqqq";
  const auto r = run(bad_attr);
  CHECK(r.code == 1);
  CHECK(r.err.find("qqqq") != std::string::npos);
  CHECK(run(f.match((f.dir / "t.csv").string(), (f.dir / "s.json").string(), {"--k", "0"})).code == 1);
}

TEST_CASE("match with terminal feedback") {
  Fixture f;
  const auto t = (f.dir / "t.csv").string();
  std::vector<std::string> args{"match",       "--docs",     f.docs,     "--nuggets", f.nuggets, "--vectors",
                                f.vectors,     "--labelmap", f.labels,   "--attributes", "airline", "--feedback",
                                "tty",         "--budget",   "3",        "--out",     t};
  const auto r = run(args, "maybe\ny\nn\nyes\n");
  CHECK(r.code == 0);
  CHECK(r.err.find("belongs to airline?") != std::string::npos);
  CHECK(r.err.find("value: ") != std::string::npos);
  CHECK(r.err.find("airline: ") != std::string::npos);
  CHECK(slurp(t).rfind("document_id,airline\n", 0) == 0);
  CHECK(run(args, "y\n").code == 1);  // input ends before the budget
}

TEST_CASE("eval errors") {
  Fixture f;
  const auto table = f.dir.write("t.csv", "document_id,airline\nghost,x\n");
  CHECK(run({"eval", "--table", table.string(), "--gt", f.truth, "--docs", f.docs}).code == 1);
  CHECK(run({"eval", "--table", (f.dir / "none.csv").string(), "--gt", f.truth, "--docs", f.docs}).code == 1);
}

#ifdef TEXTABLE_EXE
TEST_CASE("installed binary") {
  TempDir dir;
  const std::string exe = TEXTABLE_EXE;
  CHECK(std::system((exe + " --no-such-flag 2>/dev/null").c_str()) != 0);
  CHECK(WEXITSTATUS(std::system((exe + " --no-such-flag 2>/dev/null").c_str())) == 2);
  CHECK(WEXITSTATUS(std::system((exe + " synth --documents 5 --out-dir " + dir.path().string() + " >/dev/null").c_str())) == 0);
}
#endif
