#include <doctest.h>

#include "support.hpp"
#include "textable/error.hpp"
#include "textable/evaluation.hpp"
#include "textable/session_io.hpp"
#include "textable/synth.hpp"
#include "textable/workspace.hpp"

using namespace textable;
using nlohmann::json;
using testing::EuclideanSpace;
using testing::Gen;
using testing::TempDir;

namespace {

struct Fixture {
  TempDir dir;
  SynthFixture fx;
  FixturePaths paths;
  Fixture() {
    SynthConfig cfg;
    cfg.documents = 30;
    fx = generate_fixture(cfg);
    paths = write_fixture(fx, dir.path());
  }
  QuerySpec spec(std::vector<std::string> attributes = {}) const {
    QuerySpec s;
    s.documents = paths.documents;
    s.nuggets = paths.nuggets;
    s.vectors = paths.vectors;
    s.label_map = paths.label_map;
    s.attributes = attributes.empty() ? fx.attributes : std::move(attributes);
    return s;
  }
};

void script(MatchingSession& s, const GroundTruth& truth, const EmbeddedPool& pool, std::size_t steps) {
  for (std::size_t i = 0; i < steps && s.current(); ++i) {
    const auto& n = pool.nugget(s.current()->nugget);
    s.submit(s.current()->nugget, oracle_feedback(truth, s.attribute(), n));
  }
}

}  // namespace

TEST_CASE("config json round-trip") {
  SessionConfig c;
  c.k = 3;
  c.budget = 7;
  c.confirm_threshold = 4;
  c.q0 = 0.125;
  c.seed = 0xffffffffffffffffULL;
  CHECK(config_from_json(config_to_json(c)) == c);
  CHECK(config_to_json(c)["tau"].is_null());
  c.tau = 0.25;
  CHECK(config_from_json(config_to_json(c)) == c);
  CHECK(config_from_json(json::object()) == SessionConfig{});
  CHECK_THROWS_AS(config_from_json({{"k", 0}}), Error);
  CHECK_THROWS_AS(config_from_json({{"q0", "x"}}), Error);
}

TEST_CASE("session state survives serialization mid-run") {
  Gen g(21);
  EuclideanSpace space;
  std::vector<double> dist;
  for (int i = 0; i < 120; ++i) {
    const double x = g.uniform(-1, 1), y = g.uniform(-1, 1);
    space.add("n" + std::to_string(1000 + i), {x, y});
    dist.push_back(std::hypot(x, y));
  }
  SessionConfig cfg;
  cfg.seed = 99;
  cfg.budget = 40;
  cfg.confirm_threshold = 15;
  auto decide = [](std::size_t n) { return n % 3 != 1 ? FeedbackDecision::confirm : FeedbackDecision::reject; };
  for (std::size_t cut : {0u, 1u, 3u, 8u, 17u}) {
    MatchingSession a(space, "attr", dist, cfg);
    for (std::size_t i = 0; i < cut && a.current(); ++i) a.submit(a.current()->nugget, decide(a.current()->nugget));
    const auto saved = session_to_json(a);
    MatchingSession b(space, dist, session_state_from_json(json::parse(saved.dump()), cfg, space));
    CHECK(session_to_json(b) == saved);
    while (a.current()) {
      REQUIRE(b.current());
      CHECK(*a.current() == *b.current());
      const auto n = a.current()->nugget;
      a.submit(n, decide(n));
      b.submit(n, decide(n));
    }
    CHECK(b.current() == nullptr);
    CHECK(session_to_json(a).dump() == session_to_json(b).dump());
  }
}

TEST_CASE("malformed session state") {
  EuclideanSpace space;
  space.add("a", {0, 0});
  space.add("b", {1, 0});
  MatchingSession s(space, "attr", {0.0, 1.0}, {});
  auto j = session_to_json(s);
  auto bad = j;
  bad["phase"] = "sleeping";
  CHECK_THROWS_AS(session_state_from_json(bad, {}, space), Error);
  bad = j;
  bad["pending"] = json::array({{{"id", "zzz"}, {"parent", nullptr}, {"distance", 0.0}}});
  CHECK_THROWS_WITH_AS(session_state_from_json(bad, {}, space), doctest::Contains("zzz"), Error);
  bad = j;
  bad["rng"] = "not a state";
  CHECK_THROWS_AS(session_state_from_json(bad, {}, space), Error);
}

TEST_CASE("workspace open, persist and restore") {
  Fixture f;
  auto ws = Workspace::open(f.spec());
  CHECK(ws->sessions().size() == 4);
  for (const auto& s : ws->sessions()) CHECK(s.phase() == Phase::root_search);
  for (auto& s : ws->sessions()) script(s, f.fx.truth, ws->pool(), 6);
  const auto file = ws->session_file();
  CHECK(file["format"] == "textable-session");
  CHECK(file["version"] == 1);

  auto back = Workspace::restore(json::parse(file.dump()));
  CHECK(back->session_file().dump() == file.dump());
  for (std::size_t i = 0; i < 4; ++i) {
    auto& a = ws->sessions()[i];
    auto& b = back->sessions()[i];
    script(a, f.fx.truth, ws->pool(), 100);
    script(b, f.fx.truth, back->pool(), 100);
  }
  CHECK(back->session_file().dump() == ws->session_file().dump());
  CHECK(table_to_csv(back->table()) == table_to_csv(ws->table()));
}

TEST_CASE("workspace validation") {
  Fixture f;
  SUBCASE("missing vector store names the path") {
    auto s = f.spec();
    s.vectors = f.dir / "nowhere.vec";
    CHECK_THROWS_WITH_AS(Workspace::open(s), doctest::Contains("nowhere.vec"), Error);
  }
  SUBCASE("empty attribute list") {
    auto s = f.spec();
    s.attributes.clear();
    CHECK_THROWS_AS(Workspace::open(s), Error);
  }
  SUBCASE("duplicate attribute") {
    CHECK_THROWS_AS(Workspace::open(f.spec({"airline", "airline"})), Error);
  }
  SUBCASE("attribute with no known token") {
    CHECK_THROWS_WITH_AS(Workspace::open(f.spec({"qqqq"})), doctest::Contains("qqqq"), Error);
  }
  SUBCASE("foreign files") {
    CHECK_THROWS_AS(Workspace::restore(json{{"format", "other"}}), Error);
    auto file = Workspace::open(f.spec())->session_file();
    file["version"] = 99;
    CHECK_THROWS_AS(Workspace::restore(file), Error);
  }
  SUBCASE("query spec json") {
    auto s = f.spec({"airline"});
    s.config.tau = 0.5;
    s.weights.position = 0.25;
    const auto back = QuerySpec::from_json(s.to_json());
    CHECK(back.to_json() == s.to_json());
    CHECK_THROWS_AS(QuerySpec::from_json(json{{"documents", "d"}, {"vectors", "v"}, {"attributes", "x"}}), Error);
  }
}
