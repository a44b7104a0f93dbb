#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "textable/embedding.hpp"
#include "textable/error.hpp"
#include "textable/extraction.hpp"
#include "textable/pool.hpp"
#include "textable/vector_store.hpp"

using namespace textable;
using doctest::Approx;
using testing::Gen;
using testing::TempDir;

namespace {

constexpr double kHalfSqrt2 = 0.70710678118654752;

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

VectorStore store2(std::initializer_list<std::pair<const char*, std::vector<double>>> rows) {
  VectorStore s(2);
  for (const auto& [t, v] : rows) s.insert(t, v);
  return s;
}

Nugget nugget(std::string label, std::string mention, std::string context, double position = 0.0) {
  Nugget n;
  n.id = "n";
  n.document_id = "d";
  n.label = std::move(label);
  n.mention = std::move(mention);
  n.context_sentence = std::move(context);
  n.position = position;
  return n;
}

}  // namespace

TEST_CASE("load_vector_store") {
  SUBCASE("plain rows") {
    const auto s = parse_vector_store("a 1 0\nb 0 1");
    CHECK(s.size() == 2);
    CHECK(s.dimension() == 2);
    REQUIRE(s.find("a") != nullptr);
    CHECK(*s.find("a") == std::vector<double>{1, 0});
  }
  SUBCASE("header line and uppercase tokens") {
    const auto s = parse_vector_store("2 3\nAir 1 2 3\nfoo -1e-3 0 4.5\n");
    CHECK(s.size() == 2);
    CHECK(s.dimension() == 3);
    CHECK(s.find("air") != nullptr);
  }
  SUBCASE("inconsistent dimension names the line") {
    CHECK_THROWS_WITH_AS(parse_vector_store("a 1 0\nb 1 0 1\n", "v.txt"), doctest::Contains("v.txt:2"), Error);
  }
  SUBCASE("non-numeric field") {
    CHECK_THROWS_WITH_AS(parse_vector_store("a 1 x\n", "v.txt"), doctest::Contains("v.txt:1"), Error);
  }
  SUBCASE("empty store") {
    CHECK_THROWS_WITH_AS(parse_vector_store(""), doctest::Contains("empty store"), Error);
    CHECK_THROWS_WITH_AS(parse_vector_store("\n\n"), doctest::Contains("empty store"), Error);
  }
  SUBCASE("file") {
    TempDir dir;
    CHECK(load_vector_store(dir.write("v.txt", "x 0.5 0.5\n")).size() == 1);
    CHECK_THROWS_AS(load_vector_store(dir / "missing.txt"), Error);
  }
}

TEST_CASE("embed_tokens") {
  const auto s = store2({{"airline", {1, 0}}, {"incident", {0, 1}}});
  const std::vector<std::string> one{"airline"}, two{"airline", "incident"}, oov{"zzz"};
  const auto a = embed_tokens(one, s);
  REQUIRE(a);
  CHECK((*a)[0] == 1.0);
  CHECK((*a)[1] == 0.0);
  const auto b = embed_tokens(two, s);
  REQUIRE(b);
  CHECK((*b)[0] == Approx(kHalfSqrt2).epsilon(1e-12));
  CHECK((*b)[1] == Approx(kHalfSqrt2).epsilon(1e-12));
  CHECK_FALSE(embed_tokens(oov, s).has_value());
  const std::vector<std::string> upper{"AIRLINE", "zzz"};
  CHECK(embed_tokens(upper, s) == a);
}

TEST_CASE("embed_tokens is permutation invariant") {
  Gen g(5);
  VectorStore s(8);
  std::vector<std::string> vocab;
  for (int i = 0; i < 40; ++i) {
    vocab.push_back("w" + std::to_string(i));
    s.insert(vocab.back(), g.unit_vector(8));
  }
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<std::string> toks;
    const auto n = 1 + g.below(10);
    for (std::size_t i = 0; i < n; ++i) toks.push_back(g.coin(0.2) ? "oov" : vocab[g.below(vocab.size())]);
    auto shuffled = toks;
    for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[g.below(i)]);
    CHECK(embed_tokens(toks, s) == embed_tokens(shuffled, s));
  }
}

TEST_CASE("embed_nugget") {
  auto labels = LabelMap::defaults();
  SUBCASE("identical signals") {
    const auto s = store2({{"airline", {1, 0}}});
    labels.set("CARRIER", "airline");
    const auto e = embed_nugget(nugget("CARRIER", "airline", ""), s, labels, {});
    REQUIRE(e);
    CHECK((*e)[0] == 1.0);
    CHECK((*e)[1] == 0.0);
  }
  SUBCASE("all OOV") {
    const auto s = store2({{"airline", {1, 0}}});
    CHECK_FALSE(embed_nugget(nugget("QQQ", "zzz", "yyy xxx"), s, labels, {}).has_value());
  }
  SUBCASE("mention and label at right angles") {
    const auto s = store2({{"boeing", {1, 0}}, {"aircraft", {0, 1}}});
    labels.set("MODEL", "aircraft");
    const auto e = embed_nugget(nugget("MODEL", "Boeing", ""), s, labels, {1, 1, 0, 0});
    REQUIRE(e);
    // Brute force: w_l*(0,1) + w_m*(1,0) = (1,1), normalized.
    const double bx = 1.0 / std::sqrt(2.0), by = 1.0 / std::sqrt(2.0);
    CHECK((*e)[0] == Approx(bx).epsilon(1e-12));
    CHECK((*e)[1] == Approx(by).epsilon(1e-12));
  }
  SUBCASE("zero weight drops a signal") {
    const auto s = store2({{"boeing", {1, 0}}, {"aircraft", {0, 1}}});
    labels.set("MODEL", "aircraft");
    const auto e = embed_nugget(nugget("MODEL", "Boeing", "aircraft"), s, labels, {0, 1, 0, 0});
    REQUIRE(e);
    CHECK((*e)[0] == 1.0);
  }
  SUBCASE("position adds a coordinate") {
    const auto s = store2({{"boeing", {1, 0}}});
    const auto e = embed_nugget(nugget("QQQ", "boeing", "", 0.5), s, labels, {1, 1, 1, 2});
    REQUIRE(e);
    REQUIRE(e->dimension() == 3);
    // (1, 0, 2*0.5) normalized.
    CHECK((*e)[0] == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK((*e)[2] == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("embed_attribute") {
  const auto s = store2({{"airline", {1, 0}}, {"departure", {1, 0}}, {"city", {0, 1}}});
  const auto a = embed_attribute("airline", s, {});
  REQUIRE(a);
  CHECK(*a == *UnitVector::normalized({1, 0}));
  const auto b = embed_attribute("departure_city", s, {});
  REQUIRE(b);
  CHECK((*b)[0] == Approx(kHalfSqrt2).epsilon(1e-12));
  CHECK((*b)[1] == Approx(kHalfSqrt2).epsilon(1e-12));
  CHECK(embed_attribute("departureCity", s, {}) == b);
  CHECK_FALSE(embed_attribute("qqq", s, {}).has_value());
  const auto p = embed_attribute("airline", s, {1, 1, 1, 1});
  REQUIRE(p);
  CHECK(p->dimension() == 3);
  CHECK((*p)[2] == 0.0);
}

TEST_CASE("cosine_distance") {
  const auto x = *UnitVector::normalized({1, 0});
  const auto y = *UnitVector::normalized({0, 1});
  const auto xy = *UnitVector::normalized({1, 1});
  CHECK(cosine_distance(x, x) == 0.0);
  CHECK(cosine_distance(x, y) == 1.0);
  CHECK(cosine_distance(x, xy) == Approx(0.29289321881345254).epsilon(1e-12));
  CHECK(cosine_distance(x, *UnitVector::normalized({-1, 0})) == 2.0);
  CHECK_THROWS_AS(cosine_distance(x, *UnitVector::normalized({1, 0, 0})), Error);

  Gen g(11);
  for (int i = 0; i < 2000; ++i) {
    const auto d = 2 + g.below(30);
    const auto a = *UnitVector::normalized(g.unit_vector(d));
    const auto b = *UnitVector::normalized(g.unit_vector(d));
    const double ab = cosine_distance(a, b);
    CHECK(ab == cosine_distance(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= 2.0);
    CHECK(cosine_distance(a, a) == Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("UnitVector rejects degenerate input") {
  CHECK_FALSE(UnitVector::normalized({}).has_value());
  CHECK_FALSE(UnitVector::normalized({0, 0}).has_value());
  CHECK_FALSE(UnitVector::normalized({1, NAN}).has_value());
}

TEST_CASE("composite embeddings are unit length and weight-scale invariant") {
  Gen g(2718);
  const std::size_t dim = 16;
  VectorStore s(dim);
  std::vector<std::string> vocab;
  for (int i = 0; i < 200; ++i) {
    vocab.push_back("t" + std::to_string(i));
    std::vector<double> v(dim);
    for (auto& x : v) x = g.normal() * g.uniform(0.01, 100.0);
    s.insert(vocab.back(), v);
  }
  LabelMap labels;
  for (int i = 0; i < 10; ++i) labels.set("L" + std::to_string(i), vocab[g.below(vocab.size())] + " oov");
  auto words = [&](std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) out += (g.coin(0.1) ? std::string("oov") : vocab[g.below(vocab.size())]) + " ";
    return out;
  };
  for (int i = 0; i < 1000; ++i) {
    const auto n = nugget("L" + std::to_string(g.below(12)), words(1 + g.below(3)), words(g.below(15)), g.uniform());
    const SignalWeights w{g.uniform(0, 3), g.uniform(0, 3), g.uniform(0, 3), g.coin() ? g.uniform(0, 2) : 0.0};
    const double c = g.uniform(1e-3, 1e3);
    const SignalWeights wc{w.label * c, w.mention * c, w.context * c, w.position * c};
    const auto e = embed_nugget(n, s, labels, w);
    const auto ec = embed_nugget(n, s, labels, wc);
    REQUIRE(e.has_value() == ec.has_value());
    if (!e) continue;
    CHECK(std::abs(norm(e->values()) - 1.0) <= 1e-9);
    CHECK(std::abs(norm(ec->values()) - 1.0) <= 1e-9);
    REQUIRE(e->dimension() == ec->dimension());
    for (std::size_t k = 0; k < e->dimension(); ++k) CHECK(std::abs((*e)[k] - (*ec)[k]) <= 1e-9);
  }
}

TEST_CASE("SignalWeights validation") {
  CHECK_NOTHROW(SignalWeights{}.validate());
  CHECK_THROWS_AS((SignalWeights{0, 0, 0, 0}.validate()), Error);
  CHECK_THROWS_AS((SignalWeights{-1, 1, 1, 0}.validate()), Error);
  CHECK_THROWS_AS((SignalWeights{INFINITY, 1, 1, 0}.validate()), Error);
}

TEST_CASE("label maps") {
  TempDir dir;
  const auto m = load_label_map(dir.write("l.map", "# carriers\nCARRIER = airline company\norg=firm  # override\n"));
  CHECK(m.phrase("carrier") == "airline company");
  CHECK(m.phrase("ORG") == "firm");
  CHECK(m.phrase("PERSON") == "person name");
  CHECK(m.phrase("UNKNOWN") == "UNKNOWN");
  CHECK_THROWS_WITH_AS(load_label_map(dir.write("b.map", "ok = fine\nbroken line\n")), doctest::Contains(":2:"), Error);
  CHECK_THROWS_AS(load_label_map(dir.write("e.map", "X =   \n")), Error);
}

TEST_CASE("pool excludes fully out-of-vocabulary nuggets") {
  const auto s = store2({{"airline", {1, 0}}, {"city", {0, 1}}});
  LabelMap labels;
  labels.set("X", "qqq");
  std::vector<Nugget> ns{nugget("X", "airline", ""), nugget("X", "zzz", "www"), nugget("X", "city", "")};
  ns[0].id = "b";
  ns[1].id = "c";
  ns[2].id = "a";
  const auto pool = EmbeddedPool::build(ns, s, labels, {});
  CHECK(pool.size() == 2);
  CHECK(pool.diagnostics().total_nuggets == 3);
  CHECK(pool.diagnostics().excluded_oov == 1);
  CHECK(pool.id(0) == "a");
  CHECK(pool.id(1) == "b");
  CHECK(pool.distance(0, 1) == 1.0);
  CHECK(pool.find("b") == std::optional<std::size_t>(1));
  CHECK_FALSE(pool.find("c").has_value());
  ns[2].id = "b";
  CHECK_THROWS_AS(EmbeddedPool::build(ns, s, labels, {}), Error);
}
