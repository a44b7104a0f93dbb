#include "textable/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <unordered_set>

#include "textable/error.hpp"
#include "textable/jsonl.hpp"
#include "textable/matching.hpp"
#include "textable/pool.hpp"

namespace textable {

namespace {

struct AttributeName {
  const char* name;
  std::vector<const char*> tokens;
};

const std::vector<AttributeName>& attribute_names() {
  static const std::vector<AttributeName> names{
      {"airline", {"airline"}},
      {"departure_city", {"departure", "city"}},
      {"aircraft_model", {"aircraft", "model"}},
      {"probable_cause", {"probable", "cause"}},
  };
  return names;
}

constexpr std::size_t kAttributeAxes = 4;
constexpr std::size_t kDistractorTopics = 4;
constexpr std::size_t kLabelAxis = kAttributeAxes + kDistractorTopics;  // two label axes follow
constexpr std::size_t kNoiseStart = kLabelAxis + 2;
constexpr std::size_t kContextWords = 6;
constexpr std::size_t kDistractorValues = 60;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double gaussian() {
    const double u1 = std::max(uniform(), 1e-300);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(draw_below(rng_, n)); }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 rng_;
};

std::vector<double> normalized(std::vector<double> v) {
  double sq = 0;
  for (double x : v) sq += x * x;
  const double n = std::sqrt(sq);
  for (auto& x : v) x /= n;
  return v;
}

std::vector<double> axis(std::size_t dim, std::size_t i) {
  std::vector<double> v(dim, 0.0);
  v[i] = 1.0;
  return v;
}

// Unit vector spread over the noise coordinates only.
std::vector<double> noise_direction(Gen& g, std::size_t dim) {
  std::vector<double> v(dim, 0.0);
  for (std::size_t i = kNoiseStart; i < dim; ++i) v[i] = g.gaussian();
  return normalized(std::move(v));
}

std::vector<double> jitter(Gen& g, const std::vector<double>& center, double scale) {
  std::vector<double> v = center;
  const double per = scale / std::sqrt(static_cast<double>(center.size()));
  for (auto& x : v) x += per * g.gaussian();
  return normalized(std::move(v));
}

std::vector<double> blend(const std::vector<double>& a, const std::vector<double>& b, double wb) {
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i] + wb * b[i];
  return normalized(std::move(v));
}

std::string token_name(const char* prefix, char group, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%c%03zu", prefix, group, n);
  return buf;
}

std::string capitalized(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

}  // namespace

SynthFixture generate_fixture(const SynthConfig& config) {
  if (config.attributes == 0 || config.attributes > attribute_names().size()) {
    invalid("synth supports 1 to " + std::to_string(attribute_names().size()) + " attributes");
  }
  if (config.dimension < kNoiseStart + 4) invalid("synth dimension must be at least " + std::to_string(kNoiseStart + 4));
  if (config.subclusters == 0 || config.values_per_attribute == 0) invalid("synth needs values and sub-clusters");

  Gen g(config.seed);
  const auto dim = config.dimension;
  SynthFixture fx;
  auto add_vector = [&](std::string token, std::vector<double> v) { fx.vectors.emplace_back(std::move(token), std::move(v)); };

  add_vector("entity", axis(dim, kLabelAxis));
  add_vector("code", axis(dim, kLabelAxis + 1));
  fx.labels = {{"ENTITY", "entity"}, {"CODE", "code"}};

  std::vector<std::vector<std::string>> values(config.attributes);
  std::vector<std::vector<std::string>> contexts(config.attributes);
  for (std::size_t a = 0; a < config.attributes; ++a) {
    const auto& spec = attribute_names()[a];
    fx.attributes.push_back(spec.name);
    const auto center = axis(dim, a);
    for (const char* t : spec.tokens) add_vector(t, jitter(g, center, 0.1));
    std::vector<std::vector<double>> subs;
    for (std::size_t s = 0; s < config.subclusters; ++s) subs.push_back(blend(center, noise_direction(g, dim), 0.35));
    const char group = static_cast<char>('a' + a);
    for (std::size_t v = 0; v < config.values_per_attribute; ++v) {
      values[a].push_back(token_name("val", group, v));
      add_vector(values[a].back(), jitter(g, subs[v % subs.size()], 0.15));
    }
    for (std::size_t c = 0; c < kContextWords; ++c) {
      contexts[a].push_back(token_name("ctx", group, c));
      add_vector(contexts[a].back(), jitter(g, center, 0.15));
    }
  }

  std::vector<std::vector<std::string>> dvalues(kDistractorTopics);
  std::vector<std::vector<std::string>> dcontexts(kDistractorTopics);
  for (std::size_t t = 0; t < kDistractorTopics; ++t) {
    const auto center = axis(dim, kAttributeAxes + t);
    const char group = static_cast<char>('p' + t);
    for (std::size_t v = 0; v < kDistractorValues; ++v) {
      dvalues[t].push_back(token_name("dst", group, v));
      add_vector(dvalues[t].back(), jitter(g, center, 0.25));
    }
    for (std::size_t c = 0; c < kContextWords; ++c) {
      dcontexts[t].push_back(token_name("ctx", group, c));
      add_vector(dcontexts[t].back(), jitter(g, center, 0.15));
    }
  }

  fx.true_nuggets.resize(config.attributes);
  for (std::size_t d = 0; d < config.documents; ++d) {
    struct Sentence {
      std::string text;
      std::size_t mention_offset;
      std::size_t mention_length;
      std::optional<std::size_t> attribute;
    };
    std::vector<Sentence> sentences;
    for (std::size_t a = 0; a < config.attributes; ++a) {
      const auto ctx = capitalized(contexts[a][g.below(kContextWords)]);
      const auto val = capitalized(values[a][g.below(values[a].size())]);
      sentences.push_back({ctx + " " + val + ".", ctx.size() + 1, val.size(), a});
    }
    for (std::size_t k = 0; k < config.distractors_per_document; ++k) {
      const auto t = g.below(kDistractorTopics);
      const auto ctx = capitalized(dcontexts[t][g.below(kContextWords)]);
      const auto val = capitalized(dvalues[t][g.below(kDistractorValues)]);
      sentences.push_back({ctx + " " + val + ".", ctx.size() + 1, val.size(), std::nullopt});
    }
    g.shuffle(sentences);

    char id[16];
    std::snprintf(id, sizeof id, "doc%04zu", d);
    Document doc{id, ""};
    std::vector<std::tuple<std::size_t, std::size_t, std::optional<std::size_t>>> mentions;
    for (const auto& s : sentences) {
      if (!doc.text.empty()) doc.text += ' ';
      const auto start = doc.text.size() + s.mention_offset;
      mentions.emplace_back(start, start + s.mention_length, s.attribute);
      doc.text += s.text;
    }
    const auto spans = split_sentences(doc.text);
    for (const auto& [start, end, attribute] : mentions) {
      auto nugget = make_nugget(doc, spans, g.below(2) == 0 ? "ENTITY" : "CODE", start, end);
      if (attribute) {
        Annotation ann;
        ann.start = start;
        ann.end = end;
        ann.surface = nugget.mention;
        if (*attribute % 2 == 0) {  // half the attributes are scored by value, half by span
          ann.raw_canonical = nugget.mention;
          ann.canonical = canonicalize_truth(nugget.mention);
        }
        fx.truth.add(doc.id, fx.attributes[*attribute], std::move(ann));
        fx.true_nuggets[*attribute].push_back(nugget.id);
      }
      fx.nuggets.push_back(std::move(nugget));
    }
    fx.documents.add(std::move(doc));
  }
  return fx;
}

VectorStore fixture_store(const SynthFixture& fixture) {
  VectorStore store(fixture.vectors.front().second.size());
  for (const auto& [token, v] : fixture.vectors) store.insert(token, v);
  return store;
}

LabelMap fixture_labels(const SynthFixture& fixture) {
  auto labels = LabelMap::defaults();
  for (const auto& [label, phrase] : fixture.labels) labels.set(label, phrase);
  return labels;
}

double planted_margin(const SynthFixture& fixture, std::size_t attribute, const SignalWeights& weights) {
  const auto store = fixture_store(fixture);
  const auto pool = EmbeddedPool::build(fixture.nuggets, store, fixture_labels(fixture), weights);
  const auto& truth_ids = fixture.true_nuggets.at(attribute);
  const std::unordered_set<std::string> truth(truth_ids.begin(), truth_ids.end());
  std::vector<std::size_t> inside;
  std::vector<std::size_t> outside;
  for (std::size_t i = 0; i < pool.size(); ++i) (truth.contains(pool.id(i)) ? inside : outside).push_back(i);
  std::vector<double> nearest(outside.size());
  kernels::nearest_in_set_parallel(pool.vectors(), outside, inside, nearest);
  return nearest.empty() ? 2.0 : *std::min_element(nearest.begin(), nearest.end());
}

FixturePaths write_fixture(const SynthFixture& fixture, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  FixturePaths p{dir / "docs.jsonl", dir / "nuggets.jsonl", dir / "vectors.txt", dir / "labels.map",
                 dir / "truth.jsonl"};
  write_documents(p.documents, fixture.documents);

  std::vector<jsonl::json> records;
  for (const auto& n : fixture.nuggets) {
    auto r = to_interchange(n);
    r["context_sentence"] = nullptr;  // left for the importer to reconstruct
    records.push_back(std::move(r));
  }
  jsonl::write(p.nuggets, records);

  std::string vec = std::to_string(fixture.vectors.size()) + " " +
                    std::to_string(fixture.vectors.front().second.size()) + "\n";
  char buf[40];
  for (const auto& [token, v] : fixture.vectors) {
    vec += token;
    for (double x : v) {
      std::snprintf(buf, sizeof buf, " %.17g", x);
      vec += buf;
    }
    vec += '\n';
  }
  jsonl::write_file(p.vectors, vec);

  std::string labels = "# label = phrase\n";
  for (const auto& [label, phrase] : fixture.labels) labels += label + " = " + phrase + "\n";
  jsonl::write_file(p.label_map, labels);

  write_ground_truth(p.truth, fixture.truth);
  return p;
}

}  // namespace textable
