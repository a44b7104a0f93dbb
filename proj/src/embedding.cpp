#include "textable/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "textable/error.hpp"
#include "textable/jsonl.hpp"
#include "textable/text.hpp"

namespace textable {

std::optional<UnitVector> UnitVector::normalized(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  double sq = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) return std::nullopt;
    sq += v * v;
  }
  const double norm = std::sqrt(sq);
  if (!(norm > 0.0) || !std::isfinite(norm)) return std::nullopt;
  for (auto& v : values) v /= norm;
  return UnitVector(std::move(values));
}

void SignalWeights::validate() const {
  for (double w : {label, mention, context, position}) {
    if (!std::isfinite(w) || w < 0.0) invalid("signal weights must be finite and non-negative");
  }
  if (label + mention + context + position <= 0.0) invalid("signal weights must not all be zero");
}

LabelMap LabelMap::defaults() {
  LabelMap m;
  m.set("ORG", "organization company");
  m.set("PERSON", "person name");
  m.set("PER", "person name");
  m.set("GPE", "country city state");
  m.set("LOC", "location place");
  m.set("FAC", "facility building airport");
  m.set("NORP", "nationality group");
  m.set("DATE", "date");
  m.set("TIME", "time");
  m.set("NUMBER", "number");
  m.set("CARDINAL", "number count");
  m.set("ORDINAL", "ordinal number");
  m.set("QUANTITY", "quantity amount");
  m.set("PERCENT", "percentage");
  m.set("MONEY", "money amount");
  m.set("PRODUCT", "product");
  m.set("EVENT", "event");
  m.set("ENTITY", "name entity");
  m.set("MISC", "miscellaneous");
  return m;
}

void LabelMap::set(std::string_view label, std::string phrase) {
  if (text::trim(phrase).empty()) invalid("label \"" + std::string(label) + "\" maps to an empty phrase");
  entries_[text::to_lower(text::trim(label))] = std::move(phrase);
}

std::string LabelMap::phrase(std::string_view label) const {
  auto it = entries_.find(text::to_lower(text::trim(label)));
  return it == entries_.end() ? std::string(label) : it->second;
}

LabelMap load_label_map(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) invalid("label map not found: " + path.string());
  auto map = LabelMap::defaults();
  std::istringstream in(jsonl::read_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = std::string_view(line).substr(0, line.find('#'));
    body = text::trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const auto where = path.string() + ":" + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) invalid(where + "expected LABEL = phrase");
    const auto key = text::trim(body.substr(0, eq));
    const auto phrase = text::trim(body.substr(eq + 1));
    if (key.empty()) invalid(where + "empty label");
    if (phrase.empty()) invalid(where + "empty phrase for label \"" + std::string(key) + "\"");
    map.set(key, std::string(phrase));
  }
  return map;
}

double cosine_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    invalid("dimension mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  return unit_distance(a, b);
}

double cosine_distance(const UnitVector& a, const UnitVector& b) { return cosine_distance(a.values(), b.values()); }

std::optional<UnitVector> embed_tokens(std::span<const std::string> tokens, const VectorStore& store) {
  std::vector<std::string> known;
  for (const auto& t : tokens) {
    auto lower = text::to_lower(t);
    if (store.find(lower) != nullptr) known.push_back(std::move(lower));
  }
  if (known.empty()) return std::nullopt;
  std::sort(known.begin(), known.end());
  std::vector<double> sum(store.dimension(), 0.0);
  for (const auto& t : known) {
    const auto& v = *store.find(t);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += v[i];
  }
  for (auto& s : sum) s /= static_cast<double>(known.size());
  return UnitVector::normalized(std::move(sum));
}

namespace {

// Adds weight * E(tokens) into `acc`; returns whether the signal contributed.
bool accumulate(std::vector<double>& acc, double weight, const std::vector<std::string>& tokens,
                const VectorStore& store) {
  if (weight <= 0.0) return false;
  auto e = embed_tokens(tokens, store);
  if (!e) return false;
  for (std::size_t i = 0; i < e->dimension(); ++i) acc[i] += weight * (*e)[i];
  return true;
}

}  // namespace

std::optional<CompositeEmbedding> embed_nugget(const Nugget& nugget, const VectorStore& store, const LabelMap& labels,
                                               const SignalWeights& weights) {
  std::vector<double> acc(composite_dimension(store, weights), 0.0);
  bool any = false;
  any |= accumulate(acc, weights.label, text::tokenize(labels.phrase(nugget.label)), store);
  any |= accumulate(acc, weights.mention, text::tokenize(nugget.mention), store);
  any |= accumulate(acc, weights.context, text::tokenize(nugget.context_sentence), store);
  if (!any) return std::nullopt;
  if (weights.position > 0.0) acc.back() = weights.position * nugget.position;
  return UnitVector::normalized(std::move(acc));
}

std::optional<CompositeEmbedding> embed_attribute(std::string_view name, const VectorStore& store,
                                                  const SignalWeights& weights) {
  auto e = embed_tokens(text::tokenize_identifier(name), store);
  if (!e) return std::nullopt;
  if (weights.position <= 0.0) return e;
  std::vector<double> padded(e->values().begin(), e->values().end());
  padded.push_back(0.0);
  return UnitVector::normalized(std::move(padded));
}

}  // namespace textable
