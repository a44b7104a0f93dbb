#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "textable/extraction.hpp"
#include "textable/vector_store.hpp"

namespace textable {

/// A vector of unit L2 norm. The only way to obtain one is normalization.
class UnitVector {
 public:
  /// Absent when `values` is empty, has a non-finite entry, or has zero norm.
  static std::optional<UnitVector> normalized(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  std::size_t dimension() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const UnitVector&, const UnitVector&) = default;

 private:
  explicit UnitVector(std::vector<double> v) : values_(std::move(v)) {}
  std::vector<double> values_;
};

/// The fused nugget/attribute representation; every distance is taken between these.
using CompositeEmbedding = UnitVector;

struct SignalWeights {
  double label = 1.0;
  double mention = 1.0;
  double context = 1.0;
  double position = 0.0;

  /// Throws invalid_input for negative/non-finite weights or an all-zero sum.
  void validate() const;
  friend bool operator==(const SignalWeights&, const SignalWeights&) = default;
};

/// Extractor label -> natural-language phrase ("ORG" -> "organization company").
/// Keys are matched case-insensitively; unmapped labels embed as themselves.
class LabelMap {
 public:
  static LabelMap defaults();

  void set(std::string_view label, std::string phrase);
  std::string phrase(std::string_view label) const;
  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

/// Lines "LABEL = phrase words"; '#' starts a comment. Entries extend the defaults.
LabelMap load_label_map(const std::filesystem::path& path);

/// Sequential dot product; the single primitive behind every cosine distance.
inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// 1 - <a, b> clamped to [0, 2], without a dimension check.
inline double unit_distance(std::span<const double> a, std::span<const double> b) {
  const double d = 1.0 - dot(a, b);
  return d < 0.0 ? 0.0 : (d > 2.0 ? 2.0 : d);
}

/// 1 - <a, b>, clamped to [0, 2]. Throws invalid_input on a dimension mismatch.
double cosine_distance(std::span<const double> a, std::span<const double> b);
double cosine_distance(const UnitVector& a, const UnitVector& b);

/// Mean of the in-vocabulary token vectors, L2-normalized; absent if all OOV.
/// Tokens are lowercased; the sum runs in sorted token order so the result
/// does not depend on the order of `tokens`.
std::optional<UnitVector> embed_tokens(std::span<const std::string> tokens, const VectorStore& store);

/// normalize(w_label*E(label phrase) + w_mention*E(mention) + w_context*E(context)),
/// with w_position*position appended as an extra coordinate when w_position > 0.
/// Absent when no weighted text signal has an in-vocabulary token.
std::optional<CompositeEmbedding> embed_nugget(const Nugget& nugget, const VectorStore& store, const LabelMap& labels,
                                               const SignalWeights& weights);

/// E(name tokens), splitting on non-alphanumerics and camelCase; a zero
/// position coordinate is appended when w_position > 0.
std::optional<CompositeEmbedding> embed_attribute(std::string_view name, const VectorStore& store,
                                                  const SignalWeights& weights);

/// Dimension of every composite produced with these weights.
inline std::size_t composite_dimension(const VectorStore& store, const SignalWeights& weights) {
  return store.dimension() + (weights.position > 0.0 ? 1 : 0);
}

}  // namespace textable
