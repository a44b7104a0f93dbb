#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "textable/embedding.hpp"
#include "textable/extraction.hpp"
#include "textable/kernels.hpp"

namespace textable {

/// Indexed points with a distance. The matching logic only sees this
/// interface, so it runs unchanged over cosine space or a test metric.
class MetricSpace {
 public:
  virtual ~MetricSpace() = default;
  virtual std::size_t size() const = 0;
  virtual const std::string& id(std::size_t i) const = 0;
  virtual double distance(std::size_t a, std::size_t b) const = 0;
};

struct PoolDiagnostics {
  std::size_t total_nuggets = 0;
  std::size_t excluded_oov = 0;  // nuggets with no in-vocabulary signal
};

/// Embedded nuggets ordered by ascending id, so index order is id order.
class EmbeddedPool final : public MetricSpace {
 public:
  /// Embeds every nugget; all-OOV nuggets are dropped and counted.
  /// Throws invalid_input on duplicate nugget ids.
  static EmbeddedPool build(std::vector<Nugget> nuggets, const VectorStore& store, const LabelMap& labels,
                            const SignalWeights& weights);
  static EmbeddedPool from_embeddings(std::vector<Nugget> nuggets, std::vector<CompositeEmbedding> embeddings);

  std::size_t size() const override { return nuggets_.size(); }
  const std::string& id(std::size_t i) const override { return nuggets_[i].id; }
  double distance(std::size_t a, std::size_t b) const override {
    return unit_distance(vectors_.row(a), vectors_.row(b));
  }

  const Nugget& nugget(std::size_t i) const { return nuggets_[i]; }
  std::span<const double> embedding(std::size_t i) const { return vectors_.row(i); }
  const kernels::EmbeddingMatrix& vectors() const { return vectors_; }
  std::size_t dimension() const { return vectors_.cols(); }
  const PoolDiagnostics& diagnostics() const { return diagnostics_; }

  std::optional<std::size_t> find(std::string_view nugget_id) const;
  /// Ascending pool indices of one document's nuggets (empty if none).
  std::span<const std::size_t> rows_of(std::string_view document_id) const;

  /// Cosine distance of every member to `query` (parallel kernel).
  std::vector<double> distances_to(const CompositeEmbedding& query) const;

 private:
  void index();

  std::vector<Nugget> nuggets_;
  kernels::EmbeddingMatrix vectors_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_document_;
  PoolDiagnostics diagnostics_;
};

}  // namespace textable
