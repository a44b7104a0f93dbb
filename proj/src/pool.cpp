#include "textable/pool.hpp"

#include <algorithm>
#include <numeric>

#include "textable/error.hpp"

namespace textable {

EmbeddedPool EmbeddedPool::build(std::vector<Nugget> nuggets, const VectorStore& store, const LabelMap& labels,
                                 const SignalWeights& weights) {
  weights.validate();
  std::vector<std::optional<CompositeEmbedding>> embedded(nuggets.size());
  const auto n = static_cast<std::ptrdiff_t>(nuggets.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    embedded[k] = embed_nugget(nuggets[k], store, labels, weights);
  }
  std::vector<Nugget> kept;
  std::vector<CompositeEmbedding> vectors;
  for (std::size_t i = 0; i < nuggets.size(); ++i) {
    if (!embedded[i]) continue;
    kept.push_back(std::move(nuggets[i]));
    vectors.push_back(std::move(*embedded[i]));
  }
  auto pool = from_embeddings(std::move(kept), std::move(vectors));
  pool.diagnostics_.total_nuggets = nuggets.size();
  pool.diagnostics_.excluded_oov = nuggets.size() - pool.size();
  return pool;
}

EmbeddedPool EmbeddedPool::from_embeddings(std::vector<Nugget> nuggets, std::vector<CompositeEmbedding> embeddings) {
  if (nuggets.size() != embeddings.size()) invalid("nugget/embedding count mismatch");
  std::vector<std::size_t> order(nuggets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return nuggets[a].id < nuggets[b].id; });

  EmbeddedPool pool;
  pool.vectors_ = kernels::EmbeddingMatrix(embeddings.empty() ? 0 : embeddings.front().dimension());
  for (auto i : order) {
    pool.vectors_.append(embeddings[i].values());
    pool.nuggets_.push_back(std::move(nuggets[i]));
  }
  pool.diagnostics_.total_nuggets = pool.nuggets_.size();
  pool.index();
  return pool;
}

void EmbeddedPool::index() {
  for (std::size_t i = 0; i < nuggets_.size(); ++i) {
    if (!by_id_.emplace(nuggets_[i].id, i).second) invalid("duplicate nugget " + nuggets_[i].id);
    by_document_[nuggets_[i].document_id].push_back(i);
  }
}

std::optional<std::size_t> EmbeddedPool::find(std::string_view nugget_id) const {
  auto it = by_id_.find(std::string(nugget_id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::span<const std::size_t> EmbeddedPool::rows_of(std::string_view document_id) const {
  auto it = by_document_.find(std::string(document_id));
  if (it == by_document_.end()) return {};
  return it->second;
}

std::vector<double> EmbeddedPool::distances_to(const CompositeEmbedding& query) const {
  if (query.dimension() != dimension() && size() > 0) {
    invalid("dimension mismatch: " + std::to_string(query.dimension()) + " vs " + std::to_string(dimension()));
  }
  std::vector<double> out(size());
  kernels::distances_to_parallel(vectors_, query.values(), out);
  return out;
}

}  // namespace textable
