#pragma once

// Data-parallel loops over the nugget pool. Every kernel has a serial
// reference twin with identical per-element arithmetic, so the two agree
// bit-for-bit; tests cross-check them and bench/ compares their speed.
// Reductions (argmin) stay serial to keep tie-breaking deterministic.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "textable/embedding.hpp"

namespace textable::kernels {

/// Row-major matrix of unit vectors, one row per pool member.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  explicit EmbeddingMatrix(std::size_t cols) : cols_(cols) {}

  void append(std::span<const double> row);
  std::size_t rows() const { return cols_ == 0 ? 0 : data_.size() / cols_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

 private:
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// out[i] = distance(row i, query) for every row.
void distances_to_serial(const EmbeddingMatrix& m, std::span<const double> query, std::span<double> out);
void distances_to_parallel(const EmbeddingMatrix& m, std::span<const double> query, std::span<double> out);

/// out[i] = min over s in `set` of distance(row rows[i], row s); +inf when `set` is empty.
void nearest_in_set_serial(const EmbeddingMatrix& m, std::span<const std::size_t> rows,
                           std::span<const std::size_t> set, std::span<double> out);
void nearest_in_set_parallel(const EmbeddingMatrix& m, std::span<const std::size_t> rows,
                             std::span<const std::size_t> set, std::span<double> out);

/// Explore-away filter for expanding node `x`.
///  (1) dist(c, x) < dist(c, e) for every e in `expanded_others`
///  (2) dist(c, t) > parent_distance for every t in `tree_others`; skipped at a root
struct SuccessorQuery {
  std::size_t x = 0;
  std::optional<double> parent_distance;
  std::span<const std::size_t> expanded_others;
  std::span<const std::size_t> tree_others;
};

template <class Dist>
bool is_successor(std::size_t c, const SuccessorQuery& q, Dist&& dist) {
  const double to_x = dist(c, q.x);
  for (auto e : q.expanded_others) {
    if (!(to_x < dist(c, e))) return false;
  }
  if (q.parent_distance) {
    for (auto t : q.tree_others) {
      if (!(dist(c, t) > *q.parent_distance)) return false;
    }
  }
  return true;
}

/// out[c] = eligible[c] && is_successor(c, q, dist).
template <class Dist>
void successor_mask_serial(std::span<const std::uint8_t> eligible, const SuccessorQuery& q, Dist&& dist,
                           std::span<std::uint8_t> out) {
  for (std::size_t c = 0; c < eligible.size(); ++c) out[c] = eligible[c] && is_successor(c, q, dist) ? 1 : 0;
}

template <class Dist>
void successor_mask_parallel(std::span<const std::uint8_t> eligible, const SuccessorQuery& q, Dist&& dist,
                             std::span<std::uint8_t> out) {
  const auto n = static_cast<std::ptrdiff_t>(eligible.size());
#pragma omp parallel for schedule(static) if (n > 512)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(i);
    out[c] = eligible[c] && is_successor(c, q, dist) ? 1 : 0;
  }
}

}  // namespace textable::kernels
