#include "textable/kernels.hpp"

#include <algorithm>

#include "textable/error.hpp"

namespace textable::kernels {

void EmbeddingMatrix::append(std::span<const double> row) {
  if (cols_ == 0) cols_ = row.size();
  if (row.size() != cols_) invalid("embedding dimension mismatch");
  data_.insert(data_.end(), row.begin(), row.end());
}

void distances_to_serial(const EmbeddingMatrix& m, std::span<const double> query, std::span<double> out) {
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = unit_distance(m.row(i), query);
}

void distances_to_parallel(const EmbeddingMatrix& m, std::span<const double> query, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(m.rows());
#pragma omp parallel for schedule(static) if (n > 1024)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = unit_distance(m.row(static_cast<std::size_t>(i)), query);
  }
}

namespace {

double nearest_one(const EmbeddingMatrix& m, std::size_t r, std::span<const std::size_t> set) {
  double best = std::numeric_limits<double>::infinity();
  for (auto s : set) best = std::min(best, unit_distance(m.row(r), m.row(s)));
  return best;
}

}  // namespace

void nearest_in_set_serial(const EmbeddingMatrix& m, std::span<const std::size_t> rows,
                           std::span<const std::size_t> set, std::span<double> out) {
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = nearest_one(m, rows[i], set);
}

void nearest_in_set_parallel(const EmbeddingMatrix& m, std::span<const std::size_t> rows,
                             std::span<const std::size_t> set, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(rows.size());
  const bool wide = static_cast<std::size_t>(n) * std::max<std::size_t>(1, set.size()) > 4096;
#pragma omp parallel for schedule(static) if (wide)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = nearest_one(m, rows[k], set);
  }
}

}  // namespace textable::kernels
