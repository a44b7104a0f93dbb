#include <doctest.h>

#include <cmath>
#include <limits>

#include <omp.h>

#include "support.hpp"
#include "textable/embedding.hpp"
#include "textable/kernels.hpp"

using namespace textable;
using namespace textable::kernels;
using testing::Gen;

namespace {

EmbeddingMatrix random_matrix(Gen& g, std::size_t rows, std::size_t cols) {
  EmbeddingMatrix m(cols);
  for (std::size_t r = 0; r < rows; ++r) m.append(g.unit_vector(cols));
  return m;
}

}  // namespace

TEST_CASE("distances_to: parallel equals serial bit for bit") {
  omp_set_num_threads(4);
  Gen g(1);
  for (std::size_t n : {0u, 1u, 7u, 1500u, 5000u}) {
    const auto m = random_matrix(g, n, 24);
    const auto q = g.unit_vector(24);
    std::vector<double> a(n), b(n);
    distances_to_serial(m, q, a);
    distances_to_parallel(m, q, b);
    CHECK(a == b);
    for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == unit_distance(m.row(i), q));
  }
}

TEST_CASE("nearest_in_set: parallel equals serial and brute force") {
  omp_set_num_threads(4);
  Gen g(2);
  const auto m = random_matrix(g, 3000, 12);
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < m.rows(); i += 2) rows.push_back(i);
  std::vector<std::size_t> set{1, 17, 999, 2501};
  std::vector<double> a(rows.size()), b(rows.size());
  nearest_in_set_serial(m, rows, set, a);
  nearest_in_set_parallel(m, rows, set, b);
  CHECK(a == b);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (auto s : set) best = std::min(best, unit_distance(m.row(rows[i]), m.row(s)));
    CHECK(a[i] == best);
  }
  std::vector<double> empty(rows.size());
  nearest_in_set_parallel(m, rows, {}, empty);
  for (double d : empty) CHECK(std::isinf(d));
}

TEST_CASE("successor_mask: parallel equals serial") {
  omp_set_num_threads(4);
  Gen g(3);
  const auto m = random_matrix(g, 2000, 6);
  auto dist = [&](std::size_t a, std::size_t b) { return unit_distance(m.row(a), m.row(b)); };
  for (int iter = 0; iter < 20; ++iter) {
    std::vector<std::uint8_t> eligible(m.rows());
    for (auto& e : eligible) e = g.coin(0.8);
    std::vector<std::size_t> tree, expanded;
    const auto size = 1 + g.below(8);
    for (std::size_t i = 0; i < size; ++i) tree.push_back(g.below(m.rows()));
    for (std::size_t i = 0; i + 1 < size; ++i) {
      if (g.coin()) expanded.push_back(tree[i]);
    }
    SuccessorQuery q{tree.back(), g.coin() ? std::optional<double>(g.uniform(0, 0.5)) : std::nullopt, expanded,
                     {tree.data(), tree.size() - 1}};
    std::vector<std::uint8_t> a(m.rows()), b(m.rows());
    successor_mask_serial(eligible, q, dist, a);
    successor_mask_parallel(eligible, q, dist, b);
    CHECK(a == b);
    for (std::size_t c = 0; c < m.rows(); ++c) {
      bool ok = eligible[c];
      for (auto e : expanded) ok = ok && dist(c, q.x) < dist(c, e);
      if (q.parent_distance) {
        for (auto t : q.tree_others) ok = ok && dist(c, t) > *q.parent_distance;
      }
      CHECK(static_cast<bool>(a[c]) == ok);
    }
  }
}
