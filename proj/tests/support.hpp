#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "textable/pool.hpp"

namespace testing {

/// splitmix64; every randomized test names its seed.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  bool coin(double p = 0.5) { return uniform() < p; }
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
  std::vector<double> unit_vector(std::size_t dim) {
    for (;;) {
      std::vector<double> v(dim);
      double n = 0.0;
      for (auto& x : v) {
        x = normal();
        n += x * x;
      }
      if (n < 1e-12) continue;
      for (auto& x : v) x /= std::sqrt(n);
      return v;
    }
  }

 private:
  std::uint64_t state_;
};

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("textable-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

  std::filesystem::path write(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Points in the plane (or any R^d) under Euclidean distance.
class EuclideanSpace final : public textable::MetricSpace {
 public:
  void add(std::string id, std::vector<double> p) {
    ids_.push_back(std::move(id));
    points_.push_back(std::move(p));
  }
  std::size_t size() const override { return ids_.size(); }
  const std::string& id(std::size_t i) const override { return ids_[i]; }
  double distance(std::size_t a, std::size_t b) const override {
    double s = 0.0;
    for (std::size_t i = 0; i < points_[a].size(); ++i) {
      const double d = points_[a][i] - points_[b][i];
      s += d * d;
    }
    return std::sqrt(s);
  }
  std::size_t index(const std::string& id) const {
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (ids_[i] == id) return i;
    }
    return ids_.size();
  }

 private:
  std::vector<std::string> ids_;
  std::vector<std::vector<double>> points_;
};

}  // namespace testing
