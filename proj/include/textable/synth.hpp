#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "textable/corpus.hpp"
#include "textable/embedding.hpp"
#include "textable/evaluation.hpp"
#include "textable/extraction.hpp"

namespace textable {

/// Planted-cluster benchmark: every document states one value per attribute
/// plus distractor values. Attribute values, their context words and the
/// attribute names sit around one axis per attribute (split into sub-clusters),
/// distractors around separate axes.
struct SynthConfig {
  std::uint64_t seed = 42;
  std::size_t documents = 200;
  std::size_t attributes = 4;  // at most 4
  std::size_t distractors_per_document = 4;
  std::size_t values_per_attribute = 40;
  std::size_t subclusters = 3;
  std::size_t dimension = 32;
};

struct SynthFixture {
  std::vector<std::string> attributes;
  DocumentCollection documents;
  std::vector<Nugget> nuggets;
  std::vector<std::pair<std::string, std::vector<double>>> vectors;
  std::vector<std::pair<std::string, std::string>> labels;
  GroundTruth truth;
  /// Ids of each attribute's true nuggets.
  std::vector<std::vector<std::string>> true_nuggets;
};

SynthFixture generate_fixture(const SynthConfig& config);

VectorStore fixture_store(const SynthFixture& fixture);
LabelMap fixture_labels(const SynthFixture& fixture);

/// Smallest cosine distance between a true nugget of attribute `a` and any
/// other nugget, on composite embeddings with `weights`.
double planted_margin(const SynthFixture& fixture, std::size_t attribute, const SignalWeights& weights = {});

struct FixturePaths {
  std::filesystem::path documents;
  std::filesystem::path nuggets;
  std::filesystem::path vectors;
  std::filesystem::path label_map;
  std::filesystem::path truth;
};

/// Writes docs.jsonl, nuggets.jsonl, vectors.txt, labels.map, truth.jsonl into `dir`.
FixturePaths write_fixture(const SynthFixture& fixture, const std::filesystem::path& dir);

}  // namespace textable
