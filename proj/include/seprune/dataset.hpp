#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "seprune/errors.hpp"

namespace seprune {

using ExampleId = std::uint64_t;

// n x d matrix of finite f32 embedding coordinates with stable example ids.
// Row order is the canonical example order; ids are pairwise distinct.
struct EmbeddingDataset {
    std::vector<ExampleId> ids;
    std::vector<float> features;  // row-major, n*d
    std::size_t n = 0;
    std::size_t d = 0;

    std::span<const float> row(std::size_t i) const {
        return {features.data() + i * d, d};
    }

    // Validates invariants (sizes, distinct ids, finite values); throws
    // ValidationError naming the offending row otherwise.
    static EmbeddingDataset create(std::vector<ExampleId> ids,
                                   std::vector<float> features, std::size_t d);

    // Rows for the given ids, in the given order. Unknown ids throw.
    EmbeddingDataset subset(std::span<const ExampleId> keep) const;

    // id -> row index
    std::unordered_map<ExampleId, std::size_t> index() const;
};

enum class Provenance { oracle, kmeans, external };

const char* to_string(Provenance p);

// Per-example class labels in [0, K). Length matches the dataset it annotates.
struct LabelAssignment {
    std::vector<std::uint32_t> labels;
    std::uint32_t num_classes = 0;
    Provenance provenance = Provenance::external;

    static LabelAssignment create(std::vector<std::uint32_t> labels,
                                  std::uint32_t num_classes, Provenance provenance);

    LabelAssignment subset(std::span<const std::size_t> row_indices) const;
};

// Disjoint labeled / unlabeled / test pools, by example id.
struct SplitSpec {
    std::vector<ExampleId> labeled_ids;
    std::vector<ExampleId> unlabeled_ids;
    std::vector<ExampleId> test_ids;
    std::size_t per_class_labeled = 0;
};

enum class EmbeddingFormat { binary, csv };

// Canonical binary layout: magic "SEPB", u32 LE version = 1, u64 LE n, u64 LE d,
// n ids as u64 LE, n*d features as f32 LE row-major.
EmbeddingDataset load_embeddings(const std::filesystem::path& path, EmbeddingFormat format);
void write_embeddings(const std::filesystem::path& path, const EmbeddingDataset& data,
                      EmbeddingFormat format);

// Guesses the format from the extension: ".csv" is csv, everything else binary.
EmbeddingFormat format_for_path(const std::filesystem::path& path);

// Two-column "id,label" CSV covering exactly the dataset's ids (any order);
// K is inferred as 1 + max label. Provenance is external unless as_oracle.
LabelAssignment load_labels(const std::filesystem::path& path,
                            std::span<const ExampleId> expected_ids,
                            bool as_oracle = false);
void write_labels(const std::filesystem::path& path, std::span<const ExampleId> ids,
                  const LabelAssignment& labels);

// Class-balanced labeled pool of K*per_class_labeled examples, a disjoint
// stratified test split of roughly test_fraction, remainder unlabeled.
// Deterministic given seed.
SplitSpec make_split(const EmbeddingDataset& data, const LabelAssignment& labels,
                     std::size_t per_class_labeled, double test_fraction,
                     std::uint64_t seed);

}  // namespace seprune
