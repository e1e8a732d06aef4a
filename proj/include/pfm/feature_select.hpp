#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pfm/dataset.hpp"
#include "pfm/metrics.hpp"
#include "pfm/optimizer.hpp"

namespace pfm::fs {

/// A non-empty set of selected features. Indices are 1-based, ascending.
class FeatureSubset {
public:
    /// Bit d is selected when position[d] is non-zero.
    static FeatureSubset from_mask(std::span<const double> position);
    static FeatureSubset from_indices(std::span<const std::size_t> one_based, std::size_t feature_count);
    static FeatureSubset all(std::size_t feature_count);
    /// "all" or a comma-separated list of 1-based indices.
    static FeatureSubset parse(std::string_view text, std::size_t feature_count);

    const std::vector<std::uint8_t>& mask() const { return mask_; }
    const std::vector<std::size_t>& indices() const { return indices_; }
    std::size_t cardinality() const { return indices_.size(); }
    std::size_t feature_count() const { return mask_.size(); }
    /// 0-based column numbers.
    std::vector<std::size_t> columns() const;
    /// "1,3,4".
    std::string joined() const;

    bool operator==(const FeatureSubset&) const = default;

private:
    std::vector<std::uint8_t> mask_;
    std::vector<std::size_t> indices_;
};

/// Settings of the classifier-based subset score.
struct WrapperFitnessSpec {
    std::size_t k_neighbors = 5;
    double holdout_fraction = 0.2;  ///< stratified by label
    std::uint64_t seed = 0;         ///< drives the holdout split
    std::uint8_t vote_tie_label = 1;

    void validate() const;
};

/// KNN predictions for each query row using Euclidean distance over the
/// subset's columns. Distance ties go to the lower training row index; vote
/// ties go to vote_tie_label. Throws ConfigError when k is 0 or exceeds the
/// number of training rows.
std::vector<std::uint8_t> knn_classify(const data::Dataset& train, const data::Matrix& queries,
                                       std::size_t k, const FeatureSubset& subset,
                                       std::uint8_t vote_tie_label = 1);

/// Stratified split of row indices into (fitting rows, held-out rows), each
/// ascending. Throws DataError if either side would be empty.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> holdout_split(
    std::span<const std::uint8_t> labels, double fraction, std::uint64_t seed);

/// Holdout accuracy of a subset on a fixed split of the training data.
/// Scores are memoised per mask, so an instance must not be shared between
/// threads.
class WrapperFitness {
public:
    WrapperFitness(const data::Dataset& train, WrapperFitnessSpec spec);

    double operator()(const FeatureSubset& subset) const;
    /// Scores a binary position; an all-zero position raises ConfigError.
    double operator()(std::span<const double> position) const;

    std::size_t distinct_subsets_scored() const { return cache_.size(); }

private:
    data::Dataset fit_;
    data::Dataset holdout_;
    WrapperFitnessSpec spec_;
    mutable std::unordered_map<std::string, double> cache_;
};

double subset_fitness(const FeatureSubset& subset, const data::Dataset& train,
                      const WrapperFitnessSpec& spec);

struct ScoredSubset {
    FeatureSubset subset;
    double fitness = 0.0;
};

struct SelectionResult {
    ScoredSubset best;
    /// Distinct subsets of the final population, best first; among equal
    /// fitness, fewer features first.
    std::vector<ScoredSubset> top;
    RunTrace trace;
};

/// Wrapper feature selection over a binary search space. Positions that
/// come out of the transfer step empty get one uniformly chosen bit set.
SelectionResult select_features(const data::Dataset& train, const PfmParams& params,
                                const WrapperFitnessSpec& spec, std::size_t top_n = 3,
                                const RunObservers& observers = {});

/// Classifies every test row and tallies the confusion matrix.
/// Throws DataError when the two sets come from different preprocessing.
ConfusionCounts evaluate_subset(const FeatureSubset& subset, const data::Dataset& train,
                                const data::Dataset& test, std::size_t k,
                                std::uint8_t vote_tie_label = 1);

struct CrossValidation {
    std::vector<ConfusionCounts> per_fold;
    ConfusionCounts pooled;
    MetricsReport pooled_metrics;
    std::vector<std::string> warnings;
};

/// Trains on all folds but one and tests on the remaining fold, for every
/// fold. Without a subset every feature is used.
CrossValidation cross_validate(const std::optional<FeatureSubset>& subset, const data::Dataset& data,
                               const data::FoldPlan& folds, std::size_t k,
                               std::uint8_t vote_tie_label = 1);

/// subset_id,cardinality,features,fitness with ids FSs1, FSs2, ...
std::string subset_report_csv(std::span<const ScoredSubset> subsets);
nlohmann::ordered_json subset_report_json(std::span<const ScoredSubset> subsets);

}  // namespace pfm::fs
