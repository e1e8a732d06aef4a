#include "pfm/feature_select.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "pfm/errors.hpp"
#include "pfm/rng.hpp"

namespace pfm::fs {
namespace {

// Features of `source` restricted to `columns`, row-major.
data::Matrix compact(const data::Matrix& source, std::span<const std::size_t> columns) {
    data::Matrix out(source.rows, columns.size());
    for (std::size_t r = 0; r < source.rows; ++r) {
        const auto row = source.row(r);
        for (std::size_t j = 0; j < columns.size(); ++j) out.at(r, j) = row[columns[j]];
    }
    return out;
}

std::vector<std::uint8_t> knn_compact(const data::Matrix& train, std::span<const std::uint8_t> labels,
                                      const data::Matrix& queries, std::size_t k,
                                      std::uint8_t vote_tie_label) {
    std::vector<std::uint8_t> predictions(queries.rows);
    std::vector<std::pair<double, std::size_t>> neighbours(train.rows);
    for (std::size_t q = 0; q < queries.rows; ++q) {
        const auto query = queries.row(q);
        for (std::size_t r = 0; r < train.rows; ++r) {
            const auto row = train.row(r);
            double sum = 0.0;
            for (std::size_t j = 0; j < row.size(); ++j) {
                const double diff = row[j] - query[j];
                sum += diff * diff;
            }
            neighbours[r] = {sum, r};
        }
        // Pair ordering breaks distance ties by row index.
        std::nth_element(neighbours.begin(), neighbours.begin() + static_cast<std::ptrdiff_t>(k - 1),
                         neighbours.end());
        std::size_t attack_votes = 0;
        for (std::size_t i = 0; i < k; ++i) {
            attack_votes += labels[neighbours[i].second];
        }
        const std::size_t normal_votes = k - attack_votes;
        if (attack_votes == normal_votes) {
            predictions[q] = vote_tie_label;
        } else {
            predictions[q] = attack_votes > normal_votes ? 1 : 0;
        }
    }
    return predictions;
}

void check_knn_inputs(const data::Dataset& train, std::size_t query_cols, std::size_t k,
                      const FeatureSubset& subset) {
    if (k == 0) throw ConfigError("k must be at least 1");
    if (train.rows() == 0) throw DataError("training set is empty");
    if (k > train.rows()) {
        throw ConfigError(fmt::format("k = {} exceeds the {} training rows", k, train.rows()));
    }
    if (subset.feature_count() != train.feature_count() || query_cols != train.feature_count()) {
        throw DimensionError("subset, training and query feature counts disagree");
    }
}

std::string mask_key(std::span<const std::uint8_t> mask) {
    std::string key(mask.size(), '0');
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask[i]) key[i] = '1';
    }
    return key;
}

}  // namespace

FeatureSubset FeatureSubset::from_mask(std::span<const double> position) {
    FeatureSubset s;
    s.mask_.resize(position.size());
    for (std::size_t d = 0; d < position.size(); ++d) {
        s.mask_[d] = position[d] != 0.0 ? 1 : 0;
        if (s.mask_[d]) s.indices_.push_back(d + 1);
    }
    if (s.indices_.empty()) throw ConfigError("a feature subset must select at least one feature");
    return s;
}

FeatureSubset FeatureSubset::from_indices(std::span<const std::size_t> one_based,
                                          std::size_t feature_count) {
    std::vector<double> position(feature_count, 0.0);
    for (auto index : one_based) {
        if (index == 0 || index > feature_count) {
            throw ConfigError(fmt::format("feature index {} is outside 1..{}", index, feature_count));
        }
        position[index - 1] = 1.0;
    }
    return from_mask(position);
}

FeatureSubset FeatureSubset::all(std::size_t feature_count) {
    return from_mask(std::vector<double>(feature_count, 1.0));
}

FeatureSubset FeatureSubset::parse(std::string_view text, std::size_t feature_count) {
    if (text == "all") return all(feature_count);
    std::vector<std::size_t> indices;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = std::min(text.find(',', start), text.size());
        auto token = text.substr(start, comma - start);
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        std::size_t value = 0;
        const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (token.empty() || ec != std::errc{} || end != token.data() + token.size()) {
            throw ConfigError("cannot parse feature list '" + std::string(text) + "'");
        }
        indices.push_back(value);
        start = comma + 1;
    }
    return from_indices(indices, feature_count);
}

std::vector<std::size_t> FeatureSubset::columns() const {
    std::vector<std::size_t> cols;
    cols.reserve(indices_.size());
    for (auto i : indices_) cols.push_back(i - 1);
    return cols;
}

std::string FeatureSubset::joined() const { return fmt::format("{}", fmt::join(indices_, ",")); }

void WrapperFitnessSpec::validate() const {
    if (k_neighbors == 0) throw ConfigError("k_neighbors must be at least 1");
    if (!(holdout_fraction > 0.0 && holdout_fraction <= 0.5)) {
        throw ConfigError("holdout fraction must lie in (0, 0.5]");
    }
    if (vote_tie_label > 1) throw ConfigError("vote tie label must be 0 or 1");
}

std::vector<std::uint8_t> knn_classify(const data::Dataset& train, const data::Matrix& queries,
                                       std::size_t k, const FeatureSubset& subset,
                                       std::uint8_t vote_tie_label) {
    check_knn_inputs(train, queries.cols, k, subset);
    const auto columns = subset.columns();
    return knn_compact(compact(train.features, columns), train.labels, compact(queries, columns), k,
                       vote_tie_label);
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> holdout_split(
    std::span<const std::uint8_t> labels, double fraction, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::uint8_t> held(labels.size(), 0);
    for (std::uint8_t label : {std::uint8_t{0}, std::uint8_t{1}}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == label) members.push_back(i);
        }
        shuffle(members, rng);
        const auto take = static_cast<std::size_t>(
            std::floor(fraction * static_cast<double>(members.size()) + 0.5));
        for (std::size_t i = 0; i < take; ++i) held[members[i]] = 1;
    }
    std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split;
    for (std::size_t i = 0; i < labels.size(); ++i) (held[i] ? split.second : split.first).push_back(i);
    if (split.first.empty() || split.second.empty()) {
        throw DataError(fmt::format("holdout fraction {} leaves an empty side on {} rows", fraction,
                                    labels.size()));
    }
    return split;
}

WrapperFitness::WrapperFitness(const data::Dataset& train, WrapperFitnessSpec spec) : spec_(spec) {
    spec_.validate();
    const auto [fit_rows, holdout_rows] = holdout_split(train.labels, spec_.holdout_fraction, spec_.seed);
    fit_ = train.select_rows(fit_rows);
    holdout_ = train.select_rows(holdout_rows);
    if (spec_.k_neighbors > fit_.rows()) {
        throw ConfigError(fmt::format("k = {} exceeds the {} fitting rows", spec_.k_neighbors,
                                      fit_.rows()));
    }
}

double WrapperFitness::operator()(const FeatureSubset& subset) const {
    const std::string key = mask_key(subset.mask());
    if (const auto hit = cache_.find(key); hit != cache_.end()) return hit->second;
    const auto predictions =
        knn_classify(fit_, holdout_.features, spec_.k_neighbors, subset, spec_.vote_tie_label);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        correct += predictions[i] == holdout_.labels[i] ? 1 : 0;
    }
    const double accuracy = static_cast<double>(correct) / static_cast<double>(predictions.size());
    cache_.emplace(key, accuracy);
    return accuracy;
}

double WrapperFitness::operator()(std::span<const double> position) const {
    return (*this)(FeatureSubset::from_mask(position));
}

double subset_fitness(const FeatureSubset& subset, const data::Dataset& train,
                      const WrapperFitnessSpec& spec) {
    return WrapperFitness(train, spec)(subset);
}

SelectionResult select_features(const data::Dataset& train, const PfmParams& params,
                                const WrapperFitnessSpec& spec, std::size_t top_n,
                                const RunObservers& observers) {
    if (train.feature_count() < 2) throw DataError("feature selection needs at least two features");
    if (train.count_label(0) == 0 || train.count_label(1) == 0) {
        throw DataError("feature selection needs both normal and attack records");
    }
    const WrapperFitness fitness(train, spec);
    Problem problem = Problem::binary(
        train.feature_count(),
        [&fitness](std::span<const double> position, Rng&) { return fitness(position); },
        Sense::maximize);
    problem.repair = [](Position& position, Rng& rng) {
        if (std::any_of(position.begin(), position.end(), [](double v) { return v != 0.0; })) return;
        position[rng.below(position.size())] = 1.0;
    };

    std::vector<Peafowl> final_population;
    RunObservers watching = observers;
    watching.on_season_end = [&](const std::vector<Peafowl>& population) {
        final_population = population;
        if (observers.on_season_end) observers.on_season_end(population);
    };

    SelectionResult result;
    result.trace = optimize(problem, params, watching);

    std::vector<ScoredSubset> ranked;
    for (const auto& bird : final_population) {
        auto subset = FeatureSubset::from_mask(bird.position);
        const bool seen = std::any_of(ranked.begin(), ranked.end(),
                                      [&](const ScoredSubset& s) { return s.subset == subset; });
        if (!seen) ranked.push_back({std::move(subset), bird.fitness});
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const ScoredSubset& a, const ScoredSubset& b) {
        if (a.fitness != b.fitness) return a.fitness > b.fitness;
        return a.subset.cardinality() < b.subset.cardinality();
    });
    result.best = ranked.front();
    if (ranked.size() > top_n) ranked.resize(std::max<std::size_t>(top_n, 1));
    result.top = std::move(ranked);
    return result;
}

ConfusionCounts evaluate_subset(const FeatureSubset& subset, const data::Dataset& train,
                                const data::Dataset& test, std::size_t k,
                                std::uint8_t vote_tie_label) {
    if (train.provenance != test.provenance) {
        throw DataError("train and test sets were prepared with different preprocessing manifests");
    }
    if (train.feature_count() != test.feature_count()) {
        throw DimensionError("train and test feature counts differ");
    }
    const auto predictions = knn_classify(train, test.features, k, subset, vote_tie_label);
    ConfusionCounts counts;
    for (std::size_t i = 0; i < predictions.size(); ++i) counts.add(test.labels[i], predictions[i]);
    return counts;
}

CrossValidation cross_validate(const std::optional<FeatureSubset>& subset, const data::Dataset& data,
                               const data::FoldPlan& folds, std::size_t k,
                               std::uint8_t vote_tie_label) {
    if (folds.assignments.size() != data.rows()) {
        throw DimensionError(fmt::format("fold plan covers {} rows, dataset has {}",
                                         folds.assignments.size(), data.rows()));
    }
    const FeatureSubset chosen = subset ? *subset : FeatureSubset::all(data.feature_count());
    CrossValidation cv;
    for (std::size_t f = 0; f < folds.k; ++f) {
        const auto train = data.select_rows(folds.train_rows(f));
        const auto test = data.select_rows(folds.test_rows(f));
        if (train.count_label(0) == 0 || train.count_label(1) == 0) {
            cv.warnings.push_back(fmt::format("fold {}: training part holds a single class", f + 1));
        }
        cv.per_fold.push_back(evaluate_subset(chosen, train, test, k, vote_tie_label));
        cv.pooled += cv.per_fold.back();
    }
    cv.pooled_metrics = compute_metrics(cv.pooled);
    return cv;
}

std::string subset_report_csv(std::span<const ScoredSubset> subsets) {
    std::string out = "subset_id,cardinality,features,fitness\n";
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        out += fmt::format("FSs{},{},\"{}\",{}\n", i + 1, subsets[i].subset.cardinality(),
                           subsets[i].subset.joined(), subsets[i].fitness);
    }
    return out;
}

nlohmann::ordered_json subset_report_json(std::span<const ScoredSubset> subsets) {
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        rows.push_back({{"subset_id", fmt::format("FSs{}", i + 1)},
                        {"cardinality", subsets[i].subset.cardinality()},
                        {"features", subsets[i].subset.indices()},
                        {"fitness", subsets[i].fitness}});
    }
    return rows;
}

}  // namespace pfm::fs
