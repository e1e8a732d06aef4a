#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace pfm {

/// Binary confusion counts with attack as the positive class.
struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + tn + fp + fn; }

    /// Tallies one prediction (1 = attack).
    void add(int actual, int predicted);

    ConfusionCounts& operator+=(const ConfusionCounts& other);
    bool operator==(const ConfusionCounts&) const = default;
};

/// Rates derived from a confusion matrix. A rate is empty when its
/// denominator is zero.
struct MetricsReport {
    std::optional<double> accuracy;
    std::optional<double> detection_rate;
    std::optional<double> fpr;
    std::optional<double> tnr;
    std::optional<double> fnr;
    std::optional<double> precision;
    std::optional<double> f1;
};

/// Throws ConfigError when the counts are all zero.
MetricsReport compute_metrics(const ConfusionCounts& counts);

/// Percentage with three decimals ("84.816"), or "NA".
std::string format_percent(const std::optional<double>& rate);
/// Shortest round-trip decimal, or "NA".
std::string format_fraction(const std::optional<double>& rate);

/// Metric names in report order.
inline constexpr const char* kMetricNames[] = {"accuracy", "detection_rate", "fpr", "tnr",
                                               "fnr",      "precision",      "f1"};

/// Rates in the same order as kMetricNames.
std::array<std::optional<double>, 7> metric_values(const MetricsReport& report);

/// {"tp":..,"tn":..,"fp":..,"fn":.., "<metric>": fraction|null, "<metric>_pct": "..."}.
nlohmann::ordered_json metrics_json(const ConfusionCounts& counts, const MetricsReport& report);

}  // namespace pfm
