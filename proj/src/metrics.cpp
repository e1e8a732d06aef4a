#include "pfm/metrics.hpp"

#include <fmt/format.h>

#include "pfm/errors.hpp"

namespace pfm {
namespace {

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

void ConfusionCounts::add(int actual, int predicted) {
    if (actual == 1) {
        ++(predicted == 1 ? tp : fn);
    } else {
        ++(predicted == 1 ? fp : tn);
    }
}

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& other) {
    tp += other.tp;
    tn += other.tn;
    fp += other.fp;
    fn += other.fn;
    return *this;
}

MetricsReport compute_metrics(const ConfusionCounts& c) {
    if (c.total() == 0) throw ConfigError("metrics need at least one classified record");
    MetricsReport m;
    m.accuracy = ratio(c.tp + c.tn, c.total());
    m.detection_rate = ratio(c.tp, c.tp + c.fn);
    m.fpr = ratio(c.fp, c.tn + c.fp);
    m.tnr = ratio(c.tn, c.tn + c.fp);
    m.fnr = ratio(c.fn, c.fn + c.tp);
    m.precision = ratio(c.tp, c.tp + c.fp);
    m.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
    return m;
}

std::string format_percent(const std::optional<double>& rate) {
    return rate ? fmt::format("{:.3f}", *rate * 100.0) : "NA";
}

std::string format_fraction(const std::optional<double>& rate) {
    return rate ? fmt::format("{}", *rate) : "NA";
}

std::array<std::optional<double>, 7> metric_values(const MetricsReport& r) {
    return {r.accuracy, r.detection_rate, r.fpr, r.tnr, r.fnr, r.precision, r.f1};
}

nlohmann::ordered_json metrics_json(const ConfusionCounts& counts, const MetricsReport& report) {
    nlohmann::ordered_json j;
    j["tp"] = counts.tp;
    j["tn"] = counts.tn;
    j["fp"] = counts.fp;
    j["fn"] = counts.fn;
    const auto values = metric_values(report);
    for (std::size_t i = 0; i < values.size(); ++i) {
        j[kMetricNames[i]] = values[i] ? nlohmann::ordered_json(*values[i]) : nullptr;
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        j[std::string(kMetricNames[i]) + "_pct"] = format_percent(values[i]);
    }
    return j;
}

}  // namespace pfm
