#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pfm/optimizer.hpp"
#include "pfm/rng.hpp"

namespace pfm::bench {

/// The 23 classical test functions: F1-F7 unimodal, F8-F13 multimodal,
/// F14-F23 fixed-dimension multimodal.
enum class FunctionId {
    F1 = 1, F2, F3, F4, F5, F6, F7, F8, F9, F10, F11, F12,
    F13, F14, F15, F16, F17, F18, F19, F20, F21, F22, F23,
};

struct FunctionInfo {
    FunctionId id;
    std::size_t dimension;
    double lower;   ///< same bound in every dimension
    double upper;
    double f_min;   ///< reference optimum
};

const FunctionInfo& info(FunctionId id);
std::string name(FunctionId id);
std::vector<FunctionId> all_functions();

/// Parses "F1".."F23" (case-insensitive prefix). Returns nullopt otherwise.
std::optional<FunctionId> parse_function_id(std::string_view text);

/// Evaluates a benchmark at x. Only F7 draws from rng (one uniform in [0, 1)).
/// Throws DimensionError on a wrong length and EvaluationError when x lies
/// outside the function's box.
double evaluate_benchmark(FunctionId id, std::span<const double> x, Rng& rng);

/// Box-constrained minimisation problem for the given function.
Problem make_problem(FunctionId id);

struct CampaignResult {
    FunctionId id{};
    std::size_t dimension = 0;
    std::size_t runs = 0;
    double avg = 0.0;
    double std = 0.0;   ///< population standard deviation (divisor = runs)
    double best = 0.0;
    double worst = 0.0;
    double wall_ms = 0.0;
    std::vector<double> per_run_best;
    std::vector<std::vector<double>> convergence;  ///< best_per_iteration per run
    PfmParams params;
};

/// Runs every function `runs` times with seeds params.seed + run index.
std::vector<CampaignResult> run_campaign(std::span<const FunctionId> ids, const PfmParams& params,
                                         std::size_t runs);

/// Mean and population standard deviation.
std::pair<double, double> mean_and_std(std::span<const double> values);

/// One row per function: id,dim,runs,avg,std,best,worst. Timing is left out
/// so that reruns with the same seed produce identical bytes.
std::string campaign_csv(std::span<const CampaignResult> results);
nlohmann::ordered_json campaign_json(std::span<const CampaignResult> results);
/// id,wall_ms rows.
std::string campaign_timing_csv(std::span<const CampaignResult> results);
/// function,run,iteration,best rows (iteration is 1-based).
std::string campaign_convergence_csv(std::span<const CampaignResult> results);

}  // namespace pfm::bench
