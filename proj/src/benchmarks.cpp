#include "pfm/benchmarks.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "pfm/errors.hpp"

namespace pfm::bench {
namespace {

using std::numbers::pi;

constexpr std::array<FunctionInfo, 23> kFunctions{{
    {FunctionId::F1, 30, -100.0, 100.0, 0.0},
    {FunctionId::F2, 30, -10.0, 10.0, 0.0},
    {FunctionId::F3, 30, -100.0, 100.0, 0.0},
    {FunctionId::F4, 30, -100.0, 100.0, 0.0},
    {FunctionId::F5, 30, -5.0, 10.0, 0.0},
    {FunctionId::F6, 30, -100.0, 100.0, 0.0},
    {FunctionId::F7, 30, -1.28, 1.28, 0.0},
    {FunctionId::F8, 30, -500.0, 500.0, -418.9892 * 30},
    {FunctionId::F9, 30, -5.12, 5.12, 0.0},
    {FunctionId::F10, 30, -32.0, 32.0, 0.0},
    {FunctionId::F11, 30, -600.0, 600.0, 0.0},
    {FunctionId::F12, 30, -50.0, 50.0, 0.0},
    {FunctionId::F13, 30, -50.0, 50.0, 0.0},
    {FunctionId::F14, 2, -65.0, 65.0, 1.0},
    {FunctionId::F15, 4, -5.0, 5.0, 0.00030},
    {FunctionId::F16, 2, -5.0, 5.0, -1.0316},
    {FunctionId::F17, 2, -5.0, 5.0, 0.398},
    {FunctionId::F18, 2, -2.0, 2.0, 3.0},
    {FunctionId::F19, 3, 0.0, 1.0, -3.86},
    {FunctionId::F20, 6, 0.0, 1.0, -3.32},
    {FunctionId::F21, 4, 0.0, 10.0, -10.1532},
    {FunctionId::F22, 4, 0.0, 10.0, -10.4028},
    {FunctionId::F23, 4, 0.0, 10.0, -10.5363},
}};

// Coefficient tables below are not printed with the formulas; they are the
// standard values of the Yao, Liu & Lin (1999) suite.

// Shekel's foxholes: column j is (a_1j, a_2j).
constexpr std::array<double, 5> kFoxholeGrid{-32.0, -16.0, 0.0, 16.0, 32.0};

// Kowalik: a_i and b_i (b given as 1/b_i in the original table).
constexpr std::array<double, 11> kKowalikA{0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627,
                                           0.0456, 0.0342, 0.0323, 0.0235, 0.0246};
constexpr std::array<double, 11> kKowalikInvB{0.25, 0.5, 1.0, 2.0, 4.0, 6.0,
                                              8.0, 10.0, 12.0, 14.0, 16.0};

// Hartman, 3 and 6 dimensions.
constexpr std::array<double, 4> kHartmanC{1.0, 1.2, 3.0, 3.2};
constexpr double kHartman3A[4][3] = {
    {3.0, 10.0, 30.0}, {0.1, 10.0, 35.0}, {3.0, 10.0, 30.0}, {0.1, 10.0, 35.0}};
constexpr double kHartman3P[4][3] = {{0.3689, 0.1170, 0.2673},
                                     {0.4699, 0.4387, 0.7470},
                                     {0.1091, 0.8732, 0.5547},
                                     {0.03815, 0.5743, 0.8828}};
constexpr double kHartman6A[4][6] = {{10.0, 3.0, 17.0, 3.5, 1.7, 8.0},
                                     {0.05, 10.0, 17.0, 0.1, 8.0, 14.0},
                                     {3.0, 3.5, 1.7, 10.0, 17.0, 8.0},
                                     {17.0, 8.0, 0.05, 10.0, 0.1, 14.0}};
constexpr double kHartman6P[4][6] = {{0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
                                     {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
                                     {0.2348, 0.1415, 0.3522, 0.2883, 0.3047, 0.6650},
                                     {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381}};

// Shekel 5/7/10 share the first m rows.
constexpr double kShekelA[10][4] = {{4, 4, 4, 4}, {1, 1, 1, 1}, {8, 8, 8, 8}, {6, 6, 6, 6},
                                    {3, 7, 3, 7}, {2, 9, 2, 9}, {5, 5, 3, 3}, {8, 1, 8, 1},
                                    {6, 2, 6, 2}, {7, 3.6, 7, 3.6}};
constexpr std::array<double, 10> kShekelC{0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5};

double sq(double v) { return v * v; }

double penalty(double x, double a, double k, double m) {
    if (x > a) return k * std::pow(x - a, m);
    if (x < -a) return k * std::pow(-x - a, m);
    return 0.0;
}

template <std::size_t Dim>
double hartman(std::span<const double> x, const double (&a)[4][Dim], const double (&p)[4][Dim]) {
    double total = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        double inner = 0.0;
        for (std::size_t j = 0; j < Dim; ++j) inner += a[i][j] * sq(x[j] - p[i][j]);
        total += kHartmanC[i] * std::exp(-inner);
    }
    return -total;
}

double shekel(std::span<const double> x, std::size_t m) {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double dist = 0.0;
        for (std::size_t j = 0; j < 4; ++j) dist += sq(x[j] - kShekelA[i][j]);
        total += 1.0 / (dist + kShekelC[i]);
    }
    return -total;
}

double evaluate_unchecked(FunctionId id, std::span<const double> x, Rng& rng) {
    const std::size_t n = x.size();
    const double nd = static_cast<double>(n);
    switch (id) {
    case FunctionId::F1: {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s;
    }
    case FunctionId::F2: {
        double s = 0.0, p = 1.0;
        for (double v : x) {
            s += std::fabs(v);
            p *= std::fabs(v);
        }
        return s + p;
    }
    case FunctionId::F3: {
        double s = 0.0, prefix = 0.0;
        for (double v : x) {
            prefix += v;
            s += prefix * prefix;
        }
        return s;
    }
    case FunctionId::F4: {
        double m = 0.0;
        for (double v : x) m = std::max(m, std::fabs(v));
        return m;
    }
    case FunctionId::F5: {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            s += 100.0 * sq(x[i + 1] - x[i] * x[i]) + sq(x[i] - 1.0);
        }
        return s;
    }
    case FunctionId::F6: {
        double s = 0.0;
        for (double v : x) s += sq(std::floor(v + 0.5));
        return s;
    }
    case FunctionId::F7: {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += static_cast<double>(i + 1) * std::pow(x[i], 4);
        return s + rng.uniform01();
    }
    case FunctionId::F8: {
        double s = 0.0;
        for (double v : x) s += -v * std::sin(std::sqrt(std::fabs(v)));
        return s;
    }
    case FunctionId::F9: {
        double s = 0.0;
        for (double v : x) s += v * v - 10.0 * std::cos(2.0 * pi * v) + 10.0;
        return s;
    }
    case FunctionId::F10: {
        double sq_sum = 0.0, cos_sum = 0.0;
        for (double v : x) {
            sq_sum += v * v;
            cos_sum += std::cos(2.0 * pi * v);
        }
        return -20.0 * std::exp(-0.2 * std::sqrt(sq_sum / nd)) - std::exp(cos_sum / nd) + 20.0 +
               std::numbers::e;
    }
    case FunctionId::F11: {
        double s = 0.0, p = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += x[i] * x[i];
            p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
        }
        return s / 4000.0 - p + 1.0;
    }
    case FunctionId::F12: {
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = 1.0 + (x[i] + 1.0) / 4.0;
        double s = 10.0 * sq(std::sin(pi * y[0]));
        for (std::size_t i = 0; i + 1 < n; ++i) {
            s += sq(y[i] - 1.0) * (1.0 + 10.0 * sq(std::sin(pi * y[i + 1])));
        }
        s += sq(y[n - 1] - 1.0);
        double pen = 0.0;
        for (double v : x) pen += penalty(v, 10.0, 100.0, 4.0);
        return pi / nd * s + pen;
    }
    case FunctionId::F13: {
        double s = sq(std::sin(3.0 * pi * x[0]));
        for (std::size_t i = 0; i + 1 < n; ++i) {
            s += sq(x[i] - 1.0) * (1.0 + sq(std::sin(3.0 * pi * x[i + 1])));
        }
        s += sq(x[n - 1] - 1.0) * (1.0 + sq(std::sin(2.0 * pi * x[n - 1])));
        double pen = 0.0;
        for (double v : x) pen += penalty(v, 5.0, 100.0, 4.0);
        return 0.1 * s + pen;
    }
    case FunctionId::F14: {
        double s = 1.0 / 500.0;
        for (std::size_t j = 0; j < 25; ++j) {
            const double a1 = kFoxholeGrid[j % 5];
            const double a2 = kFoxholeGrid[j / 5];
            s += 1.0 / (static_cast<double>(j + 1) + std::pow(x[0] - a1, 6) + std::pow(x[1] - a2, 6));
        }
        return 1.0 / s;
    }
    case FunctionId::F15: {
        double s = 0.0;
        for (std::size_t i = 0; i < 11; ++i) {
            const double b = 1.0 / kKowalikInvB[i];
            s += sq(kKowalikA[i] - x[0] * (b * b + b * x[1]) / (b * b + b * x[2] + x[3]));
        }
        return s;
    }
    case FunctionId::F16: {
        const double a = x[0], b = x[1];
        return 4.0 * a * a - 2.1 * std::pow(a, 4) + std::pow(a, 6) / 3.0 + a * b - 4.0 * b * b +
               4.0 * std::pow(b, 4);
    }
    case FunctionId::F17: {
        const double a = x[0], b = x[1];
        return sq(b - 5.1 / (4.0 * pi * pi) * a * a + 5.0 / pi * a - 6.0) +
               10.0 * (1.0 - 1.0 / (8.0 * pi)) * std::cos(a) + 10.0;
    }
    case FunctionId::F18: {
        const double a = x[0], b = x[1];
        const double left =
            1.0 + sq(a + b + 1.0) * (19.0 - 14.0 * a + 3.0 * a * a - 14.0 * b + 6.0 * a * b + 3.0 * b * b);
        const double right = 30.0 + sq(2.0 * a - 3.0 * b) *
                                        (18.0 - 32.0 * a + 12.0 * a * a + 48.0 * b - 36.0 * a * b +
                                         27.0 * b * b);
        return left * right;
    }
    case FunctionId::F19:
        return hartman(x, kHartman3A, kHartman3P);
    case FunctionId::F20:
        return hartman(x, kHartman6A, kHartman6P);
    case FunctionId::F21:
        return shekel(x, 5);
    case FunctionId::F22:
        return shekel(x, 7);
    case FunctionId::F23:
        return shekel(x, 10);
    }
    throw ConfigError("unknown benchmark function");
}

std::string real(double v) { return fmt::format("{}", v); }

}  // namespace

const FunctionInfo& info(FunctionId id) {
    const auto index = static_cast<std::size_t>(id) - 1;
    if (index >= kFunctions.size()) throw ConfigError("unknown benchmark function");
    return kFunctions[index];
}

std::string name(FunctionId id) { return "F" + std::to_string(static_cast<int>(id)); }

std::vector<FunctionId> all_functions() {
    std::vector<FunctionId> ids;
    for (const auto& f : kFunctions) ids.push_back(f.id);
    return ids;
}

std::optional<FunctionId> parse_function_id(std::string_view text) {
    if (text.size() < 2 || (text[0] != 'F' && text[0] != 'f')) return std::nullopt;
    int number = 0;
    for (char c : text.substr(1)) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        number = number * 10 + (c - '0');
        if (number > 23) return std::nullopt;
    }
    if (number < 1 || text[1] == '0') return std::nullopt;
    return static_cast<FunctionId>(number);
}

double evaluate_benchmark(FunctionId id, std::span<const double> x, Rng& rng) {
    const FunctionInfo& f = info(id);
    if (x.size() != f.dimension) {
        throw DimensionError(name(id) + " expects dimension " + std::to_string(f.dimension) +
                             ", got " + std::to_string(x.size()));
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= f.lower && x[i] <= f.upper)) {
            throw EvaluationError(name(id) + ": coordinate " + std::to_string(i) + " = " +
                                  real(x[i]) + " lies outside [" + real(f.lower) + ", " +
                                  real(f.upper) + "]");
        }
    }
    return evaluate_unchecked(id, x, rng);
}

Problem make_problem(FunctionId id) {
    const FunctionInfo& f = info(id);
    return Problem::continuous(
        std::vector<double>(f.dimension, f.lower), std::vector<double>(f.dimension, f.upper),
        [id](std::span<const double> x, Rng& rng) { return evaluate_benchmark(id, x, rng); },
        Sense::minimize);
}

std::pair<double, double> mean_and_std(std::span<const double> values) {
    if (values.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    return {mean, std::sqrt(var)};
}

std::vector<CampaignResult> run_campaign(std::span<const FunctionId> ids, const PfmParams& params,
                                         std::size_t runs) {
    if (runs == 0) throw ConfigError("a campaign needs at least one run");
    params.validate();
    std::vector<CampaignResult> results;
    for (FunctionId id : ids) {
        CampaignResult result;
        result.id = id;
        result.dimension = info(id).dimension;
        result.runs = runs;
        result.params = params;
        const Problem problem = make_problem(id);
        const auto start = std::chrono::steady_clock::now();
        for (std::size_t run = 0; run < runs; ++run) {
            PfmParams run_params = params;
            run_params.seed = params.seed + run;
            RunTrace trace = optimize(problem, run_params);
            result.per_run_best.push_back(trace.best_solution.fitness);
            result.convergence.push_back(std::move(trace.best_per_iteration));
        }
        const auto stop = std::chrono::steady_clock::now();
        result.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        std::tie(result.avg, result.std) = mean_and_std(result.per_run_best);
        const auto [lo, hi] = std::minmax_element(result.per_run_best.begin(), result.per_run_best.end());
        result.best = *lo;
        result.worst = *hi;
        results.push_back(std::move(result));
    }
    return results;
}

std::string campaign_csv(std::span<const CampaignResult> results) {
    std::string out = "id,dim,runs,avg,std,best,worst\n";
    for (const auto& r : results) {
        out += fmt::format("{},{},{},{},{},{},{}\n", name(r.id), r.dimension, r.runs, real(r.avg),
                           real(r.std), real(r.best), real(r.worst));
    }
    return out;
}

nlohmann::ordered_json campaign_json(std::span<const CampaignResult> results) {
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        rows.push_back({{"id", name(r.id)},
                        {"dim", r.dimension},
                        {"runs", r.runs},
                        {"avg", r.avg},
                        {"std", r.std},
                        {"best", r.best},
                        {"worst", r.worst},
                        {"f_min", info(r.id).f_min},
                        {"per_run_best", r.per_run_best}});
    }
    return rows;
}

std::string campaign_timing_csv(std::span<const CampaignResult> results) {
    std::string out = "id,wall_ms\n";
    for (const auto& r : results) out += fmt::format("{},{:.3f}\n", name(r.id), r.wall_ms);
    return out;
}

std::string campaign_convergence_csv(std::span<const CampaignResult> results) {
    std::string out = "function,run,iteration,best\n";
    for (const auto& r : results) {
        for (std::size_t run = 0; run < r.convergence.size(); ++run) {
            const auto& curve = r.convergence[run];
            for (std::size_t it = 0; it < curve.size(); ++it) {
                out += fmt::format("{},{},{},{}\n", name(r.id), run, it + 1, real(curve[it]));
            }
        }
    }
    return out;
}

}  // namespace pfm::bench
