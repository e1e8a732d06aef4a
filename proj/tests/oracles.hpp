#pragma once

// Test-only reference implementations. Nothing here calls into the code
// paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pfm/dataset.hpp"

namespace pfm::oracle {

/// Brute-force KNN: every pairwise distance, a full sort by (distance, row),
/// then a majority vote with ties going to `tie_label`.
inline std::vector<std::uint8_t> knn(const data::Matrix& train, const std::vector<std::uint8_t>& labels,
                                     const data::Matrix& queries, std::size_t k,
                                     const std::vector<std::uint8_t>& mask, std::uint8_t tie_label = 1) {
    std::vector<std::uint8_t> out;
    for (std::size_t q = 0; q < queries.rows; ++q) {
        std::vector<std::pair<double, std::size_t>> all;
        for (std::size_t r = 0; r < train.rows; ++r) {
            double d2 = 0.0;
            for (std::size_t c = 0; c < mask.size(); ++c) {
                if (!mask[c]) continue;
                const double diff = train.at(r, c) - queries.at(q, c);
                d2 += diff * diff;
            }
            all.emplace_back(d2, r);
        }
        std::sort(all.begin(), all.end());
        int attack = 0, normal = 0;
        for (std::size_t i = 0; i < k; ++i) (labels[all[i].second] ? attack : normal) += 1;
        out.push_back(attack == normal ? tie_label : (attack > normal ? 1 : 0));
    }
    return out;
}

/// Minimises t -> f(t, t, ..., t) over [lo, hi] by a uniform grid followed
/// by repeated local grid refinement. Returns (t*, f(t*)).
inline std::pair<double, double> diagonal_grid_min(const std::function<double(std::span<const double>)>& f,
                                                   std::size_t dim, double lo, double hi) {
    std::vector<double> x(dim);
    const auto eval = [&](double t) {
        std::fill(x.begin(), x.end(), t);
        return f(x);
    };
    double best_t = lo, best_f = eval(lo);
    double left = lo, right = hi;
    for (int round = 0; round < 12; ++round) {
        const int steps = 2000;
        const double h = (right - left) / steps;
        for (int i = 0; i <= steps; ++i) {
            const double t = left + h * i;
            const double v = eval(t);
            if (v < best_f) {
                best_f = v;
                best_t = t;
            }
        }
        left = std::max(lo, best_t - 2 * h);
        right = std::min(hi, best_t + 2 * h);
    }
    return {best_t, best_f};
}

/// Coarse grid over a 2-D box, then shrinking local grids around the best
/// cell. Returns (argmin, min).
inline std::pair<std::vector<double>, double> grid_refine_2d(
    const std::function<double(std::span<const double>)>& f, double lo, double hi) {
    std::vector<double> best{lo, lo};
    double best_f = f(best);
    double x0 = lo, x1 = hi, y0 = lo, y1 = hi;
    for (int round = 0; round < 25; ++round) {
        const int steps = round == 0 ? 400 : 40;
        const double hx = (x1 - x0) / steps, hy = (y1 - y0) / steps;
        for (int i = 0; i <= steps; ++i) {
            for (int j = 0; j <= steps; ++j) {
                std::vector<double> p{x0 + hx * i, y0 + hy * j};
                const double v = f(p);
                if (v < best_f) {
                    best_f = v;
                    best = p;
                }
            }
        }
        x0 = std::max(lo, best[0] - 2 * hx);
        x1 = std::min(hi, best[0] + 2 * hx);
        y0 = std::max(lo, best[1] - 2 * hy);
        y1 = std::min(hi, best[1] + 2 * hy);
    }
    return {best, best_f};
}

/// Compass (coordinate pattern) search from x0 inside [lo, hi]^n.
inline std::pair<std::vector<double>, double> compass_search(
    const std::function<double(std::span<const double>)>& f, std::vector<double> x, double lo, double hi,
    double step, double min_step = 1e-10) {
    double fx = f(x);
    while (step > min_step) {
        bool improved = false;
        for (std::size_t d = 0; d < x.size(); ++d) {
            for (double sign : {1.0, -1.0}) {
                auto y = x;
                y[d] = std::clamp(y[d] + sign * step, lo, hi);
                const double fy = f(y);
                if (fy < fx) {
                    x = std::move(y);
                    fx = fy;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return {x, fx};
}

/// Synthetic binary-labelled data: `informative` columns drive the label
/// (attack iff their sum exceeds half their count), the rest are uniform noise.
inline data::Dataset planted_dataset(std::size_t rows, std::size_t features,
                                     const std::vector<std::size_t>& informative, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    data::Dataset ds;
    ds.features = data::Matrix(rows, features);
    for (std::size_t r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < features; ++c) ds.features.at(r, c) = u(gen);
        for (auto c : informative) sum += ds.features.at(r, c);
        ds.labels.push_back(sum > 0.5 * static_cast<double>(informative.size()) ? 1 : 0);
    }
    for (std::size_t c = 0; c < features; ++c) ds.feature_names.push_back("f" + std::to_string(c + 1));
    ds.provenance = "synthetic";
    return ds;
}

/// Random dataset with values in [0, 1], labels drawn independently.
inline data::Dataset random_dataset(std::size_t rows, std::size_t features, std::mt19937_64& gen,
                                    bool coarse = false) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> level(0, 3);
    data::Dataset ds;
    ds.features = data::Matrix(rows, features);
    for (auto& v : ds.features.values) v = coarse ? level(gen) / 3.0 : u(gen);
    for (std::size_t r = 0; r < rows; ++r) ds.labels.push_back(u(gen) < 0.5 ? 1 : 0);
    ds.feature_names.assign(features, "f");
    ds.provenance = "random";
    return ds;
}

}  // namespace pfm::oracle
