#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "pfm/rng.hpp"

namespace pfm {

using Position = std::vector<double>;

/// One candidate solution: a position and its cached objective value.
struct Peafowl {
    Position position;
    double fitness = 0.0;

    bool operator==(const Peafowl&) const = default;
};

/// How the mutation term of the mating rule is sampled.
enum class MutationNoise {
    per_dimension,  ///< a fresh draw in [-1, 1] for every coordinate
    per_newborn,    ///< one draw in [-1, 1] broadcast to every coordinate
};

/// Algorithm constants. Defaults are the published settings.
struct PfmParams {
    std::size_t population_size = 30;
    std::size_t max_iterations = 500;
    std::size_t seasons_per_iteration = 3;
    double call_intensity = 0.1;   ///< I0
    double colorfulness = 0.1;     ///< C0
    double gamma1 = 1.0;           ///< sound distortion coefficient
    double gamma2 = 1.0;           ///< colour absorption coefficient
    double dominance_factor = 0.8; ///< fraction of males that are dominant
    double r_min = 0.4;            ///< male fraction is drawn from [r_min, r_max]
    double r_max = 0.6;
    std::uint64_t seed = 0;
    MutationNoise noise = MutationNoise::per_dimension;

    /// Throws ConfigError when a field is out of range.
    void validate() const;
};

struct PopulationSplit {
    std::size_t n_males = 0;
    std::size_t n_females = 0;
    std::size_t n_dominant = 0;
    std::size_t n_normal = 0;

    bool operator==(const PopulationSplit&) const = default;
};

enum class Sense { minimize, maximize };

struct ContinuousBox {
    std::vector<double> lower;
    std::vector<double> upper;
};

struct BinaryDomain {};

using Domain = std::variant<ContinuousBox, BinaryDomain>;

/// Objective function. The stream is only consumed by objectives that are
/// themselves stochastic (the noisy quartic benchmark).
using Objective = std::function<double(std::span<const double>, Rng&)>;

/// Optional feasibility repair, applied to every position after domain
/// adjustment and before evaluation.
using Repair = std::function<void(Position&, Rng&)>;

struct Problem {
    std::size_t dimension = 0;
    Domain domain = BinaryDomain{};
    Objective objective;
    Sense sense = Sense::minimize;
    Repair repair;

    static Problem continuous(std::vector<double> lower, std::vector<double> upper,
                              Objective objective, Sense sense = Sense::minimize);
    static Problem binary(std::size_t dimension, Objective objective,
                          Sense sense = Sense::maximize);

    bool is_binary() const { return std::holds_alternative<BinaryDomain>(domain); }

    /// True when fitness a is strictly better than b in this problem's sense.
    bool better(double a, double b) const {
        return sense == Sense::minimize ? a < b : a > b;
    }

    void validate() const;
};

struct RunTrace {
    std::vector<double> best_per_iteration;
    Peafowl best_solution;
    std::size_t evaluations = 0;
    std::uint64_t seed = 0;

    bool operator==(const RunTrace&) const = default;
};

/// Optional callbacks into a run, mainly for instrumentation and tests.
struct RunObservers {
    std::function<void(const Peafowl&)> on_evaluate;
    std::function<void(const std::vector<Peafowl>&)> on_season_end;
};

/// I0 * exp(-gamma1 * d) + C0 * exp(-gamma2 * d).
double attractiveness(double d, const PfmParams& params);

/// Euclidean distance. Throws DimensionError on a length mismatch.
double distance(std::span<const double> a, std::span<const double> b);

/// Male/female and dominant/normal head counts for a population of n.
/// Counts are rounded half-up and clamped so that every role is non-empty
/// except the normal males. Throws ConfigError when n < 4.
PopulationSplit split_population(std::size_t n, double r, double alpha);

/// Raw newborn position with the mutation draws supplied explicitly:
/// new[d] = f[d]*m[d] + (f[d] - m[d]) * A + noise[d] * exp(gamma1 * gamma2).
/// noise must have one entry per dimension.
Position mate(std::span<const double> father, std::span<const double> mother,
              const PfmParams& params, std::span<const double> noise);

/// Raw newborn position, drawing the mutation term from rng per params.noise.
Position mate(const Peafowl& father, const Peafowl& mother, const PfmParams& params, Rng& rng);

/// Evaluates a position, rejecting non-finite objective values.
double evaluate(const Problem& problem, std::span<const double> position, Rng& rng);

/// One mating season. Returns the best population_size individuals among
/// the parents and their offspring, best first.
///
/// Draw order: r; then for every dominant male in rank order the partner
/// count followed by each partner index; then one partner index per normal
/// male; then for every newborn in creation order its mutation draws, its
/// transfer draws (binary problems) and any repair draws; finally the
/// objective's own draws, newborn by newborn.
std::vector<Peafowl> run_season(std::span<const Peafowl> population, const PfmParams& params,
                                const Problem& problem, Rng& rng,
                                const RunObservers& observers = {});

/// Full optimisation run: random initial population, then
/// max_iterations * seasons_per_iteration seasons.
RunTrace optimize(const Problem& problem, const PfmParams& params,
                  const RunObservers& observers = {});

}  // namespace pfm
