#include "pfm/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "pfm/errors.hpp"
#include "pfm/transfer.hpp"

namespace pfm {
namespace {

// round(count * fraction), halves up, decided on the exact product: the
// floating-point product can land on a .5 that the true value misses.
std::size_t round_half_up(std::size_t count, double fraction) {
    const double n = static_cast<double>(count);
    double k = std::floor(n * fraction + 0.5);
    if (std::fma(n, fraction, -(k - 0.5)) < 0.0) {
        k -= 1.0;
    } else if (std::fma(n, fraction, -(k + 0.5)) >= 0.0) {
        k += 1.0;
    }
    return static_cast<std::size_t>(std::max(k, 0.0));
}

std::string describe(std::span<const double> position) {
    std::ostringstream out;
    out.precision(17);
    out << '(';
    for (std::size_t i = 0; i < position.size(); ++i) {
        if (i != 0) out << ", ";
        out << position[i];
    }
    out << ')';
    return out.str();
}

void sort_best_first(std::vector<Peafowl>& population, const Problem& problem) {
    std::stable_sort(population.begin(), population.end(),
                     [&](const Peafowl& a, const Peafowl& b) {
                         return problem.better(a.fitness, b.fitness);
                     });
}

void adjust_to_domain(Position& raw, const Problem& problem, Rng& rng) {
    if (problem.is_binary()) {
        raw = binarize(raw, rng);
    } else {
        const auto& box = std::get<ContinuousBox>(problem.domain);
        for (std::size_t d = 0; d < raw.size(); ++d) {
            raw[d] = std::clamp(raw[d], box.lower[d], box.upper[d]);
        }
    }
    if (problem.repair) problem.repair(raw, rng);
}

Position random_position(const Problem& problem, Rng& rng) {
    Position position(problem.dimension);
    if (problem.is_binary()) {
        for (auto& bit : position) bit = rng.bernoulli(0.5) ? 1.0 : 0.0;
    } else {
        const auto& box = std::get<ContinuousBox>(problem.domain);
        for (std::size_t d = 0; d < position.size(); ++d) {
            position[d] = rng.uniform(box.lower[d], box.upper[d]);
        }
    }
    if (problem.repair) problem.repair(position, rng);
    return position;
}

Peafowl evaluated(const Problem& problem, Position position, Rng& rng,
                  const RunObservers& observers) {
    Peafowl bird{std::move(position), 0.0};
    bird.fitness = evaluate(problem, bird.position, rng);
    if (observers.on_evaluate) observers.on_evaluate(bird);
    return bird;
}

}  // namespace

void PfmParams::validate() const {
    if (population_size < 4) throw ConfigError("population_size must be at least 4");
    if (max_iterations == 0) throw ConfigError("max_iterations must be positive");
    if (seasons_per_iteration == 0) throw ConfigError("seasons_per_iteration must be positive");
    if (!(call_intensity >= 0.0) || !(colorfulness >= 0.0)) {
        throw ConfigError("call_intensity and colorfulness must be non-negative");
    }
    if (!(gamma1 >= 0.0) || !(gamma2 >= 0.0)) {
        throw ConfigError("gamma1 and gamma2 must be non-negative");
    }
    if (!(dominance_factor >= 0.0 && dominance_factor <= 1.0)) {
        throw ConfigError("dominance_factor must lie in [0, 1]");
    }
    if (!(r_min > 0.0 && r_max < 1.0 && r_min <= r_max)) {
        throw ConfigError("r range must satisfy 0 < r_min <= r_max < 1");
    }
}

Problem Problem::continuous(std::vector<double> lower, std::vector<double> upper,
                            Objective objective, Sense sense) {
    Problem p;
    p.dimension = lower.size();
    p.domain = ContinuousBox{std::move(lower), std::move(upper)};
    p.objective = std::move(objective);
    p.sense = sense;
    return p;
}

Problem Problem::binary(std::size_t dimension, Objective objective, Sense sense) {
    Problem p;
    p.dimension = dimension;
    p.domain = BinaryDomain{};
    p.objective = std::move(objective);
    p.sense = sense;
    return p;
}

void Problem::validate() const {
    if (dimension == 0) throw ConfigError("problem dimension must be positive");
    if (!objective) throw ConfigError("problem has no objective");
    if (const auto* box = std::get_if<ContinuousBox>(&domain)) {
        if (box->lower.size() != dimension || box->upper.size() != dimension) {
            throw DimensionError("bound vectors do not match the problem dimension");
        }
        for (std::size_t d = 0; d < dimension; ++d) {
            if (!(box->lower[d] < box->upper[d])) {
                throw ConfigError("lower bound must be below upper bound in dimension " +
                                  std::to_string(d));
            }
        }
    }
}

double attractiveness(double d, const PfmParams& params) {
    return params.call_intensity * std::exp(-params.gamma1 * d) +
           params.colorfulness * std::exp(-params.gamma2 * d);
}

double distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionError("distance: lengths " + std::to_string(a.size()) + " and " +
                             std::to_string(b.size()) + " differ");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

PopulationSplit split_population(std::size_t n, double r, double alpha) {
    if (n < 4) {
        throw ConfigError("population of " + std::to_string(n) +
                          " is too small to hold every role (need at least 4)");
    }
    PopulationSplit split;
    split.n_males = std::clamp<std::size_t>(round_half_up(n, r), 1, n - 1);
    split.n_females = n - split.n_males;
    split.n_dominant = std::clamp<std::size_t>(
        round_half_up(split.n_males, alpha), 1, split.n_males);
    split.n_normal = split.n_males - split.n_dominant;
    return split;
}

Position mate(std::span<const double> father, std::span<const double> mother,
              const PfmParams& params, std::span<const double> noise) {
    if (father.size() != mother.size() || noise.size() != father.size()) {
        throw DimensionError("mate: parent and noise lengths must agree");
    }
    const double a = attractiveness(distance(father, mother), params);
    const double mutation_scale = std::exp(params.gamma1 * params.gamma2);
    Position child(father.size());
    for (std::size_t d = 0; d < child.size(); ++d) {
        child[d] = father[d] * mother[d] + (father[d] - mother[d]) * a + noise[d] * mutation_scale;
    }
    return child;
}

Position mate(const Peafowl& father, const Peafowl& mother, const PfmParams& params, Rng& rng) {
    if (father.position.size() != mother.position.size()) {
        throw DimensionError("mate: parent lengths differ");
    }
    std::vector<double> noise(father.position.size());
    if (params.noise == MutationNoise::per_dimension) {
        for (auto& v : noise) v = rng.uniform_signed_closed();
    } else {
        std::fill(noise.begin(), noise.end(), rng.uniform_signed_closed());
    }
    return mate(father.position, mother.position, params, noise);
}

double evaluate(const Problem& problem, std::span<const double> position, Rng& rng) {
    const double value = problem.objective(position, rng);
    if (!std::isfinite(value)) {
        throw EvaluationError("objective returned a non-finite value at " + describe(position));
    }
    return value;
}

std::vector<Peafowl> run_season(std::span<const Peafowl> population, const PfmParams& params,
                                const Problem& problem, Rng& rng,
                                const RunObservers& observers) {
    const std::size_t n = params.population_size;
    if (population.size() != n) {
        throw DimensionError("run_season: population has " + std::to_string(population.size()) +
                             " members, expected " + std::to_string(n));
    }

    const double r = rng.uniform(params.r_min, params.r_max);
    std::vector<Peafowl> ranked(population.begin(), population.end());
    sort_best_first(ranked, problem);
    const PopulationSplit split = split_population(n, r, params.dominance_factor);

    // Males are ranks [0, n_males), dominant ones first; females follow.
    struct Pairing {
        std::size_t father;
        std::size_t mother;
    };
    std::vector<Pairing> pairings;
    const auto pick_female = [&] {
        return split.n_males + static_cast<std::size_t>(rng.below(split.n_females));
    };
    const auto max_partners =
        static_cast<std::int64_t>(std::max<std::size_t>(1, split.n_females / split.n_dominant));
    for (std::size_t male = 0; male < split.n_dominant; ++male) {
        const auto partners = rng.between(1, max_partners);
        for (std::int64_t k = 0; k < partners; ++k) pairings.push_back({male, pick_female()});
    }
    for (std::size_t male = split.n_dominant; male < split.n_males; ++male) {
        pairings.push_back({male, pick_female()});
    }

    std::vector<Position> newborns;
    newborns.reserve(pairings.size());
    for (const auto& [father, mother] : pairings) {
        Position child = mate(ranked[father], ranked[mother], params, rng);
        adjust_to_domain(child, problem, rng);
        newborns.push_back(std::move(child));
    }

    for (auto& child : newborns) {
        ranked.push_back(evaluated(problem, std::move(child), rng, observers));
    }
    sort_best_first(ranked, problem);
    ranked.resize(n);
    if (observers.on_season_end) observers.on_season_end(ranked);
    return ranked;
}

RunTrace optimize(const Problem& problem, const PfmParams& params, const RunObservers& observers) {
    params.validate();
    problem.validate();

    RunTrace trace;
    trace.seed = params.seed;
    RunObservers counting = observers;
    counting.on_evaluate = [&](const Peafowl& bird) {
        ++trace.evaluations;
        if (observers.on_evaluate) observers.on_evaluate(bird);
    };

    Rng rng(params.seed);
    std::vector<Position> initial;
    initial.reserve(params.population_size);
    for (std::size_t i = 0; i < params.population_size; ++i) {
        initial.push_back(random_position(problem, rng));
    }
    std::vector<Peafowl> population;
    population.reserve(params.population_size);
    for (auto& position : initial) {
        population.push_back(evaluated(problem, std::move(position), rng, counting));
    }
    sort_best_first(population, problem);

    trace.best_per_iteration.reserve(params.max_iterations);
    for (std::size_t iteration = 0; iteration < params.max_iterations; ++iteration) {
        for (std::size_t season = 0; season < params.seasons_per_iteration; ++season) {
            population = run_season(population, params, problem, rng, counting);
        }
        trace.best_per_iteration.push_back(population.front().fitness);
    }
    trace.best_solution = population.front();
    return trace;
}

}  // namespace pfm
