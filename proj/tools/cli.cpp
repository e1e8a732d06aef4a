#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "pfm/benchmarks.hpp"
#include "pfm/dataset.hpp"
#include "pfm/errors.hpp"
#include "pfm/feature_select.hpp"
#include "pfm/io.hpp"
#include "pfm/metrics.hpp"

namespace pfm::cli {
namespace {

namespace fsys = std::filesystem;
using Json = nlohmann::ordered_json;

class UsageError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

struct Options {
    std::string command;
    std::uint64_t seed = 1;
    std::size_t runs = 30;
    std::string functions = "all";
    PfmParams params;
    std::string noise = "per-dimension";
    std::size_t k_neighbors = 5;
    double holdout = 0.2;
    std::size_t top = 3;
    std::string features;
    std::size_t folds = 10;
    std::string train;
    std::string test;
    std::string schema;
    std::string out = "out";
};

std::shared_ptr<spdlog::logger> logger() {
    static auto log = [] {
        auto l = spdlog::stderr_logger_mt("pfm");
        l->set_pattern("[%Y-%m-%d %H:%M:%S.%e] [%l] %v");
        return l;
    }();
    return log;
}

Json params_json(const PfmParams& p) {
    return {{"population", p.population_size},
            {"iterations", p.max_iterations},
            {"seasons", p.seasons_per_iteration},
            {"i0", p.call_intensity},
            {"c0", p.colorfulness},
            {"gamma1", p.gamma1},
            {"gamma2", p.gamma2},
            {"alpha", p.dominance_factor},
            {"r_min", p.r_min},
            {"r_max", p.r_max},
            {"noise", p.noise == MutationNoise::per_dimension ? "per-dimension" : "per-newborn"},
            {"seed", p.seed}};
}

Json wrapper_json(const fs::WrapperFitnessSpec& s) {
    return {{"k_neighbors", s.k_neighbors},
            {"holdout_fraction", s.holdout_fraction},
            {"seed", s.seed},
            {"vote_tie_label", s.vote_tie_label}};
}

void write(const fsys::path& dir, const std::string& name, std::string_view content) {
    io::write_file_atomic(dir / name, content);
}

void write_json(const fsys::path& dir, const std::string& name, const Json& j) {
    write(dir, name, j.dump(2) + "\n");
}

std::string require(const std::string& value, const char* flag) {
    if (value.empty()) throw UsageError(fmt::format("{} is required for this command", flag));
    return value;
}

struct LoadedData {
    data::Preprocessor preprocessor;
    data::Dataset train;
    std::optional<data::Dataset> test;
    Json provenance;
};

data::RawTable read_table(const std::string& path, const data::Schema& schema) {
    auto table = data::load_csv(path, schema.has_header);
    if (schema.drop_duplicates) {
        const auto dropped = data::drop_duplicate_rows(table);
        logger()->info("{}: dropped {} duplicate rows", path, dropped);
    }
    logger()->info("{}: {} rows, {} columns", path, table.rows.size(), table.column_count);
    return table;
}

LoadedData load_data(const Options& o, bool with_test) {
    const auto schema = data::Schema::load(require(o.schema, "--schema"));
    const auto train_table = read_table(require(o.train, "--train"), schema);
    auto preprocessor = data::Preprocessor::fit(train_table, schema);
    LoadedData loaded{preprocessor, preprocessor.transform(train_table), std::nullopt, Json::object()};
    loaded.provenance["train"] = {{"path", o.train},
                                  {"hash", data::fnv1a_hex(io::read_file(o.train))},
                                  {"rows", loaded.train.rows()}};
    if (with_test) {
        const auto test_table = read_table(require(o.test, "--test"), schema);
        loaded.test = preprocessor.transform(test_table);
        loaded.provenance["test"] = {{"path", o.test},
                                     {"hash", data::fnv1a_hex(io::read_file(o.test))},
                                     {"rows", loaded.test->rows()}};
    }
    loaded.provenance["preprocessing"] = preprocessor.manifest();
    return loaded;
}

fs::WrapperFitnessSpec wrapper_spec(const Options& o) {
    fs::WrapperFitnessSpec spec;
    spec.k_neighbors = o.k_neighbors;
    spec.holdout_fraction = o.holdout;
    spec.seed = o.seed;
    spec.validate();
    return spec;
}

// One metrics row per evaluated subset.
struct MetricsRow {
    std::string name;
    fs::FeatureSubset subset;
    ConfusionCounts counts;
};

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
    std::string out = "subset,n_features,features,tp,tn,fp,fn";
    for (const char* m : kMetricNames) out += fmt::format(",{}", m);
    for (const char* m : kMetricNames) out += fmt::format(",{}_pct", m);
    out += "\n";
    for (const auto& row : rows) {
        const auto values = metric_values(compute_metrics(row.counts));
        out += fmt::format("{},{},\"{}\",{},{},{},{}", row.name, row.subset.cardinality(),
                           row.subset.joined(), row.counts.tp, row.counts.tn, row.counts.fp,
                           row.counts.fn);
        for (const auto& v : values) out += "," + format_fraction(v);
        for (const auto& v : values) out += "," + format_percent(v);
        out += "\n";
    }
    return out;
}

Json metrics_rows_json(const std::vector<MetricsRow>& rows) {
    auto out = Json::array();
    for (const auto& row : rows) {
        Json j = {{"subset", row.name}, {"features", row.subset.indices()}};
        j.update(metrics_json(row.counts, compute_metrics(row.counts)));
        out.push_back(std::move(j));
    }
    return out;
}

std::vector<bench::FunctionId> parse_functions(const std::string& text) {
    if (text == "all") return bench::all_functions();
    std::vector<bench::FunctionId> ids;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = std::min(text.find(',', start), text.size());
        const auto token = text.substr(start, comma - start);
        const auto id = bench::parse_function_id(token);
        if (!id) throw UsageError(fmt::format("unknown benchmark function '{}'", token));
        ids.push_back(*id);
        start = comma + 1;
    }
    return ids;
}

void cmd_bench(const Options& o, const fsys::path& out, Json manifest) {
    const auto ids = parse_functions(o.functions);
    if (o.runs == 0) throw UsageError("--runs must be at least 1");
    logger()->info("bench: {} functions x {} runs", ids.size(), o.runs);
    const auto results = bench::run_campaign(ids, o.params, o.runs);
    for (const auto& r : results) {
        logger()->info("{}: avg {} std {} ({:.0f} ms)", bench::name(r.id), r.avg, r.std, r.wall_ms);
    }
    write(out, "results.csv", bench::campaign_csv(results));
    write_json(out, "results.json", bench::campaign_json(results));
    write(out, "convergence.csv", bench::campaign_convergence_csv(results));
    write(out, "timing.csv", bench::campaign_timing_csv(results));
    std::vector<std::string> names;
    for (auto id : ids) names.push_back(bench::name(id));
    manifest["functions"] = names;
    manifest["runs"] = o.runs;
    write_json(out, "manifest.json", manifest);
}

void cmd_select(const Options& o, const fsys::path& out, Json manifest) {
    const auto loaded = load_data(o, false);
    const auto spec = wrapper_spec(o);
    logger()->info("select: {} rows, {} features", loaded.train.rows(), loaded.train.feature_count());
    const auto result = fs::select_features(loaded.train, o.params, spec, o.top);
    logger()->info("best subset ({} features): {} fitness {}", result.best.subset.cardinality(),
                   result.best.subset.joined(), result.best.fitness);

    write(out, "results.csv", fs::subset_report_csv(result.top));
    Json results = {{"subsets", fs::subset_report_json(result.top)},
                    {"feature_names", loaded.train.feature_names},
                    {"evaluations", result.trace.evaluations}};
    write_json(out, "results.json", results);
    std::string convergence = "iteration,best_fitness\n";
    for (std::size_t i = 0; i < result.trace.best_per_iteration.size(); ++i) {
        convergence += fmt::format("{},{}\n", i + 1, result.trace.best_per_iteration[i]);
    }
    write(out, "convergence.csv", convergence);
    manifest["wrapper"] = wrapper_json(spec);
    manifest["data"] = loaded.provenance;
    write_json(out, "manifest.json", manifest);
}

void cmd_eval(const Options& o, const fsys::path& out, Json manifest) {
    const auto loaded = load_data(o, true);
    const auto n = loaded.train.feature_count();
    std::vector<MetricsRow> rows;
    const auto all = fs::FeatureSubset::all(n);
    rows.push_back({"all", all, fs::evaluate_subset(all, loaded.train, *loaded.test, o.k_neighbors)});
    if (!o.features.empty() && o.features != "all") {
        const auto subset = fs::FeatureSubset::parse(o.features, n);
        rows.push_back(
            {"selected", subset, fs::evaluate_subset(subset, loaded.train, *loaded.test, o.k_neighbors)});
    }
    for (const auto& row : rows) {
        const auto m = compute_metrics(row.counts);
        logger()->info("{}: AC {}% DR {}% FPR {}%", row.name, format_percent(m.accuracy),
                       format_percent(m.detection_rate), format_percent(m.fpr));
    }
    write(out, "results.csv", metrics_csv(rows));
    write_json(out, "results.json", metrics_rows_json(rows));
    manifest["k_neighbors"] = o.k_neighbors;
    manifest["data"] = loaded.provenance;
    write_json(out, "manifest.json", manifest);
}

void cmd_cv(const Options& o, const fsys::path& out, Json manifest) {
    if (o.folds < 2) throw UsageError("--folds must be at least 2");
    const auto loaded = load_data(o, false);
    const auto& dataset = loaded.train;
    std::optional<fs::FeatureSubset> subset;
    if (!o.features.empty() && o.features != "all") {
        subset = fs::FeatureSubset::parse(o.features, dataset.feature_count());
    }
    const auto plan = data::make_folds(dataset.rows(), o.folds, o.seed);
    const auto cv = fs::cross_validate(subset, dataset, plan, o.k_neighbors);
    for (const auto& w : cv.warnings) logger()->warn("{}", w);

    std::string folds = "fold,rows,tp,tn,fp,fn";
    for (const char* m : kMetricNames) folds += fmt::format(",{}_pct", m);
    folds += "\n";
    for (std::size_t f = 0; f < cv.per_fold.size(); ++f) {
        const auto& c = cv.per_fold[f];
        folds += fmt::format("{},{},{},{},{},{}", f + 1, c.total(), c.tp, c.tn, c.fp, c.fn);
        for (const auto& v : metric_values(compute_metrics(c))) folds += "," + format_percent(v);
        folds += "\n";
    }
    write(out, "folds.csv", folds);

    const std::vector<MetricsRow> rows{
        {subset ? "selected" : "all", subset ? *subset : fs::FeatureSubset::all(dataset.feature_count()),
         cv.pooled}};
    write(out, "results.csv", metrics_csv(rows));
    Json results = {{"pooled", metrics_rows_json(rows).at(0)}, {"warnings", cv.warnings}};
    write_json(out, "results.json", results);
    manifest["folds"] = o.folds;
    manifest["k_neighbors"] = o.k_neighbors;
    manifest["data"] = loaded.provenance;
    write_json(out, "manifest.json", manifest);
}

void build_app(CLI::App& app, Options& o) {
    app.set_config("--config", "", "Configuration file (INI/TOML key = value; flags override it)");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1, 1);
    app.fallthrough();

    app.add_option("--seed", o.seed, "Base random seed")->capture_default_str();
    app.add_option("--runs", o.runs, "Independent runs per benchmark function")->capture_default_str();
    app.add_option("--functions", o.functions, "Comma-separated ids F1..F23, or 'all'")
        ->capture_default_str();
    app.add_option("--population", o.params.population_size, "Population size")->capture_default_str();
    app.add_option("--iterations", o.params.max_iterations, "Iterations")->capture_default_str();
    app.add_option("--seasons", o.params.seasons_per_iteration, "Mating seasons per iteration")
        ->capture_default_str();
    app.add_option("--alpha", o.params.dominance_factor, "Dominance factor")->capture_default_str();
    app.add_option("--gamma1", o.params.gamma1, "Sound distortion coefficient")->capture_default_str();
    app.add_option("--gamma2", o.params.gamma2, "Colour absorption coefficient")->capture_default_str();
    app.add_option("--i0", o.params.call_intensity, "Mating call intensity")->capture_default_str();
    app.add_option("--c0", o.params.colorfulness, "Feather colourfulness")->capture_default_str();
    app.add_option("--r-min", o.params.r_min, "Lower bound of the male fraction")->capture_default_str();
    app.add_option("--r-max", o.params.r_max, "Upper bound of the male fraction")->capture_default_str();
    app.add_option("--noise", o.noise, "Mutation draw: per-dimension or per-newborn")
        ->check(CLI::IsMember({"per-dimension", "per-newborn"}))
        ->capture_default_str();
    app.add_option("--k-neighbors", o.k_neighbors, "Neighbours used by the KNN classifier")
        ->capture_default_str();
    app.add_option("--holdout", o.holdout, "Held-out fraction used to score subsets")
        ->capture_default_str();
    app.add_option("--top", o.top, "Number of distinct subsets reported")->capture_default_str();
    app.add_option("--features", o.features, "Comma-separated 1-based feature indices, or 'all'");
    app.add_option("--folds", o.folds, "Cross-validation folds")->capture_default_str();
    app.add_option("--train", o.train, "Training CSV");
    app.add_option("--test", o.test, "Test CSV");
    app.add_option("--schema", o.schema, "Schema JSON file, or 'nsl-kdd' / 'kyoto'");
    app.add_option("--out", o.out, "Output directory")->capture_default_str();

    const auto pick = [&o](const char* name) { return [&o, name] { o.command = name; }; };
    app.add_subcommand("bench", "Benchmark-function campaign")->callback(pick("bench"));
    app.add_subcommand("select", "Wrapper feature selection on a training set")->callback(pick("select"));
    app.add_subcommand("eval", "Train/test evaluation of a feature subset")->callback(pick("eval"));
    app.add_subcommand("cv", "k-fold cross-validation of a feature subset")->callback(pick("cv"));
}

}  // namespace

int run(const std::vector<std::string>& args) {
    Options o;
    CLI::App app{"Peafowl mating optimiser: benchmarks and wrapper feature selection", "pfm"};
    build_app(app, o);
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        o.params.seed = o.seed;
        o.params.noise = o.noise == "per-newborn" ? MutationNoise::per_newborn : MutationNoise::per_dimension;
        o.params.validate();

        if (o.command == "bench") parse_functions(o.functions);  // fail before touching --out

        const fsys::path out = o.out;
        fsys::create_directories(out);
        write(out, "config.ini", fmt::format("# command: {}\n{}", o.command, app.config_to_str(true, false)));

        Json manifest = {{"command", o.command}, {"seed", o.seed}, {"params", params_json(o.params)}};
        if (o.command == "bench") cmd_bench(o, out, std::move(manifest));
        if (o.command == "select") cmd_select(o, out, std::move(manifest));
        if (o.command == "eval") cmd_eval(o, out, std::move(manifest));
        if (o.command == "cv") cmd_cv(o, out, std::move(manifest));
        logger()->info("{}: results written to {}", o.command, out.string());
        return kOk;
    } catch (const ConfigError& e) {
        logger()->error("{}", e.what());
        return kUsage;
    } catch (const DataError& e) {
        logger()->error("{}", e.what());
        return kData;
    } catch (const std::exception& e) {
        logger()->error("{}", e.what());
        return kRuntime;
    }
}

}  // namespace pfm::cli
