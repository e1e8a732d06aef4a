#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "oracles.hpp"
#include "pfm/io.hpp"

namespace fsys = std::filesystem;
using pfm::cli::run;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        root_ = fsys::temp_directory_path() /
                ("pfm_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fsys::remove_all(root_);
        fsys::create_directories(root_);
    }
    void TearDown() override { fsys::remove_all(root_); }

    std::string path(const std::string& name) const { return (root_ / name).string(); }
    std::string slurp(const std::string& name) const { return pfm::io::read_file(root_ / name); }

    void write(const std::string& name, const std::string& text) const {
        std::ofstream(root_ / name) << text;
    }

    fsys::path root_;
};

// Four numeric features and a text label; the label is driven by the first
// two features so that KNN has something to find.
std::string numeric_csv(std::size_t rows, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    std::ostringstream out;
    for (std::size_t r = 0; r < rows; ++r) {
        const double a = u(gen), b = u(gen), c = u(gen), d = u(gen);
        const bool attack = a + b + u(gen) * 0.4 > 12.0;
        out << a << "," << b << "," << c << "," << d << "," << (attack ? "attack" : "normal") << "\n";
    }
    return out.str();
}

constexpr const char* kSchema = R"({
  "columns": 5,
  "label_column": 4,
  "normal_labels": ["normal"]
})";

struct Parsed {
    pfm::data::Matrix x;
    std::vector<std::uint8_t> y;
};

Parsed parse_numeric(const std::string& text) {
    Parsed p;
    std::istringstream in(text);
    std::string line;
    std::vector<double> values;
    while (std::getline(in, line)) {
        std::istringstream cells(line);
        std::string cell;
        for (int c = 0; c < 4; ++c) {
            std::getline(cells, cell, ',');
            values.push_back(std::stod(cell));
        }
        std::getline(cells, cell);
        p.y.push_back(cell == "normal" ? 0 : 1);
    }
    p.x = pfm::data::Matrix(p.y.size(), 4);
    p.x.values = values;
    return p;
}

}  // namespace

TEST_F(CliTest, BenchRerunIsByteIdentical) {
    const std::vector<std::string> common{"bench", "--functions", "F1,F16", "--runs", "2", "--seed", "7",
                                          "--iterations", "15"};
    auto a = common, b = common;
    a.insert(a.end(), {"--out", path("a")});
    b.insert(b.end(), {"--out", path("b")});
    ASSERT_EQ(run(a), 0);
    ASSERT_EQ(run(b), 0);
    for (const char* f : {"results.csv", "results.json", "convergence.csv"}) {
        EXPECT_EQ(slurp(std::string("a/") + f), slurp(std::string("b/") + f)) << f;
    }
    const auto csv = slurp("a/results.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "id,dim,runs,avg,std,best,worst");
}

TEST_F(CliTest, DefaultsAreEchoed) {
    ASSERT_EQ(run({"bench", "--functions", "F18", "--runs", "1", "--iterations", "2", "--out", path("o")}), 0);
    const auto ini = slurp("o/config.ini");
    for (const char* line : {"gamma1=1", "gamma2=1", "i0=0.1", "c0=0.1", "alpha=0.8", "population=30",
                             "r-min=0.4", "r-max=0.6"}) {
        EXPECT_NE(ini.find(std::string("\n") + line + "\n"), std::string::npos) << line;
    }
    const auto manifest = nlohmann::json::parse(slurp("o/manifest.json"));
    EXPECT_EQ(manifest["params"]["gamma1"], 1.0);
    EXPECT_EQ(manifest["params"]["i0"], 0.1);
    EXPECT_EQ(manifest["params"]["alpha"], 0.8);
}

TEST_F(CliTest, ConfigReplayReproducesResults) {
    ASSERT_EQ(run({"bench", "--functions", "F17", "--runs", "3", "--iterations", "10", "--seed", "4", "--out",
                   path("first")}),
              0);
    ASSERT_EQ(run({"--config", path("first/config.ini"), "bench", "--out", path("second")}), 0);
    EXPECT_EQ(slurp("first/results.csv"), slurp("second/results.csv"));
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(run({"bench", "--functions", "F99", "--out", path("bad")}), pfm::cli::kUsage);
    EXPECT_FALSE(fsys::exists(path("bad")));
    EXPECT_EQ(run({"bench", "--no-such-flag"}), pfm::cli::kUsage);
    EXPECT_EQ(run({}), pfm::cli::kUsage);
    EXPECT_EQ(run({"bench", "--population", "3", "--out", path("p")}), pfm::cli::kUsage);
    EXPECT_EQ(run({"eval", "--schema", "nsl-kdd", "--out", path("e")}), pfm::cli::kUsage);
    write("extra.ini", "seed=3\nbogus=1\n");
    EXPECT_EQ(run({"--config", path("extra.ini"), "bench"}), pfm::cli::kUsage);
}

TEST_F(CliTest, DataErrors) {
    write("schema.json", kSchema);
    write("ragged.csv", "1,2,3,4,normal\n1,2,3,normal\n");
    EXPECT_EQ(run({"cv", "--schema", path("schema.json"), "--train", path("ragged.csv"), "--out", path("o")}),
              pfm::cli::kData);
    EXPECT_EQ(run({"cv", "--schema", path("schema.json"), "--train", path("missing.csv"), "--out", path("o")}),
              pfm::cli::kData);
}

TEST_F(CliTest, EvalMatchesIndependentOracle) {
    const auto train_text = numeric_csv(150, 1);
    const auto test_text = numeric_csv(50, 2);
    write("train.csv", train_text);
    write("test.csv", test_text);
    write("schema.json", kSchema);
    ASSERT_EQ(run({"eval", "--schema", path("schema.json"), "--train", path("train.csv"), "--test",
                   path("test.csv"), "--k-neighbors", "5", "--features", "1,2", "--out", path("o")}),
              0);

    // Min-max with training bounds, clip, then brute-force KNN.
    auto train = parse_numeric(train_text);
    auto test = parse_numeric(test_text);
    for (std::size_t c = 0; c < 4; ++c) {
        double lo = train.x.at(0, c), hi = lo;
        for (std::size_t r = 0; r < train.x.rows; ++r) {
            lo = std::min(lo, train.x.at(r, c));
            hi = std::max(hi, train.x.at(r, c));
        }
        for (auto* m : {&train.x, &test.x}) {
            for (std::size_t r = 0; r < m->rows; ++r) m->at(r, c) = std::clamp((m->at(r, c) - lo) / (hi - lo), 0.0, 1.0);
        }
    }
    const auto results = nlohmann::json::parse(slurp("o/results.json"));
    ASSERT_EQ(results.size(), 2u);
    const std::vector<std::vector<std::uint8_t>> masks{{1, 1, 1, 1}, {1, 1, 0, 0}};
    for (std::size_t i = 0; i < 2; ++i) {
        const auto predicted = pfm::oracle::knn(train.x, train.y, test.x, 5, masks[i]);
        std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;
        for (std::size_t r = 0; r < predicted.size(); ++r) {
            if (test.y[r]) (predicted[r] ? tp : fn) += 1;
            else (predicted[r] ? fp : tn) += 1;
        }
        EXPECT_EQ(results[i]["tp"], tp);
        EXPECT_EQ(results[i]["tn"], tn);
        EXPECT_EQ(results[i]["fp"], fp);
        EXPECT_EQ(results[i]["fn"], fn);
        EXPECT_NEAR(std::stod(results[i]["detection_rate_pct"].get<std::string>()) +
                        std::stod(results[i]["fnr_pct"].get<std::string>()),
                    100.0, 1e-9);
    }
    EXPECT_EQ(results[0]["subset"], "all");
    EXPECT_EQ(results[1]["subset"], "selected");
}

TEST_F(CliTest, FeaturesAllEqualsOmitted) {
    write("train.csv", numeric_csv(120, 3));
    write("test.csv", numeric_csv(40, 4));
    write("schema.json", kSchema);
    const std::vector<std::string> base{"eval", "--schema", path("schema.json"), "--train", path("train.csv"),
                                        "--test", path("test.csv")};
    auto with_all = base, without = base;
    with_all.insert(with_all.end(), {"--features", "all", "--out", path("a")});
    without.insert(without.end(), {"--out", path("b")});
    ASSERT_EQ(run(with_all), 0);
    ASSERT_EQ(run(without), 0);
    EXPECT_EQ(slurp("a/results.csv"), slurp("b/results.csv"));
}

TEST_F(CliTest, SelectAndCvProduceReports) {
    write("train.csv", numeric_csv(160, 5));
    write("schema.json", kSchema);
    const std::vector<std::string> select{"select", "--schema", path("schema.json"), "--train",
                                          path("train.csv"), "--population", "8", "--iterations", "5",
                                          "--out", path("s")};
    ASSERT_EQ(run(select), 0);
    const auto report = slurp("s/results.csv");
    EXPECT_EQ(report.rfind("subset_id,cardinality,features,fitness\nFSs1,", 0), 0u) << report;
    const auto manifest = nlohmann::json::parse(slurp("s/manifest.json"));
    EXPECT_TRUE(manifest["data"]["train"].contains("hash"));

    ASSERT_EQ(run({"cv", "--schema", path("schema.json"), "--train", path("train.csv"), "--folds", "4",
                   "--features", "1,2", "--out", path("c")}),
              0);
    const auto pooled = nlohmann::json::parse(slurp("c/results.json"))["pooled"];
    EXPECT_EQ(pooled["tp"].get<int>() + pooled["tn"].get<int>() + pooled["fp"].get<int>() +
                  pooled["fn"].get<int>(),
              160);
    const auto folds = slurp("c/folds.csv");
    EXPECT_EQ(std::count(folds.begin(), folds.end(), '\n'), 5);
}

TEST_F(CliTest, NslKddFixtureRunsEndToEnd) {
    const std::string fixture = std::string(PFM_FIXTURES) + "/nsl_kdd_50.csv";
    ASSERT_EQ(run({"cv", "--schema", "nsl-kdd", "--train", fixture, "--folds", "5", "--k-neighbors", "3",
                   "--out", path("cv")}),
              0);
    ASSERT_EQ(run({"eval", "--schema", "nsl-kdd", "--train", fixture, "--test", fixture, "--k-neighbors",
                   "1", "--out", path("ev")}),
              0);
    const auto results = nlohmann::json::parse(slurp("ev/results.json"));
    EXPECT_EQ(results[0]["accuracy_pct"], "100.000");
}
