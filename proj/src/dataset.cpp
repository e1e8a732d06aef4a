#include "pfm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>

#include "pfm/errors.hpp"
#include "pfm/rng.hpp"

namespace pfm::data {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.emplace_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::optional<double> parse_real(std::string_view text) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) return std::nullopt;
    return value;
}

const std::vector<std::string>& nsl_kdd_names() {
    static const std::vector<std::string> names{
        "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes", "land",
        "wrong_fragment", "urgent", "hot", "num_failed_logins", "logged_in", "num_compromised",
        "root_shell", "su_attempted", "num_root", "num_file_creations", "num_shells",
        "num_access_files", "num_outbound_cmds", "is_host_login", "is_guest_login", "count",
        "srv_count", "serror_rate", "srv_serror_rate", "rerror_rate", "srv_rerror_rate",
        "same_srv_rate", "diff_srv_rate", "srv_diff_host_rate", "dst_host_count",
        "dst_host_srv_count", "dst_host_same_srv_rate", "dst_host_diff_srv_rate",
        "dst_host_same_src_port_rate", "dst_host_srv_diff_host_rate", "dst_host_serror_rate",
        "dst_host_srv_serror_rate", "dst_host_rerror_rate", "dst_host_srv_rerror_rate", "label",
        "difficulty"};
    return names;
}

template <typename T>
T take(const nlohmann::json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

RawTable parse_csv(std::istream& in, bool has_header, std::string_view source) {
    RawTable table;
    std::string line;
    std::size_t line_number = 0;
    bool header_pending = has_header;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (table.column_count == 0) table.column_count = cells.size();
        if (cells.size() != table.column_count) {
            throw DataError(fmt::format("{}:{}: expected {} columns, found {}", source, line_number,
                                        table.column_count, cells.size()));
        }
        if (header_pending) {
            table.header = std::move(cells);
            header_pending = false;
            continue;
        }
        table.rows.push_back(std::move(cells));
    }
    return table;
}

RawTable load_csv(const std::filesystem::path& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_csv(in, has_header, path.string());
}

std::size_t drop_duplicate_rows(RawTable& table) {
    std::set<std::vector<std::string>> seen;
    const auto before = table.rows.size();
    std::vector<std::vector<std::string>> kept;
    kept.reserve(before);
    for (auto& row : table.rows) {
        if (seen.insert(row).second) kept.push_back(std::move(row));
    }
    table.rows = std::move(kept);
    return before - table.rows.size();
}

int LabelRule::operator()(std::string_view value) const {
    const auto listed = [&](const std::vector<std::string>& values) {
        return std::find(values.begin(), values.end(), value) != values.end();
    };
    if (!normal_values.empty()) return listed(normal_values) ? 0 : 1;
    return listed(attack_values) ? 1 : 0;
}

std::vector<std::size_t> Schema::feature_columns() const {
    std::vector<std::size_t> columns;
    for (std::size_t c = 0; c < column_count; ++c) {
        if (c == label_column) continue;
        if (std::find(ignored_columns.begin(), ignored_columns.end(), c) != ignored_columns.end()) {
            continue;
        }
        columns.push_back(c);
    }
    return columns;
}

bool Schema::is_categorical(std::size_t column) const {
    return std::find(categorical_columns.begin(), categorical_columns.end(), column) !=
           categorical_columns.end();
}

std::string Schema::column_name(std::size_t column) const {
    if (column < column_names.size()) return column_names[column];
    return "c" + std::to_string(column + 1);
}

void Schema::validate() const {
    if (column_count < 2) throw ConfigError("schema needs at least two columns");
    if (label_column >= column_count) throw ConfigError("schema label column out of range");
    for (auto c : categorical_columns) {
        if (c >= column_count || c == label_column) {
            throw ConfigError("schema categorical column " + std::to_string(c) + " is invalid");
        }
    }
    for (auto c : ignored_columns) {
        if (c >= column_count || c == label_column) {
            throw ConfigError("schema ignored column " + std::to_string(c) + " is invalid");
        }
    }
    if (!column_names.empty() && column_names.size() != column_count) {
        throw ConfigError("schema column_names must list every column");
    }
    if (label_rule.normal_values.empty() == label_rule.attack_values.empty()) {
        throw ConfigError("schema must give exactly one of normal_labels or attack_labels");
    }
    if (feature_columns().empty()) throw ConfigError("schema leaves no feature columns");
}

nlohmann::ordered_json Schema::to_json() const {
    nlohmann::ordered_json j;
    j["columns"] = column_count;
    j["label_column"] = label_column;
    j["categorical_columns"] = categorical_columns;
    j["ignored_columns"] = ignored_columns;
    if (!label_rule.normal_values.empty()) j["normal_labels"] = label_rule.normal_values;
    if (!label_rule.attack_values.empty()) j["attack_labels"] = label_rule.attack_values;
    if (!column_names.empty()) j["column_names"] = column_names;
    j["header"] = has_header;
    j["drop_duplicates"] = drop_duplicates;
    return j;
}

Schema Schema::from_json(const nlohmann::json& j) {
    static const std::set<std::string> known{
        "columns", "label_column", "categorical_columns", "ignored_columns", "normal_labels",
        "attack_labels", "column_names", "header", "drop_duplicates"};
    if (!j.is_object()) throw ConfigError("schema must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) throw ConfigError("unknown schema key '" + key + "'");
    }
    Schema s;
    try {
        s.column_count = j.at("columns").get<std::size_t>();
        s.label_column = j.at("label_column").get<std::size_t>();
        s.categorical_columns = take(j, "categorical_columns", std::vector<std::size_t>{});
        s.ignored_columns = take(j, "ignored_columns", std::vector<std::size_t>{});
        s.label_rule.normal_values = take(j, "normal_labels", std::vector<std::string>{});
        s.label_rule.attack_values = take(j, "attack_labels", std::vector<std::string>{});
        s.column_names = take(j, "column_names", std::vector<std::string>{});
        s.has_header = take(j, "header", false);
        s.drop_duplicates = take(j, "drop_duplicates", false);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed schema: ") + e.what());
    }
    s.validate();
    return s;
}

Schema Schema::load(const std::string& path_or_name) {
    if (path_or_name == "nsl-kdd") return nsl_kdd();
    if (path_or_name == "kyoto") return kyoto();
    std::ifstream in(path_or_name);
    if (!in) throw IoError("cannot open schema " + path_or_name);
    try {
        return from_json(nlohmann::json::parse(in, nullptr, true, true));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("schema " + path_or_name + ": " + e.what());
    }
}

Schema Schema::nsl_kdd() {
    Schema s;
    s.column_count = 43;
    s.label_column = 41;
    s.categorical_columns = {1, 2, 3};
    s.ignored_columns = {42};
    s.label_rule.normal_values = {"normal"};
    s.column_names = nsl_kdd_names();
    return s;
}

Schema Schema::kyoto() {
    Schema s;
    s.column_count = 17;
    s.label_column = 16;
    s.categorical_columns = {1, 13, 14};
    s.label_rule.normal_values = {"1"};
    s.column_names = {"duration", "service", "source_bytes", "destination_bytes", "count",
                      "same_srv_rate", "serror_rate", "srv_serror_rate", "dst_host_count",
                      "dst_host_srv_count", "dst_host_same_src_port_rate", "dst_host_serror_rate",
                      "dst_host_srv_serror_rate", "flag", "protocol", "source_port_number",
                      "label"};
    return s;
}

double CategoryEncoding::lookup(std::size_t column, const std::string& value) const {
    const auto col = columns.find(column);
    if (col == columns.end()) return 0.0;
    const auto hit = col->second.find(value);
    return hit == col->second.end() ? 0.0 : hit->second;
}

CategoryEncoding fit_frequency_encoding(const RawTable& table,
                                        std::span<const std::size_t> categorical_columns) {
    CategoryEncoding encoding;
    for (auto column : categorical_columns) {
        if (column >= table.column_count) {
            throw DataError("categorical column " + std::to_string(column) + " out of range");
        }
        auto& counts = encoding.columns[column];
        for (const auto& row : table.rows) counts[row[column]] += 1.0;
    }
    return encoding;
}

Matrix encode_columns(const RawTable& table, std::span<const std::size_t> columns,
                      const CategoryEncoding& encoding) {
    Matrix out(table.rows.size(), columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        const auto column = columns[j];
        if (column >= table.column_count) {
            throw DataError("column " + std::to_string(column) + " out of range");
        }
        const bool categorical = encoding.columns.contains(column);
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const auto& cell = table.rows[r][column];
            if (categorical) {
                out.at(r, j) = encoding.lookup(column, cell);
                continue;
            }
            const auto value = parse_real(cell);
            if (!value || !std::isfinite(*value)) {
                throw DataError(fmt::format("row {}, column {}: '{}' is not a finite number", r + 1,
                                            column + 1, cell));
            }
            out.at(r, j) = *value;
        }
    }
    return out;
}

std::pair<Matrix, CategoryEncoding> frequency_encode(const RawTable& table,
                                                     std::span<const std::size_t> columns,
                                                     std::span<const std::size_t> categorical_columns) {
    CategoryEncoding encoding = fit_frequency_encoding(table, categorical_columns);
    Matrix values = encode_columns(table, columns, encoding);
    return {std::move(values), std::move(encoding)};
}

std::pair<Matrix, std::vector<ColumnBounds>> min_max_normalize(
    const Matrix& matrix, std::optional<std::span<const ColumnBounds>> bounds) {
    for (double v : matrix.values) {
        if (!std::isfinite(v)) throw DataError("min_max_normalize: non-finite cell");
    }
    std::vector<ColumnBounds> fitted;
    if (bounds) {
        if (bounds->size() != matrix.cols) {
            throw DimensionError("min_max_normalize: bounds do not match the column count");
        }
        fitted.assign(bounds->begin(), bounds->end());
    } else {
        fitted.resize(matrix.cols);
        for (std::size_t c = 0; c < matrix.cols; ++c) {
            if (matrix.rows == 0) continue;
            double lo = matrix.at(0, c), hi = lo;
            for (std::size_t r = 1; r < matrix.rows; ++r) {
                lo = std::min(lo, matrix.at(r, c));
                hi = std::max(hi, matrix.at(r, c));
            }
            fitted[c] = {lo, hi};
        }
    }
    Matrix out(matrix.rows, matrix.cols);
    for (std::size_t c = 0; c < matrix.cols; ++c) {
        const double range = fitted[c].max - fitted[c].min;
        for (std::size_t r = 0; r < matrix.rows; ++r) {
            const double scaled = range > 0.0 ? (matrix.at(r, c) - fitted[c].min) / range : 0.0;
            out.at(r, c) = std::clamp(scaled, 0.0, 1.0);
        }
    }
    return {std::move(out), std::move(fitted)};
}

std::size_t Dataset::count_label(std::uint8_t label) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
    Dataset out;
    out.features = Matrix(rows.size(), features.cols);
    out.labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto src = features.row(rows[i]);
        std::copy(src.begin(), src.end(), out.features.row(i).begin());
        out.labels.push_back(labels[rows[i]]);
    }
    out.feature_names = feature_names;
    out.encoding = encoding;
    out.bounds = bounds;
    out.provenance = provenance;
    return out;
}

Preprocessor Preprocessor::fit(const RawTable& train, const Schema& schema) {
    schema.validate();
    if (train.column_count != schema.column_count) {
        throw DataError(fmt::format("table has {} columns but the schema declares {}",
                                    train.column_count, schema.column_count));
    }
    if (train.rows.empty()) throw DataError("training table is empty");
    Preprocessor p;
    p.schema_ = schema;
    const auto columns = schema.feature_columns();
    std::vector<std::size_t> categorical;
    for (auto c : columns) {
        if (schema.is_categorical(c)) categorical.push_back(c);
    }
    auto [encoded, encoding] = frequency_encode(train, columns, categorical);
    p.encoding_ = std::move(encoding);
    p.bounds_ = min_max_normalize(encoded).second;
    p.provenance_ = fnv1a_hex(p.manifest().dump());
    return p;
}

Dataset Preprocessor::transform(const RawTable& table) const {
    if (table.column_count != schema_.column_count) {
        throw DataError(fmt::format("table has {} columns but the schema declares {}",
                                    table.column_count, schema_.column_count));
    }
    const auto columns = schema_.feature_columns();
    Dataset out;
    out.features = min_max_normalize(encode_columns(table, columns, encoding_),
                                     std::span<const ColumnBounds>(bounds_))
                       .first;
    out.labels.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        out.labels.push_back(static_cast<std::uint8_t>(schema_.label_rule(row[schema_.label_column])));
    }
    for (auto c : columns) out.feature_names.push_back(schema_.column_name(c));
    out.encoding = encoding_;
    out.bounds = bounds_;
    out.provenance = provenance_;
    return out;
}

nlohmann::ordered_json Preprocessor::manifest() const {
    nlohmann::ordered_json j;
    j["schema_hash"] = fnv1a_hex(schema_.to_json().dump());
    j["schema"] = schema_.to_json();
    const auto columns = schema_.feature_columns();
    auto features = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        nlohmann::ordered_json f;
        f["index"] = i + 1;
        f["column"] = columns[i];
        f["name"] = schema_.column_name(columns[i]);
        f["min"] = bounds_[i].min;
        f["max"] = bounds_[i].max;
        if (const auto it = encoding_.columns.find(columns[i]); it != encoding_.columns.end()) {
            f["encoding"] = it->second;
        }
        features.push_back(std::move(f));
    }
    j["features"] = std::move(features);
    return j;
}

std::string dataset_csv(const Dataset& dataset) {
    std::string out;
    for (const auto& name : dataset.feature_names) out += name + ",";
    out += "label\n";
    for (std::size_t r = 0; r < dataset.rows(); ++r) {
        for (double v : dataset.features.row(r)) out += fmt::format("{},", v);
        out += fmt::format("{}\n", dataset.labels[r]);
    }
    return out;
}

std::vector<std::size_t> FoldPlan::test_rows(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] == fold) rows.push_back(i);
    }
    return rows;
}

std::vector<std::size_t> FoldPlan::train_rows(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] != fold) rows.push_back(i);
    }
    return rows;
}

FoldPlan make_folds(std::size_t n_rows, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("cross-validation needs at least 2 folds");
    if (k > n_rows) {
        throw ConfigError(fmt::format("cannot split {} rows into {} folds", n_rows, k));
    }
    std::vector<std::size_t> order(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) order[i] = i;
    Rng rng(seed);
    shuffle(order, rng);
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignments.assign(n_rows, 0);
    for (std::size_t i = 0; i < n_rows; ++i) plan.assignments[order[i]] = i % k;
    return plan;
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", hash);
}

}  // namespace pfm::data
