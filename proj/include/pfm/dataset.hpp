#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace pfm::data {

/// Dense row-major matrix of reals.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
    std::span<double> row(std::size_t r) { return {values.data() + r * cols, cols}; }

    bool operator==(const Matrix&) const = default;
};

/// Rows of string cells, all of the same width.
struct RawTable {
    std::vector<std::vector<std::string>> rows;
    std::size_t column_count = 0;
    std::vector<std::string> header;  ///< empty unless the file had one
};

/// Parses comma-separated text. Cells are trimmed of surrounding blanks and
/// blank lines are skipped. A row whose width differs from the first row
/// raises DataError naming the line.
RawTable parse_csv(std::istream& in, bool has_header = false, std::string_view source = "<stream>");
RawTable load_csv(const std::filesystem::path& path, bool has_header = false);

/// Removes exact duplicate rows, keeping the first occurrence.
std::size_t drop_duplicate_rows(RawTable& table);

/// Maps a raw label cell to 1 (attack) or 0 (normal). Exactly one of the
/// two lists is non-empty: either the listed values are normal and all
/// others are attacks, or the listed values are attacks and all others normal.
struct LabelRule {
    std::vector<std::string> normal_values;
    std::vector<std::string> attack_values;

    int operator()(std::string_view value) const;
};

/// Column layout of an input file.
struct Schema {
    std::size_t column_count = 0;
    std::size_t label_column = 0;
    std::vector<std::size_t> categorical_columns;  ///< 0-based
    std::vector<std::size_t> ignored_columns;      ///< 0-based
    LabelRule label_rule;
    std::vector<std::string> column_names;         ///< optional, one per column
    bool has_header = false;
    bool drop_duplicates = false;

    /// Every column that is neither the label nor ignored, ascending.
    std::vector<std::size_t> feature_columns() const;
    bool is_categorical(std::size_t column) const;
    std::string column_name(std::size_t column) const;

    void validate() const;
    nlohmann::ordered_json to_json() const;
    /// Rejects unknown keys.
    static Schema from_json(const nlohmann::json& j);
    /// Reads a JSON schema file (comments allowed), or one of the built-in
    /// names "nsl-kdd" and "kyoto".
    static Schema load(const std::string& path_or_name);

    /// 41 features, label, difficulty score (ignored).
    static Schema nsl_kdd();
    /// 16 conditional features and one decision column (1 = normal).
    static Schema kyoto();
};

/// Per categorical column: category value -> occurrence count in training data.
struct CategoryEncoding {
    std::map<std::size_t, std::map<std::string, double>> columns;

    /// Count for a value; values never seen in training map to 0.
    double lookup(std::size_t column, const std::string& value) const;

    bool operator==(const CategoryEncoding&) const = default;
};

CategoryEncoding fit_frequency_encoding(const RawTable& table,
                                        std::span<const std::size_t> categorical_columns);

/// Converts the given columns to reals: categorical columns through the
/// encoding, the rest by number parsing (DataError with row/column on failure).
Matrix encode_columns(const RawTable& table, std::span<const std::size_t> columns,
                      const CategoryEncoding& encoding);

/// Fits a frequency encoding on `table` and applies it to `columns`.
std::pair<Matrix, CategoryEncoding> frequency_encode(const RawTable& table,
                                                     std::span<const std::size_t> columns,
                                                     std::span<const std::size_t> categorical_columns);

struct ColumnBounds {
    double min = 0.0;
    double max = 0.0;

    bool operator==(const ColumnBounds&) const = default;
};

/// Min-max scaling to [0, 1] per column. Constant columns map to 0. With
/// precomputed bounds the values are scaled with them and clipped to [0, 1].
std::pair<Matrix, std::vector<ColumnBounds>> min_max_normalize(
    const Matrix& matrix, std::optional<std::span<const ColumnBounds>> bounds = std::nullopt);

/// Normalised features with binary labels (1 = attack).
struct Dataset {
    Matrix features;
    std::vector<std::uint8_t> labels;
    std::vector<std::string> feature_names;
    CategoryEncoding encoding;
    std::vector<ColumnBounds> bounds;
    /// Identifies the preprocessing that produced the features. Train and
    /// test sets can only be compared when these agree.
    std::string provenance;

    std::size_t rows() const { return features.rows; }
    std::size_t feature_count() const { return features.cols; }
    std::size_t count_label(std::uint8_t label) const;

    /// Copy restricted to the given rows (in the given order).
    Dataset select_rows(std::span<const std::size_t> rows) const;
};

/// Encoding and normalisation fitted on training data, reusable on test data.
class Preprocessor {
public:
    static Preprocessor fit(const RawTable& train, const Schema& schema);

    Dataset transform(const RawTable& table) const;

    const Schema& schema() const { return schema_; }
    const CategoryEncoding& encoding() const { return encoding_; }
    const std::vector<ColumnBounds>& bounds() const { return bounds_; }
    const std::string& provenance() const { return provenance_; }

    /// Schema hash, feature names, bounds and encoding maps.
    nlohmann::ordered_json manifest() const;

private:
    Schema schema_;
    CategoryEncoding encoding_;
    std::vector<ColumnBounds> bounds_;
    std::string provenance_;
};

/// Header of feature names plus "label", then one row per record.
std::string dataset_csv(const Dataset& dataset);

struct FoldPlan {
    std::size_t k = 0;
    std::vector<std::size_t> assignments;  ///< fold index per row
    std::uint64_t seed = 0;

    std::vector<std::size_t> test_rows(std::size_t fold) const;
    std::vector<std::size_t> train_rows(std::size_t fold) const;
};

/// Seeded permutation of the rows dealt round-robin into k folds.
FoldPlan make_folds(std::size_t n_rows, std::size_t k, std::uint64_t seed);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace pfm::data
