#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lmnet/common.hpp"

namespace lmnet {

enum class ColumnKind : std::uint8_t { BinaryScore, Numeric, Categorical, BinaryFlag, Target };

const char* column_kind_name(ColumnKind k);
ColumnKind column_kind_from_name(const std::string& name);

struct Schema {
    struct Column {
        std::string name;
        ColumnKind kind;
    };

    std::vector<Column> columns;
    std::string missing_token = "?";

    void validate() const;  // unique names, exactly one target
    Eigen::Index target_index() const;

    // The UCI adult screening layout: ten behavioral scores, ten personal
    // attributes, one Class/ASD target.
    static Schema adult_screening();
};

struct RawTable {
    std::vector<std::string> header;  // schema column order
    std::vector<std::vector<std::optional<std::string>>> rows;
    std::int64_t n_missing_rows = 0;
};

// Reads a comma-separated file with one header line. Header names must match
// the schema as a set; cells are returned in schema column order. A cell equal
// to the missing token or empty becomes absent.
RawTable parse_csv(const std::filesystem::path& path, const Schema& schema);

// Same parse against an explicit column-name set (used for scoring files that
// omit the target column).
RawTable parse_csv_columns(const std::filesystem::path& path, const std::vector<std::string>& column_names,
                           const std::string& missing_token);

// Seeded uniform shuffle, then contiguous blocks: training first, then
// selection, then testing. Selection and testing each get floor(n/5) rows,
// the remainder goes to training.
std::vector<Subset> split(std::int64_t n, std::uint64_t seed);

// Fitted per-column encoders; enough to replay the exact encoding on a new row.
struct ColumnEncoding {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    bool excluded = false;
    std::vector<std::string> categories;  // categorical: lexicographic over the full table
    double mean = 0.0;                    // numeric only, fitted on training rows
    double std_dev = 0.0;
};

struct EncodingMap {
    std::vector<ColumnEncoding> columns;  // schema order
    Eigen::Index n_features = 0;
    std::vector<std::string> feature_names;
};

// Recomputes feature_names and n_features from the per-column encoders.
// Categorical columns yield one constant feature (single category), one 0/1
// feature (two categories), or a one-hot group (three or more).
void finalize_feature_layout(EncodingMap& encoding);

// Feature vector for one complete row (cells in schema order; the target cell,
// if present, is ignored). Throws DataError on a missing predictor cell, an
// unknown binary token, or an unseen category.
Eigen::VectorXd encode_row(const EncodingMap& encoding, std::span<const std::optional<std::string>> row);

// Target cell -> 0/1.
double encode_target(const std::optional<std::string>& cell);

struct ScalingParams {
    struct Moments {
        double mean = 0.0;
        double std_dev = 0.0;
    };
    std::map<std::string, Moments> by_column;
};

struct EncodedDataset {
    Eigen::MatrixXd X;                     // n_instances x n_features
    Eigen::VectorXd y;                     // 0/1; NaN where the target cell was absent
    std::vector<Subset> subset;            // per instance; Unused marks dropped rows
    EncodingMap encoding;

    struct ClassCounts {
        std::int64_t n_negative = 0;
        std::int64_t n_positive = 0;
    };
    std::array<ClassCounts, 4> class_counts;  // indexed by Subset

    struct DroppedRow {
        std::int64_t row;
        Subset original;
    };
    std::vector<DroppedRow> dropped_rows;   // rows with any absent cell
    std::vector<std::string> warnings;

    std::int64_t count(Subset s) const;
    std::int64_t dropped_from(Subset s) const;
    std::vector<Eigen::Index> rows_in(Subset s) const;

    struct SubsetData {
        Eigen::MatrixXd X;
        Eigen::VectorXd y;
    };
    SubsetData subset_data(Subset s) const;

    ScalingParams scaling() const;
    const std::vector<std::string>& feature_names() const { return encoding.feature_names; }
};

struct EncodeOptions {
    std::vector<std::string> excluded_columns;  // kept in the schema, omitted from features
};

struct FittedEncoding {
    EncodingMap map;
    std::vector<std::string> warnings;
};

// Fits per-column encoders: categories over the full table, standardization
// moments over complete training rows only.
FittedEncoding fit_encoding(const RawTable& raw, const Schema& schema, const std::vector<Subset>& assignment,
                            const EncodeOptions& options = {});

// Applies already-fitted encoders. Rows with any absent cell become Unused
// (original assignment recorded in dropped_rows); their feature values are
// unspecified and must not be consumed.
EncodedDataset encode_with(const EncodingMap& encoding, const RawTable& raw, const Schema& schema,
                           const std::vector<Subset>& assignment);

// fit_encoding + encode_with in one step.
EncodedDataset encode(const RawTable& raw, const Schema& schema, const std::vector<Subset>& assignment,
                      const EncodeOptions& options = {});

}  // namespace lmnet
