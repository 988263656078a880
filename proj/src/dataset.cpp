#include "lmnet/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace lmnet {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// The documented binary token map.
std::optional<double> binary_token_value(const std::string& token) {
    const std::string t = lower(token);
    if (t == "no" || t == "0" || t == "f") return 0.0;
    if (t == "yes" || t == "1" || t == "m") return 1.0;
    return std::nullopt;
}

double parse_numeric_cell(const std::string& cell, const std::string& column) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw DataError("column '" + column + "': not a number: '" + cell + "'");
    }
    return v;
}

// One CSV record (RFC 4180 quoting); returns false at end of input.
bool next_record(const std::string& text, std::size_t& pos, std::size_t& line,
                 std::vector<std::string>& fields) {
    fields.clear();
    if (pos >= text.size()) return false;

    std::string field;
    bool quoted = false;
    while (pos < text.size()) {
        const char c = text[pos];
        if (quoted) {
            if (c == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    field += '"';
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            ++pos;
            continue;
        }
        if (c == '"') {
            quoted = true;
            ++pos;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
            ++pos;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') ++pos;
            ++pos;
            ++line;
            fields.push_back(std::move(field));
            return true;
        } else {
            field += c;
            ++pos;
        }
    }
    fields.push_back(std::move(field));
    return true;
}

}  // namespace

const char* column_kind_name(ColumnKind k) {
    switch (k) {
        case ColumnKind::BinaryScore: return "binary-score";
        case ColumnKind::Numeric: return "numeric";
        case ColumnKind::Categorical: return "categorical";
        case ColumnKind::BinaryFlag: return "binary-flag";
        case ColumnKind::Target: return "target";
    }
    return "unknown";
}

ColumnKind column_kind_from_name(const std::string& name) {
    if (name == "binary-score") return ColumnKind::BinaryScore;
    if (name == "numeric") return ColumnKind::Numeric;
    if (name == "categorical") return ColumnKind::Categorical;
    if (name == "binary-flag") return ColumnKind::BinaryFlag;
    if (name == "target") return ColumnKind::Target;
    throw DataError("unknown column kind: '" + name + "'");
}

void Schema::validate() const {
    std::set<std::string> names;
    Eigen::Index targets = 0;
    for (const auto& c : columns) {
        if (!names.insert(c.name).second) throw DataError("schema: duplicate column name '" + c.name + "'");
        if (c.kind == ColumnKind::Target) ++targets;
    }
    if (targets != 1) throw DataError("schema: exactly one target column required");
}

Eigen::Index Schema::target_index() const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].kind == ColumnKind::Target) return static_cast<Eigen::Index>(i);
    }
    throw DataError("schema: no target column");
}

Schema Schema::adult_screening() {
    Schema s;
    for (int i = 1; i <= 10; ++i) {
        s.columns.push_back({"A" + std::to_string(i) + "_Score", ColumnKind::BinaryScore});
    }
    s.columns.push_back({"age", ColumnKind::Numeric});
    s.columns.push_back({"gender", ColumnKind::Categorical});
    s.columns.push_back({"ethnicity", ColumnKind::Categorical});
    s.columns.push_back({"jundice", ColumnKind::BinaryFlag});
    s.columns.push_back({"austim", ColumnKind::BinaryFlag});
    s.columns.push_back({"country_of_res", ColumnKind::Categorical});
    s.columns.push_back({"used_app_before", ColumnKind::BinaryFlag});
    s.columns.push_back({"result", ColumnKind::Numeric});
    s.columns.push_back({"age_desc", ColumnKind::Categorical});
    s.columns.push_back({"relation", ColumnKind::Categorical});
    s.columns.push_back({"Class/ASD", ColumnKind::Target});
    return s;
}

RawTable parse_csv(const std::filesystem::path& path, const Schema& schema) {
    schema.validate();
    std::vector<std::string> names;
    names.reserve(schema.columns.size());
    for (const auto& c : schema.columns) names.push_back(c.name);
    return parse_csv_columns(path, names, schema.missing_token);
}

RawTable parse_csv_columns(const std::filesystem::path& path, const std::vector<std::string>& column_names,
                           const std::string& missing_token) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    std::size_t pos = 0, line = 1;
    std::vector<std::string> fields;
    if (!next_record(text, pos, line, fields)) throw DataError("'" + path.string() + "': empty file, header expected");

    // Order-insensitive header match: every schema column present exactly once,
    // nothing extra.
    std::vector<std::string> header(fields.size());
    std::transform(fields.begin(), fields.end(), header.begin(), trim);

    std::vector<Eigen::Index> perm(column_names.size(), -1);
    std::vector<bool> used(header.size(), false);
    std::vector<std::string> missing, unexpected;
    for (std::size_t j = 0; j < column_names.size(); ++j) {
        const auto it = std::find(header.begin(), header.end(), column_names[j]);
        if (it == header.end()) {
            missing.push_back(column_names[j]);
        } else {
            perm[j] = it - header.begin();
            used[perm[j]] = true;
        }
    }
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (!used[j]) unexpected.push_back(header[j]);
    }
    if (!missing.empty() || !unexpected.empty()) {
        std::string msg = "'" + path.string() + "': header does not match schema;";
        if (!missing.empty()) {
            msg += " missing:";
            for (const auto& m : missing) msg += " " + m;
            msg += ";";
        }
        if (!unexpected.empty()) {
            msg += " unexpected:";
            for (const auto& u : unexpected) msg += " " + u;
        }
        throw DataError(msg);
    }

    RawTable table;
    table.header = column_names;

    while (true) {
        const std::size_t record_line = line;
        if (!next_record(text, pos, line, fields)) break;
        if (fields.size() == 1 && trim(fields[0]).empty()) continue;  // blank line
        if (fields.size() != header.size()) {
            throw DataError("'" + path.string() + "' line " + std::to_string(record_line) + ": expected " +
                            std::to_string(header.size()) + " cells, got " + std::to_string(fields.size()));
        }
        std::vector<std::optional<std::string>> row(column_names.size());
        bool has_missing = false;
        for (std::size_t j = 0; j < column_names.size(); ++j) {
            std::string cell = trim(fields[perm[j]]);
            if (cell.empty() || cell == missing_token) {
                has_missing = true;
            } else {
                row[j] = std::move(cell);
            }
        }
        if (has_missing) ++table.n_missing_rows;
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::vector<Subset> split(std::int64_t n, std::uint64_t seed) {
    if (n < 3) throw DataError("split: need at least 3 instances, got " + std::to_string(n));
    const std::int64_t n_selection = n / 5;  // floor(0.2 * n), exact in integers
    const std::int64_t n_testing = n / 5;
    const std::int64_t n_training = n - n_selection - n_testing;

    std::vector<std::int64_t> order(n);
    for (std::int64_t i = 0; i < n; ++i) order[i] = i;
    std::mt19937_64 gen(seed);
    rng::shuffle(order, gen);

    std::vector<Subset> assignment(n);
    for (std::int64_t k = 0; k < n; ++k) {
        Subset s = Subset::Training;
        if (k >= n_training + n_selection) {
            s = Subset::Testing;
        } else if (k >= n_training) {
            s = Subset::Selection;
        }
        assignment[order[k]] = s;
    }
    return assignment;
}

double encode_target(const std::optional<std::string>& cell) {
    if (!cell) return std::numeric_limits<double>::quiet_NaN();
    const std::string t = lower(*cell);
    if (t == "yes" || t == "1") return 1.0;
    if (t == "no" || t == "0") return 0.0;
    throw DataError("target: unknown token '" + *cell + "'");
}

void finalize_feature_layout(EncodingMap& encoding) {
    encoding.feature_names.clear();
    for (const auto& col : encoding.columns) {
        if (col.kind == ColumnKind::Target || col.excluded) continue;
        switch (col.kind) {
            case ColumnKind::BinaryScore:
            case ColumnKind::BinaryFlag:
            case ColumnKind::Numeric:
                encoding.feature_names.push_back(col.name);
                break;
            case ColumnKind::Categorical:
                if (col.categories.size() <= 1) {
                    encoding.feature_names.push_back(col.name + "=const");
                } else if (col.categories.size() == 2) {
                    encoding.feature_names.push_back(col.name + "=" + col.categories[1]);
                } else {
                    for (const auto& cat : col.categories) {
                        encoding.feature_names.push_back(col.name + "=" + cat);
                    }
                }
                break;
            case ColumnKind::Target:
                break;
        }
    }
    encoding.n_features = static_cast<Eigen::Index>(encoding.feature_names.size());
}

Eigen::VectorXd encode_row(const EncodingMap& encoding, std::span<const std::optional<std::string>> row) {
    if (static_cast<std::size_t>(row.size()) != encoding.columns.size()) {
        throw DataError("encode_row: expected " + std::to_string(encoding.columns.size()) + " cells, got " +
                        std::to_string(row.size()));
    }
    Eigen::VectorXd x(encoding.n_features);
    Eigen::Index f = 0;
    for (std::size_t j = 0; j < encoding.columns.size(); ++j) {
        const ColumnEncoding& col = encoding.columns[j];
        if (col.kind == ColumnKind::Target || col.excluded) continue;
        const auto& cell = row[j];
        if (!cell) throw MissingValueError("column '" + col.name + "': missing value");

        switch (col.kind) {
            case ColumnKind::BinaryScore:
            case ColumnKind::BinaryFlag: {
                const auto v = binary_token_value(*cell);
                if (!v) throw DataError("column '" + col.name + "': unknown token '" + *cell + "'");
                x(f++) = *v;
                break;
            }
            case ColumnKind::Numeric: {
                const double v = parse_numeric_cell(*cell, col.name);
                x(f++) = col.std_dev == 0.0 ? 0.0 : (v - col.mean) / col.std_dev;
                break;
            }
            case ColumnKind::Categorical: {
                const auto it = std::lower_bound(col.categories.begin(), col.categories.end(), *cell);
                if (it == col.categories.end() || *it != *cell) {
                    throw DataError("column '" + col.name + "': unseen category '" + *cell + "'");
                }
                const Eigen::Index idx = it - col.categories.begin();
                if (col.categories.size() == 1) {
                    x(f++) = 0.0;  // constant column
                } else if (col.categories.size() == 2) {
                    x(f++) = static_cast<double>(idx);
                } else {
                    for (std::size_t k = 0; k < col.categories.size(); ++k) {
                        x(f++) = k == static_cast<std::size_t>(idx) ? 1.0 : 0.0;
                    }
                }
                break;
            }
            case ColumnKind::Target:
                break;
        }
    }
    return x;
}

std::int64_t EncodedDataset::count(Subset s) const {
    return std::count(subset.begin(), subset.end(), s);
}

std::int64_t EncodedDataset::dropped_from(Subset s) const {
    return std::count_if(dropped_rows.begin(), dropped_rows.end(),
                         [&](const DroppedRow& d) { return d.original == s; });
}

std::vector<Eigen::Index> EncodedDataset::rows_in(Subset s) const {
    std::vector<Eigen::Index> rows;
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (subset[i] == s) rows.push_back(static_cast<Eigen::Index>(i));
    }
    return rows;
}

EncodedDataset::SubsetData EncodedDataset::subset_data(Subset s) const {
    const auto rows = rows_in(s);
    SubsetData d;
    d.X.resize(static_cast<Eigen::Index>(rows.size()), X.cols());
    d.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        d.X.row(static_cast<Eigen::Index>(k)) = X.row(rows[k]);
        d.y(static_cast<Eigen::Index>(k)) = y(rows[k]);
    }
    return d;
}

ScalingParams EncodedDataset::scaling() const {
    ScalingParams p;
    for (const auto& col : encoding.columns) {
        if (col.kind == ColumnKind::Numeric && !col.excluded) {
            p.by_column[col.name] = {col.mean, col.std_dev};
        }
    }
    return p;
}

namespace {

std::vector<bool> complete_rows(const RawTable& raw) {
    std::vector<bool> complete(raw.rows.size(), true);
    for (std::size_t i = 0; i < raw.rows.size(); ++i) {
        for (const auto& cell : raw.rows[i]) {
            if (!cell) {
                complete[i] = false;
                break;
            }
        }
    }
    return complete;
}

}  // namespace

FittedEncoding fit_encoding(const RawTable& raw, const Schema& schema, const std::vector<Subset>& assignment,
                            const EncodeOptions& options) {
    schema.validate();
    const std::size_t n = raw.rows.size();
    if (assignment.size() != n) throw DataError("encode: assignment length does not match row count");
    for (const auto& name : options.excluded_columns) {
        const auto it = std::find_if(schema.columns.begin(), schema.columns.end(),
                                     [&](const Schema::Column& c) { return c.name == name; });
        if (it == schema.columns.end()) throw DataError("encode: cannot exclude unknown column '" + name + "'");
    }

    const std::vector<bool> complete = complete_rows(raw);

    FittedEncoding fitted;
    fitted.map.columns.reserve(schema.columns.size());
    for (std::size_t j = 0; j < schema.columns.size(); ++j) {
        const auto& sc = schema.columns[j];
        ColumnEncoding col;
        col.name = sc.name;
        col.kind = sc.kind;
        col.excluded = std::find(options.excluded_columns.begin(), options.excluded_columns.end(), sc.name) !=
                       options.excluded_columns.end();
        if (!col.excluded) {
            if (sc.kind == ColumnKind::Categorical) {
                // Category order: lexicographic over categories observed anywhere.
                std::set<std::string> seen;
                for (const auto& row : raw.rows) {
                    if (row[j]) seen.insert(*row[j]);
                }
                col.categories.assign(seen.begin(), seen.end());
                if (col.categories.size() <= 1) {
                    fitted.warnings.push_back("column '" + sc.name + "' has " +
                                              std::to_string(col.categories.size()) +
                                              " observed category; encoded as a constant feature");
                }
            } else if (sc.kind == ColumnKind::Numeric) {
                // Standardization moments come from complete training rows only.
                double sum = 0.0;
                std::int64_t cnt = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (!complete[i] || assignment[i] != Subset::Training) continue;
                    sum += parse_numeric_cell(*raw.rows[i][j], sc.name);
                    ++cnt;
                }
                if (cnt > 0) {
                    col.mean = sum / static_cast<double>(cnt);
                    double ss = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        if (!complete[i] || assignment[i] != Subset::Training) continue;
                        const double d = parse_numeric_cell(*raw.rows[i][j], sc.name) - col.mean;
                        ss += d * d;
                    }
                    col.std_dev = std::sqrt(ss / static_cast<double>(cnt));
                }
            }
        }
        fitted.map.columns.push_back(std::move(col));
    }
    finalize_feature_layout(fitted.map);
    return fitted;
}

EncodedDataset encode_with(const EncodingMap& encoding, const RawTable& raw, const Schema& schema,
                           const std::vector<Subset>& assignment) {
    schema.validate();
    const std::size_t n = raw.rows.size();
    if (assignment.size() != n) throw DataError("encode: assignment length does not match row count");
    if (encoding.columns.size() != schema.columns.size()) {
        throw DataError("encode: encoding map does not match schema");
    }

    EncodedDataset ds;
    ds.encoding = encoding;
    const Eigen::Index target_idx = schema.target_index();
    const std::vector<bool> complete = complete_rows(raw);

    ds.X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), ds.encoding.n_features);
    ds.y.resize(static_cast<Eigen::Index>(n));
    ds.subset.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = raw.rows[i];
        if (!complete[i]) {
            ds.subset[i] = Subset::Unused;
            ds.dropped_rows.push_back({static_cast<std::int64_t>(i), assignment[i]});
            try {
                ds.y(static_cast<Eigen::Index>(i)) = encode_target(row[target_idx]);
            } catch (const DataError&) {
                ds.y(static_cast<Eigen::Index>(i)) = std::numeric_limits<double>::quiet_NaN();
            }
            continue;
        }
        ds.subset[i] = assignment[i];
        try {
            ds.X.row(static_cast<Eigen::Index>(i)) = encode_row(ds.encoding, row);
            ds.y(static_cast<Eigen::Index>(i)) = encode_target(row[target_idx]);
        } catch (const DataError& e) {
            throw DataError("row " + std::to_string(i + 1) + ": " + e.what());
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        const double t = ds.y(static_cast<Eigen::Index>(i));
        if (std::isnan(t)) continue;
        auto& counts = ds.class_counts[static_cast<std::size_t>(ds.subset[i])];
        if (t > 0.5) {
            ++counts.n_positive;
        } else {
            ++counts.n_negative;
        }
    }
    return ds;
}

EncodedDataset encode(const RawTable& raw, const Schema& schema, const std::vector<Subset>& assignment,
                      const EncodeOptions& options) {
    FittedEncoding fitted = fit_encoding(raw, schema, assignment, options);
    EncodedDataset ds = encode_with(fitted.map, raw, schema, assignment);
    ds.warnings = std::move(fitted.warnings);
    return ds;
}

}  // namespace lmnet
