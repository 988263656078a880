#include "lmnet/model_io.hpp"

#include <fstream>

#include "json.hpp"

namespace lmnet {

namespace {

using nlohmann::ordered_json;

std::string fstr(double v) { return format_double(v); }

double dparse(const ordered_json& j, const std::string& context) {
    if (!j.is_string()) throw DataError("model file: expected a decimal string for " + context);
    return parse_double(j.get<std::string>());
}

}  // namespace

void save_model(const ModelBundle& bundle, const std::filesystem::path& path) {
    ordered_json doc;
    doc["format_version"] = bundle.format_version;

    ordered_json schema;
    schema["missing_token"] = bundle.schema.missing_token;
    schema["columns"] = ordered_json::array();
    for (const auto& c : bundle.schema.columns) {
        schema["columns"].push_back({{"name", c.name}, {"kind", column_kind_name(c.kind)}});
    }
    doc["schema"] = std::move(schema);

    doc["encoding"] = ordered_json::array();
    ordered_json scaling = ordered_json::object();
    for (const auto& col : bundle.encoding.columns) {
        ordered_json e;
        e["name"] = col.name;
        e["kind"] = column_kind_name(col.kind);
        e["excluded"] = col.excluded;
        if (col.kind == ColumnKind::Categorical) e["categories"] = col.categories;
        doc["encoding"].push_back(std::move(e));
        if (col.kind == ColumnKind::Numeric && !col.excluded) {
            scaling[col.name] = {{"mean", fstr(col.mean)}, {"std_dev", fstr(col.std_dev)}};
        }
    }
    doc["scaling"] = std::move(scaling);

    doc["architecture"] = {{"n_inputs", bundle.arch.n_inputs}, {"order", bundle.arch.order}};
    ordered_json weights = ordered_json::array();
    for (Eigen::Index i = 0; i < bundle.w.size(); ++i) weights.push_back(fstr(bundle.w(i)));
    doc["weights"] = std::move(weights);

    doc["class_weights"] = {{"positive", fstr(bundle.class_weights.positive)},
                            {"negative", fstr(bundle.class_weights.negative)}};
    doc["training_summary"] = {{"final_loss", fstr(bundle.training_summary.final_loss)},
                               {"stopping_reason", bundle.training_summary.stopping_reason},
                               {"optimal_order", bundle.training_summary.optimal_order}};

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << doc.dump(2) << '\n';
    if (!out) throw DataError("write failed for '" + path.string() + "'");
}

ModelBundle load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read '" + path.string() + "'");

    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw DataError("'" + path.string() + "': invalid JSON: " + e.what());
    }

    ModelBundle b;
    if (!doc.contains("format_version") || !doc["format_version"].is_number_integer()) {
        throw DataError("'" + path.string() + "': missing format_version");
    }
    b.format_version = doc["format_version"].get<int>();
    if (b.format_version != 1) {
        throw DataError("'" + path.string() + "': unsupported format_version " +
                        std::to_string(b.format_version));
    }

    try {
        b.schema.missing_token = doc.at("schema").at("missing_token").get<std::string>();
        for (const auto& c : doc.at("schema").at("columns")) {
            b.schema.columns.push_back(
                {c.at("name").get<std::string>(), column_kind_from_name(c.at("kind").get<std::string>())});
        }
        b.schema.validate();

        const auto& scaling = doc.at("scaling");
        for (const auto& e : doc.at("encoding")) {
            ColumnEncoding col;
            col.name = e.at("name").get<std::string>();
            col.kind = column_kind_from_name(e.at("kind").get<std::string>());
            col.excluded = e.at("excluded").get<bool>();
            if (col.kind == ColumnKind::Categorical) {
                col.categories = e.at("categories").get<std::vector<std::string>>();
            }
            if (col.kind == ColumnKind::Numeric && !col.excluded) {
                col.mean = dparse(scaling.at(col.name).at("mean"), "scaling mean");
                col.std_dev = dparse(scaling.at(col.name).at("std_dev"), "scaling std_dev");
            }
            b.encoding.columns.push_back(std::move(col));
        }

        b.arch.n_inputs = doc.at("architecture").at("n_inputs").get<Eigen::Index>();
        b.arch.order = doc.at("architecture").at("order").get<Eigen::Index>();

        const auto& weights = doc.at("weights");
        b.w.resize(static_cast<Eigen::Index>(weights.size()));
        for (std::size_t i = 0; i < weights.size(); ++i) {
            b.w(static_cast<Eigen::Index>(i)) = dparse(weights[i], "weight");
        }

        b.class_weights.positive = dparse(doc.at("class_weights").at("positive"), "class weight");
        b.class_weights.negative = dparse(doc.at("class_weights").at("negative"), "class weight");

        b.training_summary.final_loss = dparse(doc.at("training_summary").at("final_loss"), "final_loss");
        b.training_summary.stopping_reason = doc.at("training_summary").at("stopping_reason").get<std::string>();
        b.training_summary.optimal_order = doc.at("training_summary").at("optimal_order").get<std::int64_t>();
    } catch (const ordered_json::exception& e) {
        throw DataError("'" + path.string() + "': malformed model file: " + e.what());
    }

    if (!b.arch.valid()) throw DataError("'" + path.string() + "': invalid architecture");
    if (b.w.size() != b.arch.n_params()) {
        throw DataError("'" + path.string() + "': weight vector length " + std::to_string(b.w.size()) +
                        " does not match architecture (" + std::to_string(b.arch.n_params()) + " expected)");
    }

    finalize_feature_layout(b.encoding);
    if (b.encoding.n_features != b.arch.n_inputs) {
        throw DataError("'" + path.string() + "': encoding produces " + std::to_string(b.encoding.n_features) +
                        " features but the architecture expects " + std::to_string(b.arch.n_inputs));
    }
    return b;
}

Scored score_record(const ModelBundle& bundle, std::span<const std::optional<std::string>> raw_row,
                    double threshold) {
    const std::size_t full_arity = bundle.schema.columns.size();
    std::vector<std::optional<std::string>> row;
    if (raw_row.size() == full_arity) {
        row.assign(raw_row.begin(), raw_row.end());
    } else if (raw_row.size() + 1 == full_arity) {
        // Target column omitted.
        row.reserve(full_arity);
        const auto target_idx = static_cast<std::size_t>(bundle.schema.target_index());
        for (std::size_t j = 0, k = 0; j < full_arity; ++j) {
            if (j == target_idx) {
                row.emplace_back(std::nullopt);
            } else {
                row.push_back(raw_row[k++]);
            }
        }
    } else {
        throw DataError("score: expected " + std::to_string(full_arity) + " cells, got " +
                        std::to_string(raw_row.size()));
    }

    const Eigen::VectorXd x = encode_row(bundle.encoding, row);
    const double probability = forward(bundle.network(), x).first;
    return {probability, probability >= threshold};
}

}  // namespace lmnet
