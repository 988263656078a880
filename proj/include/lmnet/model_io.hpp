#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "lmnet/dataset.hpp"
#include "lmnet/loss.hpp"
#include "lmnet/network.hpp"

namespace lmnet {

// Everything needed to score a raw record: the schema, the fitted encoders,
// the architecture and weights, and the class weights used in training.
struct ModelBundle {
    int format_version = 1;
    Schema schema;
    EncodingMap encoding;
    Architecture arch;
    Eigen::VectorXd w;
    ClassWeights class_weights;

    struct TrainingInfo {
        double final_loss = 0;
        std::string stopping_reason;
        std::int64_t optimal_order = 0;
    };
    TrainingInfo training_summary;

    Network network() const { return {arch, w}; }
};

// Single JSON document; floats stored as 17-significant-digit decimal strings
// so weights round-trip bit-exactly.
void save_model(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_model(const std::filesystem::path& path);

struct Scored {
    double probability;
    bool positive;
};

// Encodes one raw record through the bundle's maps and runs the forward pass.
// Rows with missing predictor cells are refused (DataError), as are unseen
// categories. The target cell, when present, is ignored.
Scored score_record(const ModelBundle& bundle, std::span<const std::optional<std::string>> raw_row,
                    double threshold = 0.5);

}  // namespace lmnet
