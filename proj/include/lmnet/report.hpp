#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lmnet/dataset.hpp"
#include "lmnet/evaluation.hpp"
#include "lmnet/loss.hpp"
#include "lmnet/order_selection.hpp"
#include "lmnet/trainer.hpp"

namespace lmnet {

struct PartitionSummary {
    struct Entry {
        std::string subset;
        std::int64_t n = 0;                // usable rows currently in the subset
        std::int64_t n_positive = 0;
        std::int64_t n_negative = 0;
        std::int64_t n_missing_dropped = 0;  // rows assigned here but dropped for missing cells
    };
    std::vector<Entry> entries;  // training, selection, testing
    std::int64_t total_rows = 0;
    std::int64_t total_dropped = 0;
};

PartitionSummary partition_summary(const EncodedDataset& ds);
nlohmann::ordered_json partition_to_json(const PartitionSummary& p);
std::string partition_to_text(const PartitionSummary& p);

struct MetricsReport {
    std::optional<ErrorReport> training;
    std::optional<ErrorReport> selection;
    std::optional<ErrorReport> testing;
    ConfusionTable confusion;   // on the evaluated subset
    double accuracy_percent = 0;
    RocCurve roc;
    GainLiftCurves gain_lift;
    Subset evaluated = Subset::Testing;
};

MetricsReport compute_metrics(const EncodedDataset& ds, const Network& net, const ClassWeights& weights,
                              Subset evaluated, double threshold, ThresholdRule rule,
                              double minkowski_exponent);

nlohmann::ordered_json metrics_to_json(const MetricsReport& m);

// The full experiment report with the stable top-level key set
// {partition, class_weights, order_selection, training, errors, confusion,
//  roc, gain, lift}. Contains nothing run-dependent beyond the seed-driven
// numbers, so a fixed seed reproduces it byte for byte.
nlohmann::ordered_json report_to_json(const PartitionSummary& partition, const ClassWeights& weights,
                                      const OrderSelectionResult& selection, const TrainingSummary& training,
                                      const MetricsReport& metrics);
std::string report_to_text(const PartitionSummary& partition, const ClassWeights& weights,
                           const OrderSelectionResult& selection, const TrainingSummary& training,
                           const MetricsReport& metrics);

void write_text_file(const std::filesystem::path& path, const std::string& content);

void write_roc_csv(const std::filesystem::path& path, const RocCurve& curve);
void write_gain_csv(const std::filesystem::path& path, const GainLiftCurves& curves);
void write_lift_csv(const std::filesystem::path& path, const GainLiftCurves& curves);
void write_order_history_csv(const std::filesystem::path& path, const OrderSelectionResult& result);
void write_train_log_csv(const std::filesystem::path& path, const TrainingLog& log);

void write_roc_svg(const std::filesystem::path& path, const RocCurve& curve);
void write_gain_svg(const std::filesystem::path& path, const GainLiftCurves& curves);
void write_lift_svg(const std::filesystem::path& path, const GainLiftCurves& curves);

}  // namespace lmnet
