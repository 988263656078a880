#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "lmnet/common.hpp"

namespace lmnet {

struct ConfusionTable {
    std::int64_t tp = 0;
    std::int64_t fn = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    double threshold = 0.5;

    std::int64_t total() const { return tp + fn + fp + tn; }
};

// Predicted positive iff output >= threshold.
ConfusionTable confusion(const Eigen::Ref<const Eigen::VectorXd>& outputs,
                         const Eigen::Ref<const Eigen::VectorXd>& targets, double threshold);

double accuracy_percent(const ConfusionTable& c);

struct RocPoint {
    double fpr;
    double tpr;
    double threshold;
};

enum class ThresholdRule : std::uint8_t { DistanceToCorner, YoudenJ };

struct RocCurve {
    std::vector<RocPoint> points;  // descending threshold, (0,0) .. (1,1)
    double auc = 0;
    double optimal_threshold = 0;
};

// Threshold sweep over the sorted unique outputs plus sentinels; AUC by the
// trapezoidal rule. The optimal threshold minimizes distance to the (0,1)
// corner (or maximizes tpr - fpr under YoudenJ); ties go to the higher
// threshold.
RocCurve roc(const Eigen::Ref<const Eigen::VectorXd>& outputs,
             const Eigen::Ref<const Eigen::VectorXd>& targets,
             ThresholdRule rule = ThresholdRule::DistanceToCorner);

double optimal_threshold(const std::vector<RocPoint>& points, ThresholdRule rule);

struct GainLiftCurves {
    // (instance ratio, fraction of the class found), full resolution
    std::vector<std::pair<double, double>> positive_gain;
    std::vector<std::pair<double, double>> negative_gain;
    std::vector<std::pair<double, double>> lift;  // (instance ratio, lift)
    double max_gain_score = 0;
    double max_gain_ratio = 0;
};

// Instances ranked by descending output, stable on ties. The maximum gain
// score is the largest positive-minus-negative gain gap (first ratio on ties).
GainLiftCurves gain_lift(const Eigen::Ref<const Eigen::VectorXd>& outputs,
                         const Eigen::Ref<const Eigen::VectorXd>& targets);

// Step-function resampling onto at most max_points evenly spaced ratios.
std::vector<std::pair<double, double>> downsample_curve(const std::vector<std::pair<double, double>>& curve,
                                                        std::size_t max_points = 100);

}  // namespace lmnet
