#include "lmnet/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lmnet {

namespace {

void check_two_classes(const Eigen::Ref<const Eigen::VectorXd>& targets) {
    const bool has_pos = (targets.array() > 0.5).any();
    const bool has_neg = (targets.array() <= 0.5).any();
    if (!has_pos || !has_neg) throw DataError("both classes must be present");
}

}  // namespace

ConfusionTable confusion(const Eigen::Ref<const Eigen::VectorXd>& outputs,
                         const Eigen::Ref<const Eigen::VectorXd>& targets, double threshold) {
    if (outputs.size() != targets.size() || outputs.size() == 0) {
        throw std::invalid_argument("confusion: need equal nonempty lengths");
    }
    ConfusionTable c;
    c.threshold = threshold;
    for (Eigen::Index i = 0; i < outputs.size(); ++i) {
        const bool predicted = outputs(i) >= threshold;
        const bool actual = targets(i) > 0.5;
        if (actual) {
            predicted ? ++c.tp : ++c.fn;
        } else {
            predicted ? ++c.fp : ++c.tn;
        }
    }
    return c;
}

double accuracy_percent(const ConfusionTable& c) {
    const std::int64_t total = c.total();
    if (total == 0) throw std::invalid_argument("accuracy: empty confusion table");
    return 100.0 * static_cast<double>(c.tp + c.tn) / static_cast<double>(total);
}

RocCurve roc(const Eigen::Ref<const Eigen::VectorXd>& outputs,
             const Eigen::Ref<const Eigen::VectorXd>& targets, ThresholdRule rule) {
    if (outputs.size() != targets.size() || outputs.size() == 0) {
        throw std::invalid_argument("roc: need equal nonempty lengths");
    }
    check_two_classes(targets);

    const Eigen::Index n = outputs.size();
    std::vector<Eigen::Index> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return outputs(a) > outputs(b); });

    double total_pos = 0, total_neg = 0;
    for (Eigen::Index i = 0; i < n; ++i) (targets(i) > 0.5 ? total_pos : total_neg) += 1.0;

    RocCurve curve;
    curve.points.push_back({0.0, 0.0, outputs(idx.front()) + 1.0});

    double cum_pos = 0, cum_neg = 0;
    Eigen::Index i = 0;
    while (i < n) {
        const double score = outputs(idx[i]);
        while (i < n && outputs(idx[i]) == score) {
            (targets(idx[i]) > 0.5 ? cum_pos : cum_neg) += 1.0;
            ++i;
        }
        curve.points.push_back({cum_neg / total_neg, cum_pos / total_pos, score});
    }
    curve.points.push_back({1.0, 1.0, outputs(idx.back()) - 1.0});

    double auc = 0.0;
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
        const auto& a = curve.points[k - 1];
        const auto& b = curve.points[k];
        auc += (b.fpr - a.fpr) * (b.tpr + a.tpr) / 2.0;
    }
    curve.auc = auc;
    curve.optimal_threshold = optimal_threshold(curve.points, rule);
    return curve;
}

double optimal_threshold(const std::vector<RocPoint>& points, ThresholdRule rule) {
    if (points.empty()) throw std::invalid_argument("optimal_threshold: empty curve");
    // Points come in descending threshold order, so keeping strict improvement
    // breaks ties toward the higher threshold.
    std::size_t best = 0;
    const auto score = [&](const RocPoint& p) {
        if (rule == ThresholdRule::YoudenJ) return -(p.tpr - p.fpr);
        return p.fpr * p.fpr + (1.0 - p.tpr) * (1.0 - p.tpr);
    };
    for (std::size_t k = 1; k < points.size(); ++k) {
        if (score(points[k]) < score(points[best])) best = k;
    }
    return points[best].threshold;
}

GainLiftCurves gain_lift(const Eigen::Ref<const Eigen::VectorXd>& outputs,
                         const Eigen::Ref<const Eigen::VectorXd>& targets) {
    if (outputs.size() != targets.size() || outputs.size() == 0) {
        throw std::invalid_argument("gain_lift: need equal nonempty lengths");
    }
    check_two_classes(targets);

    const Eigen::Index n = outputs.size();
    std::vector<Eigen::Index> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return outputs(a) > outputs(b); });

    double total_pos = 0, total_neg = 0;
    for (Eigen::Index i = 0; i < n; ++i) (targets(i) > 0.5 ? total_pos : total_neg) += 1.0;

    GainLiftCurves g;
    g.positive_gain.reserve(n + 1);
    g.negative_gain.reserve(n + 1);
    g.lift.reserve(n);
    g.positive_gain.emplace_back(0.0, 0.0);
    g.negative_gain.emplace_back(0.0, 0.0);

    double cum_pos = 0, cum_neg = 0;
    double best_gap = -1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        (targets(idx[k]) > 0.5 ? cum_pos : cum_neg) += 1.0;
        const double ratio = static_cast<double>(k + 1) / static_cast<double>(n);
        const double pos_gain = cum_pos / total_pos;
        const double neg_gain = cum_neg / total_neg;
        g.positive_gain.emplace_back(ratio, pos_gain);
        g.negative_gain.emplace_back(ratio, neg_gain);
        g.lift.emplace_back(ratio, pos_gain / ratio);
        if (pos_gain - neg_gain > best_gap) {
            best_gap = pos_gain - neg_gain;
            g.max_gain_ratio = ratio;
        }
    }
    g.max_gain_score = best_gap;
    return g;
}

std::vector<std::pair<double, double>> downsample_curve(const std::vector<std::pair<double, double>>& curve,
                                                        std::size_t max_points) {
    if (curve.size() <= max_points || curve.empty()) return curve;
    std::vector<std::pair<double, double>> out;
    out.reserve(max_points);
    // Evenly spaced ratios; the curve is a step function of the ratio, so take
    // the last point at or before each requested ratio.
    std::size_t j = 0;
    for (std::size_t k = 1; k <= max_points; ++k) {
        const double r = curve.front().first +
                         (curve.back().first - curve.front().first) * static_cast<double>(k) /
                             static_cast<double>(max_points);
        while (j + 1 < curve.size() && curve[j + 1].first <= r) ++j;
        out.emplace_back(curve[j].first, curve[j].second);
    }
    return out;
}

}  // namespace lmnet
