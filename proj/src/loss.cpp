#include "lmnet/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lmnet {

ClassWeights class_weights(const Eigen::Ref<const Eigen::VectorXd>& y_train) {
    Eigen::Index n_pos = 0;
    for (Eigen::Index i = 0; i < y_train.size(); ++i) {
        if (y_train(i) > 0.5) ++n_pos;
    }
    const Eigen::Index n_neg = y_train.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw DataError("class_weights: training targets contain a single class");
    }
    return {static_cast<double>(n_neg) / static_cast<double>(n_pos), 1.0};
}

Eigen::VectorXd instance_weights(const Eigen::Ref<const Eigen::VectorXd>& targets, const ClassWeights& weights) {
    return targets.unaryExpr([&](double t) { return weights.weight_for(t); });
}

double weighted_squared_error(const Eigen::Ref<const Eigen::VectorXd>& outputs,
                              const Eigen::Ref<const Eigen::VectorXd>& targets,
                              const ClassWeights& weights) {
    if (outputs.size() != targets.size() || outputs.size() == 0) {
        throw std::invalid_argument("weighted_squared_error: need equal nonempty lengths");
    }
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < outputs.size(); ++i) {
        const double w = weights.weight_for(targets(i));
        const double d = outputs(i) - targets(i);
        num += w * d * d;
        den += w;
    }
    return num / den;
}

ErrorReport error_report(const Eigen::Ref<const Eigen::VectorXd>& outputs,
                         const Eigen::Ref<const Eigen::VectorXd>& targets,
                         const ClassWeights& weights,
                         double minkowski_exponent) {
    const Eigen::Index n = outputs.size();
    if (n == 0 || targets.size() != n) {
        throw std::invalid_argument("error_report: need equal nonempty lengths");
    }

    ErrorReport r;
    const Eigen::ArrayXd diff = (outputs - targets).array();
    r.sse = diff.square().sum();
    r.mse = r.sse / static_cast<double>(n);
    r.rmse = std::sqrt(r.mse);

    const double t_mean = targets.mean();
    const double t_var_sum = (targets.array() - t_mean).square().sum();
    if (t_var_sum == 0.0) {
        throw DataError("error_report: constant targets, normalized squared error undefined");
    }
    r.nse = r.sse / t_var_sum;

    double ce = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double o = std::clamp(outputs(i), 1e-12, 1.0 - 1e-12);
        ce += targets(i) * std::log(o) + (1.0 - targets(i)) * std::log(1.0 - o);
    }
    r.cross_entropy = -ce / static_cast<double>(n);

    r.minkowski = diff.abs().pow(minkowski_exponent).sum() / static_cast<double>(n);
    r.weighted_squared = weighted_squared_error(outputs, targets, weights);
    return r;
}

}  // namespace lmnet
