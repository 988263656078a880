#pragma once

#include <Eigen/Dense>

#include "lmnet/common.hpp"

namespace lmnet {

// Per-class loss weights against target imbalance. The positive weight is the
// negative/positive count ratio on the training subset; the negative weight
// stays at 1.
struct ClassWeights {
    double positive = 1.0;
    double negative = 1.0;

    double weight_for(double target) const { return target > 0.5 ? positive : negative; }
};

ClassWeights class_weights(const Eigen::Ref<const Eigen::VectorXd>& y_train);

Eigen::VectorXd instance_weights(const Eigen::Ref<const Eigen::VectorXd>& targets, const ClassWeights& weights);

// Weighted mean squared error, sum w(t) * (o - t)^2 / sum w(t). This is the
// loss index the trainer minimizes and reports.
double weighted_squared_error(const Eigen::Ref<const Eigen::VectorXd>& outputs,
                              const Eigen::Ref<const Eigen::VectorXd>& targets,
                              const ClassWeights& weights);

struct ErrorReport {
    double sse = 0;
    double mse = 0;
    double rmse = 0;
    double nse = 0;
    double cross_entropy = 0;
    double minkowski = 0;
    double weighted_squared = 0;
};

// The full error battery for one subset. Throws DataError when the targets
// are constant (nse undefined). minkowski_exponent defaults to 1.5.
ErrorReport error_report(const Eigen::Ref<const Eigen::VectorXd>& outputs,
                         const Eigen::Ref<const Eigen::VectorXd>& targets,
                         const ClassWeights& weights,
                         double minkowski_exponent = 1.5);

}  // namespace lmnet
