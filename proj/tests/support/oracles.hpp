#pragma once

// Independent oracles used by the tests. They deliberately avoid the library's
// Jacobian assembly and ROC sweep; only the forward pass is shared, since it
// defines the quantity being differentiated.

#include <Eigen/Dense>

#include "lmnet/network.hpp"

namespace oracles {

inline Eigen::VectorXd residuals_at(const lmnet::Network& net, const Eigen::MatrixXd& X,
                                    const Eigen::VectorXd& y, const Eigen::VectorXd& instance_weights) {
    const Eigen::VectorXd s = (instance_weights / instance_weights.sum()).cwiseSqrt();
    Eigen::VectorXd out(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        out(i) = lmnet::forward(net, X.row(i).transpose()).first;
    }
    return s.array() * (out - y).array();
}

// Central finite differences of the residual vector.
inline Eigen::MatrixXd finite_difference_jacobian(const lmnet::Network& net, const Eigen::MatrixXd& X,
                                                  const Eigen::VectorXd& y,
                                                  const Eigen::VectorXd& instance_weights,
                                                  double h = 1e-6) {
    Eigen::MatrixXd J(X.rows(), net.w.size());
    for (Eigen::Index j = 0; j < net.w.size(); ++j) {
        lmnet::Network plus = net;
        lmnet::Network minus = net;
        plus.w(j) += h;
        minus.w(j) -= h;
        J.col(j) = (residuals_at(plus, X, y, instance_weights) -
                    residuals_at(minus, X, y, instance_weights)) /
                   (2.0 * h);
    }
    return J;
}

// Fraction of (positive, negative) pairs ranked correctly, ties counted 1/2.
inline double pair_count_auc(const Eigen::VectorXd& outputs, const Eigen::VectorXd& targets) {
    double wins = 0.0;
    long pairs = 0;
    for (Eigen::Index i = 0; i < outputs.size(); ++i) {
        if (targets(i) <= 0.5) continue;
        for (Eigen::Index j = 0; j < outputs.size(); ++j) {
            if (targets(j) > 0.5) continue;
            ++pairs;
            if (outputs(i) > outputs(j)) {
                wins += 1.0;
            } else if (outputs(i) == outputs(j)) {
                wins += 0.5;
            }
        }
    }
    return wins / static_cast<double>(pairs);
}

}  // namespace oracles
