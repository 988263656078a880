#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "lmnet/common.hpp"

namespace lmnet {

struct Architecture {
    Eigen::Index n_inputs = 0;
    Eigen::Index order = 0;  // hidden neurons; the single output is implicit

    Eigen::Index n_params() const { return order * (n_inputs + 1) + order + 1; }
    bool valid() const { return n_inputs >= 1 && order >= 1; }
};

// Single hidden layer, tanh hidden activations, logistic output.
// Parameters live in one flat vector: per hidden neuron its input weights
// followed by its bias, then the output weights followed by the output bias.
struct Network {
    Architecture arch;
    Eigen::VectorXd w;

    using HiddenMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

    // order x (n_inputs + 1); each row is [weights..., bias]
    HiddenMap hidden_layer() const { return HiddenMap(w.data(), arch.order, arch.n_inputs + 1); }
    Eigen::Map<const Eigen::VectorXd> output_weights() const {
        return {w.data() + arch.order * (arch.n_inputs + 1), arch.order};
    }
    double output_bias() const { return w(w.size() - 1); }
};

struct ForwardCache {
    Eigen::VectorXd hidden_pre;
    Eigen::VectorXd hidden_act;
    double output_pre = 0.0;
    double output = 0.0;
};

// Numerically stable logistic, clamped away from {0,1} so downstream
// logs and probabilities stay finite.
double logistic(double z);

Network init_network(const Architecture& arch, std::uint64_t seed);

std::pair<double, ForwardCache> forward(const Network& net, const Eigen::Ref<const Eigen::VectorXd>& x);

// Outputs for every row of X in one pass.
Eigen::VectorXd batch_outputs(const Network& net, const Eigen::Ref<const Eigen::MatrixXd>& X);

struct Residuals {
    Eigen::VectorXd e;        // e_i = s_i * (output_i - y_i), s_i = sqrt(w_i / sum w)
    Eigen::MatrixXd jacobian; // n_instances x n_params, d e_i / d w_j
};

// Residual vector and its analytic Jacobian; sum(e^2) is the weighted
// squared error, so a sum-of-squares minimizer drives that loss directly.
Residuals residual_jacobian(const Network& net,
                            const Eigen::Ref<const Eigen::MatrixXd>& X,
                            const Eigen::Ref<const Eigen::VectorXd>& y,
                            const Eigen::Ref<const Eigen::VectorXd>& instance_weights);

}  // namespace lmnet
