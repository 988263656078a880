#include "lmnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lmnet {

namespace {

constexpr double kOutputClamp = 1e-15;

void check_arch(const Architecture& arch) {
    if (!arch.valid()) throw std::invalid_argument("architecture needs n_inputs >= 1 and order >= 1");
}

}  // namespace

double logistic(double z) {
    double p;
    if (z >= 0.0) {
        p = 1.0 / (1.0 + std::exp(-z));
    } else {
        const double ez = std::exp(z);
        p = ez / (1.0 + ez);
    }
    return std::clamp(p, kOutputClamp, 1.0 - kOutputClamp);
}

Network init_network(const Architecture& arch, std::uint64_t seed) {
    check_arch(arch);
    std::mt19937_64 gen(seed);
    Network net{arch, Eigen::VectorXd(arch.n_params())};

    // Glorot-style uniform bounds per layer.
    const double hidden_limit = std::sqrt(6.0 / static_cast<double>(arch.n_inputs + arch.order));
    const double output_limit = std::sqrt(6.0 / static_cast<double>(arch.order + 1));

    const Eigen::Index hidden_count = arch.order * (arch.n_inputs + 1);
    for (Eigen::Index i = 0; i < net.w.size(); ++i) {
        const double limit = i < hidden_count ? hidden_limit : output_limit;
        net.w(i) = limit * (2.0 * rng::uniform01(gen) - 1.0);
    }
    return net;
}

std::pair<double, ForwardCache> forward(const Network& net, const Eigen::Ref<const Eigen::VectorXd>& x) {
    check_arch(net.arch);
    if (x.size() != net.arch.n_inputs) throw std::invalid_argument("forward: input length mismatch");
    if (net.w.size() != net.arch.n_params()) throw std::invalid_argument("forward: parameter length mismatch");

    const auto hidden = net.hidden_layer();
    ForwardCache cache;
    cache.hidden_pre = hidden.leftCols(net.arch.n_inputs) * x + hidden.col(net.arch.n_inputs);
    cache.hidden_act = cache.hidden_pre.array().tanh();
    cache.output_pre = net.output_weights().dot(cache.hidden_act) + net.output_bias();
    cache.output = logistic(cache.output_pre);
    return {cache.output, std::move(cache)};
}

Eigen::VectorXd batch_outputs(const Network& net, const Eigen::Ref<const Eigen::MatrixXd>& X) {
    check_arch(net.arch);
    if (X.cols() != net.arch.n_inputs) throw std::invalid_argument("batch_outputs: feature count mismatch");

    const auto hidden = net.hidden_layer();
    Eigen::MatrixXd pre = X * hidden.leftCols(net.arch.n_inputs).transpose();
    pre.rowwise() += hidden.col(net.arch.n_inputs).transpose();
    const Eigen::MatrixXd act = pre.array().tanh();
    Eigen::VectorXd out_pre = act * net.output_weights();
    out_pre.array() += net.output_bias();
    return out_pre.unaryExpr([](double z) { return logistic(z); });
}

Residuals residual_jacobian(const Network& net,
                            const Eigen::Ref<const Eigen::MatrixXd>& X,
                            const Eigen::Ref<const Eigen::VectorXd>& y,
                            const Eigen::Ref<const Eigen::VectorXd>& instance_weights) {
    check_arch(net.arch);
    const Eigen::Index n = X.rows();
    const Eigen::Index d = net.arch.n_inputs;
    const Eigen::Index m = net.arch.order;
    if (X.cols() != d) throw std::invalid_argument("residual_jacobian: feature count mismatch");
    if (y.size() != n || instance_weights.size() != n) {
        throw std::invalid_argument("residual_jacobian: row count mismatch");
    }
    if (!X.allFinite()) throw std::invalid_argument("residual_jacobian: non-finite entries in X");
    if (n > 0 && instance_weights.minCoeff() <= 0.0) {
        throw std::invalid_argument("residual_jacobian: instance weights must be positive");
    }

    const auto hidden = net.hidden_layer();
    const auto v = net.output_weights();

    Eigen::MatrixXd pre = X * hidden.leftCols(d).transpose();
    pre.rowwise() += hidden.col(d).transpose();
    const Eigen::MatrixXd act = pre.array().tanh();  // n x m
    Eigen::VectorXd out_pre = act * v;
    out_pre.array() += net.output_bias();
    const Eigen::VectorXd out = out_pre.unaryExpr([](double z) { return logistic(z); });

    const Eigen::VectorXd s = (instance_weights / instance_weights.sum()).cwiseSqrt();

    Residuals r;
    r.e = s.array() * (out - y).array();

    // d e_i / d out_pre_i, shared by every parameter column.
    const Eigen::VectorXd t = s.array() * out.array() * (1.0 - out.array());

    r.jacobian.resize(n, net.arch.n_params());
    for (Eigen::Index h = 0; h < m; ++h) {
        const Eigen::VectorXd g = t.array() * v(h) * (1.0 - act.col(h).array().square());
        r.jacobian.block(0, h * (d + 1), n, d) = X.array().colwise() * g.array();
        r.jacobian.col(h * (d + 1) + d) = g;
    }
    r.jacobian.block(0, m * (d + 1), n, m) = act.array().colwise() * t.array();
    r.jacobian.col(net.arch.n_params() - 1) = t;
    return r;
}

}  // namespace lmnet
