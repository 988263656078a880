#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "lmnet/network.hpp"
#include "support/oracles.hpp"

using namespace lmnet;

namespace {

Eigen::MatrixXd random_matrix(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols, double scale) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = scale * (2.0 * rng::uniform01(gen) - 1.0);
    }
    return m;
}

}  // namespace

TEST_CASE("parameter vector length follows the layout formula") {
    CHECK(Architecture{20, 1}.n_params() == 23);
    CHECK(Architecture{2, 3}.n_params() == 13);
    CHECK(init_network({20, 1}, 7).w.size() == 23);
    CHECK(init_network({2, 3}, 7).w.size() == 13);
}

TEST_CASE("init is deterministic and bounded by the layer limits") {
    const Network a = init_network({5, 3}, 123);
    const Network b = init_network({5, 3}, 123);
    CHECK(a.w == b.w);
    CHECK(init_network({5, 3}, 124).w != a.w);

    const double hidden_limit = std::sqrt(6.0 / (5 + 3));
    const double output_limit = std::sqrt(6.0 / (3 + 1));
    for (Eigen::Index i = 0; i < a.w.size(); ++i) {
        CHECK(std::abs(a.w(i)) <= (i < 3 * 6 ? hidden_limit : output_limit));
    }
}

TEST_CASE("forward closed forms") {
    Network net{{3, 2}, Eigen::VectorXd::Zero(Architecture{3, 2}.n_params())};
    const Eigen::Vector3d x(0.3, -1.0, 2.0);
    CHECK(forward(net, x).first == doctest::Approx(0.5).epsilon(1e-15));

    // Order 1, zero hidden weights, output bias ln 3: logistic(ln 3) = 0.75.
    Network biased{{3, 1}, Eigen::VectorXd::Zero(Architecture{3, 1}.n_params())};
    biased.w(biased.w.size() - 1) = std::log(3.0);
    CHECK(forward(biased, x).first == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("forward is pure and saturation stays finite and inside (0,1)") {
    Network net = init_network({2, 2}, 5);
    net.w *= 50.0;  // force saturated activations
    const Eigen::Vector2d x(30.0, -40.0);

    const auto [o1, c1] = forward(net, x);
    const auto [o2, c2] = forward(net, x);
    CHECK(o1 == o2);
    CHECK(c1.hidden_pre == c2.hidden_pre);

    CHECK(std::isfinite(o1));
    CHECK(o1 > 0.0);
    CHECK(o1 < 1.0);
    CHECK(c1.hidden_act.allFinite());
    CHECK(std::isfinite(c1.output_pre));
}

TEST_CASE("forward rejects dimension mismatch") {
    const Network net = init_network({3, 1}, 1);
    CHECK_THROWS_AS(forward(net, Eigen::Vector2d(1.0, 2.0)), std::invalid_argument);
}

TEST_CASE("batch outputs match per-instance forward") {
    std::mt19937_64 gen(11);
    const Network net = init_network({4, 3}, 9);
    const Eigen::MatrixXd X = random_matrix(gen, 6, 4, 2.0);
    const Eigen::VectorXd batch = batch_outputs(net, X);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        CHECK(batch(i) == forward(net, X.row(i).transpose()).first);
    }
}

TEST_CASE("analytic Jacobian matches central finite differences") {
    std::mt19937_64 gen(42);
    for (int trial = 0; trial < 5; ++trial) {
        const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng::below(gen, 5));
        const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng::below(gen, 3));
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng::below(gen, 10));

        const Network net = init_network({d, m}, gen());
        const Eigen::MatrixXd X = random_matrix(gen, n, d, 2.0);
        Eigen::VectorXd y(n);
        for (Eigen::Index i = 0; i < n; ++i) y(i) = rng::below(gen, 2) ? 1.0 : 0.0;
        const Eigen::VectorXd w1 = Eigen::VectorXd::Ones(n);

        const Residuals r = residual_jacobian(net, X, y, w1);
        const Eigen::MatrixXd fd = oracles::finite_difference_jacobian(net, X, y, w1);
        CHECK((r.jacobian - fd).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("unit-weight residual norm equals the mean squared error") {
    std::mt19937_64 gen(7);
    const Network net = init_network({3, 2}, 21);
    const Eigen::MatrixXd X = random_matrix(gen, 9, 3, 1.5);
    Eigen::VectorXd y(9);
    for (Eigen::Index i = 0; i < 9; ++i) y(i) = rng::below(gen, 2) ? 1.0 : 0.0;

    const Residuals r = residual_jacobian(net, X, y, Eigen::VectorXd::Ones(9));
    const Eigen::VectorXd out = batch_outputs(net, X);
    const double mse = (out - y).squaredNorm() / 9.0;
    CHECK(r.e.squaredNorm() == doctest::Approx(mse).epsilon(1e-12));
}

TEST_CASE("zero residuals when targets equal current outputs") {
    std::mt19937_64 gen(3);
    const Network net = init_network({2, 2}, 17);
    const Eigen::MatrixXd X = random_matrix(gen, 5, 2, 1.0);
    const Eigen::VectorXd y = batch_outputs(net, X);
    const Residuals r = residual_jacobian(net, X, y, Eigen::VectorXd::Ones(5));
    CHECK(r.e.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("residual_jacobian validates input") {
    const Network net = init_network({2, 1}, 1);
    Eigen::MatrixXd X(2, 2);
    X << 1.0, 2.0, 3.0, 4.0;
    const Eigen::VectorXd y = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_AS(residual_jacobian(net, X, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Ones(2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(residual_jacobian(net, X, y, Eigen::VectorXd::Zero(2)), std::invalid_argument);
    X(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(residual_jacobian(net, X, y, Eigen::VectorXd::Ones(2)), std::invalid_argument);
}
