#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "lmnet/loss.hpp"
#include "lmnet/network.hpp"

using namespace lmnet;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double e : v) x(i++) = e;
    return x;
}

}  // namespace

TEST_CASE("class weights are the negative/positive ratio") {
    CHECK(class_weights(vec({0, 0, 0, 1})).positive == doctest::Approx(3.0));
    CHECK(class_weights(vec({0, 0, 0, 1})).negative == 1.0);
    CHECK(class_weights(vec({0, 1, 0, 1})).positive == doctest::Approx(1.0));
    CHECK_THROWS_AS(class_weights(vec({1, 1, 1})), DataError);
    CHECK_THROWS_AS(class_weights(vec({0, 0})), DataError);
}

TEST_CASE("perfect fit drives every measure to zero") {
    const auto outputs = vec({0, 1, 1, 0});
    const ErrorReport r = error_report(outputs, outputs, {2.0, 1.0});
    CHECK(r.sse == 0.0);
    CHECK(r.mse == 0.0);
    CHECK(r.rmse == 0.0);
    CHECK(r.nse == 0.0);
    CHECK(r.minkowski == 0.0);
    CHECK(r.weighted_squared == 0.0);
    CHECK(r.cross_entropy >= 0.0);
    CHECK(r.cross_entropy < 1e-11);  // the 1e-12 clamp keeps it marginally above 0
}

TEST_CASE("closed-form values for outputs 0.5 on one of each class") {
    const ErrorReport r = error_report(vec({0.5, 0.5}), vec({0, 1}), {1.0, 1.0});
    CHECK(r.mse == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(r.cross_entropy == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(r.minkowski == doctest::Approx(std::pow(0.5, 1.5)).epsilon(1e-12));
}

TEST_CASE("predicting the target mean gives nse exactly 1") {
    const auto targets = vec({0, 0, 1, 1, 1});
    const Eigen::VectorXd outputs = Eigen::VectorXd::Constant(5, targets.mean());
    CHECK(error_report(outputs, targets, {1.0, 1.0}).nse == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constant targets are rejected") {
    CHECK_THROWS_AS(error_report(vec({0.2, 0.8}), vec({1, 1}), {1.0, 1.0}), DataError);
}

TEST_CASE("length mismatch is rejected") {
    CHECK_THROWS_AS(error_report(vec({0.2}), vec({1, 0}), {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("rmse squared equals mse, balanced weights reduce to mse") {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng::below(gen, 30));
        Eigen::VectorXd outputs(n), targets(n);
        targets(0) = 0.0;
        targets(1) = 1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            outputs(i) = rng::uniform01(gen);
            if (i >= 2) targets(i) = rng::below(gen, 2) ? 1.0 : 0.0;
        }
        const ErrorReport r = error_report(outputs, targets, {3.3, 1.0});
        CHECK(r.rmse * r.rmse == doctest::Approx(r.mse).epsilon(1e-12));
        const ErrorReport balanced = error_report(outputs, targets, {1.0, 1.0});
        CHECK(balanced.weighted_squared == doctest::Approx(balanced.mse).epsilon(1e-12));
    }
}

TEST_CASE("measures are permutation invariant") {
    const auto outputs = vec({0.1, 0.7, 0.4, 0.9, 0.2});
    const auto targets = vec({0, 1, 0, 1, 1});
    const auto outputs_p = vec({0.9, 0.2, 0.1, 0.4, 0.7});
    const auto targets_p = vec({1, 1, 0, 0, 1});
    const ErrorReport a = error_report(outputs, targets, {2.0, 1.0});
    const ErrorReport b = error_report(outputs_p, targets_p, {2.0, 1.0});
    CHECK(a.sse == doctest::Approx(b.sse).epsilon(1e-14));
    CHECK(a.nse == doctest::Approx(b.nse).epsilon(1e-14));
    CHECK(a.cross_entropy == doctest::Approx(b.cross_entropy).epsilon(1e-14));
    CHECK(a.minkowski == doctest::Approx(b.minkowski).epsilon(1e-14));
    CHECK(a.weighted_squared == doctest::Approx(b.weighted_squared).epsilon(1e-14));
}

TEST_CASE("worsening one output never improves any measure") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng::below(gen, 10));
        Eigen::VectorXd outputs(n), targets(n);
        targets(0) = 0.0;
        targets(1) = 1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            outputs(i) = 0.02 + 0.96 * rng::uniform01(gen);
            if (i >= 2) targets(i) = rng::below(gen, 2) ? 1.0 : 0.0;
        }
        const ErrorReport before = error_report(outputs, targets, {2.5, 1.0});

        const Eigen::Index k = static_cast<Eigen::Index>(rng::below(gen, n));
        const double room = targets(k) > 0.5 ? outputs(k) : 1.0 - outputs(k);
        outputs(k) += (targets(k) > 0.5 ? -1.0 : 1.0) * 0.9 * room;
        const ErrorReport after = error_report(outputs, targets, {2.5, 1.0});

        CHECK(after.sse >= before.sse);
        CHECK(after.mse >= before.mse);
        CHECK(after.rmse >= before.rmse);
        CHECK(after.nse >= before.nse);
        CHECK(after.cross_entropy >= before.cross_entropy);
        CHECK(after.minkowski >= before.minkowski);
        CHECK(after.weighted_squared >= before.weighted_squared);
    }
}

TEST_CASE("weighted squared error equals the trainer's residual norm") {
    std::mt19937_64 gen(31);
    const Network net = init_network({3, 2}, 77);
    Eigen::MatrixXd X(12, 3);
    Eigen::VectorXd y(12);
    for (Eigen::Index i = 0; i < 12; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) X(i, j) = 2.0 * rng::uniform01(gen) - 1.0;
        y(i) = i % 3 == 0 ? 1.0 : 0.0;
    }
    const ClassWeights cw{2.72, 1.0};
    const Residuals r = residual_jacobian(net, X, y, instance_weights(y, cw));
    const double wse = weighted_squared_error(batch_outputs(net, X), y, cw);
    CHECK(r.e.squaredNorm() == doctest::Approx(wse).epsilon(1e-12));
}
