#include "lmnet/trainer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lmnet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void TrainingConfig::validate() const {
    if (!(damping_factor > 1.0)) throw std::invalid_argument("damping_factor must be > 1");
    if (!(initial_damping > 0.0) || !(max_damping > 0.0)) throw std::invalid_argument("damping bounds must be > 0");
    if (!(min_increment_norm > 0.0) || !(min_loss_decrease > 0.0) || !(loss_goal > 0.0) ||
        !(gradient_norm_goal > 0.0)) {
        throw std::invalid_argument("tolerances must be > 0");
    }
    if (max_selection_failures < 1) throw std::invalid_argument("max_selection_failures must be >= 1");
    if (max_iterations < 0) throw std::invalid_argument("max_iterations must be >= 0");
}

const char* to_string(StoppingReason r) {
    switch (r) {
        case StoppingReason::GradientNormGoal: return "GradientNormGoal";
        case StoppingReason::LossGoal: return "LossGoal";
        case StoppingReason::MinIncrementNorm: return "MinIncrementNorm";
        case StoppingReason::MinLossDecrease: return "MinLossDecrease";
        case StoppingReason::MaxSelectionFailures: return "MaxSelectionFailures";
        case StoppingReason::MaxIterations: return "MaxIterations";
        case StoppingReason::MaxDamping: return "MaxDamping";
    }
    return "unknown";
}

Eigen::VectorXd lm_step(const Eigen::Ref<const Eigen::VectorXd>& e,
                        const Eigen::Ref<const Eigen::MatrixXd>& J, double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("lm_step: mu must be > 0");
    if (J.rows() != e.size()) throw std::invalid_argument("lm_step: J rows must match e length");
    if (!J.allFinite() || !e.allFinite()) throw TrainingError("lm_step: non-finite input");

    const Eigen::Index p = J.cols();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, p);
    A.selfadjointView<Eigen::Lower>().rankUpdate(J.transpose());
    A.diagonal().array() += mu;

    // mu > 0 makes A positive definite, so Cholesky cannot fail on finite input.
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) throw TrainingError("lm_step: linear solve failed");
    return llt.solve(-(J.transpose() * e));
}

TrainResult train_on(Network net,
                     const Eigen::Ref<const Eigen::MatrixXd>& X_train,
                     const Eigen::Ref<const Eigen::VectorXd>& y_train,
                     const Eigen::Ref<const Eigen::MatrixXd>& X_selection,
                     const Eigen::Ref<const Eigen::VectorXd>& y_selection,
                     const ClassWeights& weights, const TrainingConfig& cfg) {
    cfg.validate();
    if (X_train.rows() == 0) throw DataError("train: empty training subset");
    if (X_train.rows() != y_train.size() || X_selection.rows() != y_selection.size()) {
        throw std::invalid_argument("train: matrix/target size mismatch");
    }

    const auto t0 = std::chrono::steady_clock::now();
    const bool has_selection = X_selection.rows() > 0;
    const Eigen::VectorXd w_train = instance_weights(y_train, weights);

    const auto training_loss_at = [&](const Network& candidate) {
        return weighted_squared_error(batch_outputs(candidate, X_train), y_train, weights);
    };
    const auto selection_loss_at = [&](const Network& candidate) {
        return weighted_squared_error(batch_outputs(candidate, X_selection), y_selection, weights);
    };

    TrainingLog log;
    double loss = training_loss_at(net);

    Eigen::VectorXd best_w = net.w;
    double best_selection = has_selection ? selection_loss_at(net) : kNaN;
    double selection_min = best_selection;
    std::int64_t selection_failures = 0;

    double mu = cfg.initial_damping;
    std::int64_t iterations = 0;

    const auto finish = [&](StoppingReason reason) {
        if (has_selection) net.w = best_w;
        TrainingSummary& f = log.final;
        f.parameters_norm = net.w.norm();
        f.final_loss = training_loss_at(net);
        f.final_selection_loss = has_selection ? selection_loss_at(net) : kNaN;
        const Residuals r = residual_jacobian(net, X_train, y_train, w_train);
        f.final_gradient_norm = 2.0 * (r.jacobian.transpose() * r.e).norm();
        f.iterations = iterations;
        f.elapsed_seconds = seconds_since(t0);
        f.stopping_reason = reason;
        return TrainResult{std::move(net), std::move(log)};
    };

    while (true) {
        if (!std::isfinite(loss)) throw TrainingDiverged("train: non-finite training loss", std::move(log));

        const Residuals r = residual_jacobian(net, X_train, y_train, w_train);
        const double gradient_norm = 2.0 * (r.jacobian.transpose() * r.e).norm();

        if (gradient_norm <= cfg.gradient_norm_goal) return finish(StoppingReason::GradientNormGoal);
        if (loss <= cfg.loss_goal) return finish(StoppingReason::LossGoal);
        if (iterations >= cfg.max_iterations) return finish(StoppingReason::MaxIterations);

        // Propose steps at growing damping until one lowers the loss.
        bool accepted = false;
        double candidate_loss = loss;
        double step_norm = 0.0;
        while (true) {
            const Eigen::VectorXd step = lm_step(r.e, r.jacobian, mu);
            Network candidate{net.arch, net.w + step};
            candidate_loss = training_loss_at(candidate);
            step_norm = step.norm();

            const bool accept = std::isfinite(candidate_loss) && candidate_loss < loss;
            log.records.push_back({iterations + 1, candidate_loss, kNaN, gradient_norm, mu, step_norm, accept});
            if (accept) {
                net.w = std::move(candidate.w);
                mu = std::max(mu / cfg.damping_factor, 1e-300);
                accepted = true;
                break;
            }
            mu *= cfg.damping_factor;
            if (mu > cfg.max_damping) break;
        }
        if (!accepted) return finish(StoppingReason::MaxDamping);

        ++iterations;
        const double loss_decrease = loss - candidate_loss;
        loss = candidate_loss;

        if (has_selection) {
            const double sel = selection_loss_at(net);
            log.records.back().selection_loss = sel;
            if (sel < best_selection) {
                best_selection = sel;
                best_w = net.w;
            }
            if (sel > selection_min) {
                ++selection_failures;
            } else {
                selection_min = sel;
            }
        }

        if (step_norm < cfg.min_increment_norm) return finish(StoppingReason::MinIncrementNorm);
        if (loss_decrease < cfg.min_loss_decrease) return finish(StoppingReason::MinLossDecrease);
        if (has_selection && selection_failures >= cfg.max_selection_failures) {
            return finish(StoppingReason::MaxSelectionFailures);
        }
    }
}

TrainResult train(Network net, const EncodedDataset& data, const ClassWeights& weights,
                  const TrainingConfig& cfg) {
    const auto training = data.subset_data(Subset::Training);
    if (training.y.size() == 0) throw DataError("train: empty training subset");
    const bool has_pos = (training.y.array() > 0.5).any();
    const bool has_neg = (training.y.array() <= 0.5).any();
    if (!has_pos || !has_neg) throw DataError("train: training subset contains a single class");

    const auto selection = data.subset_data(Subset::Selection);
    return train_on(std::move(net), training.X, training.y, selection.X, selection.y, weights, cfg);
}

}  // namespace lmnet
