#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "lmnet/dataset.hpp"
#include "lmnet/loss.hpp"
#include "lmnet/network.hpp"

namespace lmnet {

struct TrainingConfig {
    double damping_factor = 10.0;
    double initial_damping = 1e-3;
    double max_damping = 1e10;
    double min_increment_norm = 1e-3;
    double min_loss_decrease = 1e-12;
    double loss_goal = 1e-12;
    double gradient_norm_goal = 1e-3;
    std::int64_t max_selection_failures = 100;
    std::int64_t max_iterations = 1000;

    void validate() const;
};

enum class StoppingReason : std::uint8_t {
    GradientNormGoal,
    LossGoal,
    MinIncrementNorm,
    MinLossDecrease,
    MaxSelectionFailures,
    MaxIterations,
    MaxDamping,
};

const char* to_string(StoppingReason r);

struct IterationRecord {
    std::int64_t iteration;   // accepted-step index the proposal belongs to (1-based)
    double training_loss;     // loss at the proposed parameters
    double selection_loss;    // NaN when not evaluated (rejections, no selection rows)
    double gradient_norm;     // ||2 J^T e|| at the linearization point
    double damping;           // mu used for this proposal
    double step_norm;
    bool accepted;
};

struct TrainingSummary {
    double parameters_norm = 0;
    double final_loss = 0;
    double final_selection_loss = 0;  // NaN without selection rows
    double final_gradient_norm = 0;
    std::int64_t iterations = 0;      // accepted steps
    double elapsed_seconds = 0;       // never written to output files
    StoppingReason stopping_reason = StoppingReason::MaxIterations;
};

struct TrainingLog {
    std::vector<IterationRecord> records;
    TrainingSummary final;
};

// Divergence carries the history collected up to the failure.
struct TrainingDiverged : TrainingError {
    TrainingLog log;
    TrainingDiverged(const std::string& msg, TrainingLog partial)
        : TrainingError(msg), log(std::move(partial)) {}
};

// One damped Gauss-Newton increment: -(J^T J + mu I)^{-1} J^T e.
Eigen::VectorXd lm_step(const Eigen::Ref<const Eigen::VectorXd>& e,
                        const Eigen::Ref<const Eigen::MatrixXd>& J, double mu);

struct TrainResult {
    Network net;
    TrainingLog log;
};

// Full-batch Levenberg-Marquardt on explicit matrices. Selection matrices may
// be empty; then selection-based stopping is off and the last accepted iterate
// is returned. Otherwise the returned parameters are the snapshot with the
// lowest selection loss seen.
TrainResult train_on(Network net,
                     const Eigen::Ref<const Eigen::MatrixXd>& X_train,
                     const Eigen::Ref<const Eigen::VectorXd>& y_train,
                     const Eigen::Ref<const Eigen::MatrixXd>& X_selection,
                     const Eigen::Ref<const Eigen::VectorXd>& y_selection,
                     const ClassWeights& weights, const TrainingConfig& cfg);

TrainResult train(Network net, const EncodedDataset& data, const ClassWeights& weights,
                  const TrainingConfig& cfg);

}  // namespace lmnet
