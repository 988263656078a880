#pragma once

#include <cstdint>
#include <vector>

#include "lmnet/dataset.hpp"
#include "lmnet/loss.hpp"
#include "lmnet/network.hpp"
#include "lmnet/trainer.hpp"

namespace lmnet {

struct OrderSelectionConfig {
    std::int64_t min_order = 1;
    std::int64_t max_order = 10;
    std::int64_t trials_per_order = 3;
    TrainingConfig trainer;
    std::uint64_t seed = 1;
    std::int64_t jobs = 0;  // 0 = hardware concurrency

    // Two orders whose selection losses differ by less than this slack count
    // as tied, and the smaller order wins. Pure argmin would let float noise
    // pick an oversized model when several orders fit equally well.
    double tie_abs = 1e-6;
    double tie_rel = 0.02;

    void validate() const;
};

struct OrderRecord {
    std::int64_t order;
    double best_training_loss;    // training loss of the trial chosen by selection loss
    double best_selection_loss;
    std::int64_t iterations_used; // accepted LM iterations summed over this order's trials
};

struct OrderSelectionResult {
    std::vector<OrderRecord> orders;
    std::int64_t optimal_order = 0;
    double optimum_training_loss = 0;
    double optimum_selection_loss = 0;
    std::int64_t total_iterations = 0;
};

struct SelectionOutcome {
    Network best_net;
    TrainingLog best_log;  // log of the winning trial
    OrderSelectionResult result;
};

// Incremental order selection: trains trials_per_order fresh networks per
// hidden-layer size in [min_order, max_order] (seeds derived from
// cfg.seed/order/trial) and returns the candidate minimizing selection loss.
// Trials run concurrently; the outcome does not depend on scheduling.
SelectionOutcome select_order(const EncodedDataset& data, const ClassWeights& weights,
                              const OrderSelectionConfig& cfg);

}  // namespace lmnet
