#include "lmnet/order_selection.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace lmnet {

void OrderSelectionConfig::validate() const {
    if (min_order < 1) throw std::invalid_argument("min_order must be >= 1");
    if (max_order < min_order) throw std::invalid_argument("max_order must be >= min_order");
    if (trials_per_order < 1) throw std::invalid_argument("trials_per_order must be >= 1");
    if (jobs < 0) throw std::invalid_argument("jobs must be >= 0");
    if (tie_abs < 0.0 || tie_rel < 0.0) throw std::invalid_argument("tie tolerances must be >= 0");
    trainer.validate();
}

SelectionOutcome select_order(const EncodedDataset& data, const ClassWeights& weights,
                              const OrderSelectionConfig& cfg) {
    cfg.validate();

    const auto training = data.subset_data(Subset::Training);
    if (training.y.size() == 0) throw DataError("order selection: empty training subset");
    if (!(training.y.array() > 0.5).any() || !(training.y.array() <= 0.5).any()) {
        throw DataError("order selection: training subset contains a single class");
    }
    const auto selection = data.subset_data(Subset::Selection);
    if (selection.y.size() == 0) throw DataError("order selection: empty selection subset");

    struct Task {
        std::int64_t order;
        std::int64_t trial;
    };
    std::vector<Task> tasks;
    for (std::int64_t order = cfg.min_order; order <= cfg.max_order; ++order) {
        for (std::int64_t trial = 0; trial < cfg.trials_per_order; ++trial) {
            tasks.push_back({order, trial});
        }
    }

    std::vector<std::optional<TrainResult>> results(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());

    const auto run_task = [&](std::size_t k) {
        const Task& t = tasks[k];
        try {
            const std::uint64_t seed = rng::derive_seed(cfg.seed, static_cast<std::uint64_t>(t.order),
                                                        static_cast<std::uint64_t>(t.trial));
            Network net = init_network({training.X.cols(), t.order}, seed);
            results[k] = train_on(std::move(net), training.X, training.y, selection.X, selection.y,
                                  weights, cfg.trainer);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    };

    std::size_t n_workers = cfg.jobs > 0 ? static_cast<std::size_t>(cfg.jobs)
                                         : std::max(1u, std::thread::hardware_concurrency());
    n_workers = std::min(n_workers, tasks.size());
    if (n_workers <= 1) {
        for (std::size_t k = 0; k < tasks.size(); ++k) run_task(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::size_t i = 0; i < n_workers; ++i) {
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t k = next.fetch_add(1);
                    if (k >= tasks.size()) return;
                    run_task(k);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    for (std::size_t k = 0; k < tasks.size(); ++k) {
        if (!errors[k]) continue;
        try {
            std::rethrow_exception(errors[k]);
        } catch (const std::exception& e) {
            throw TrainingError("order " + std::to_string(tasks[k].order) + " trial " +
                                std::to_string(tasks[k].trial) + ": " + e.what());
        }
    }

    // Per order keep the trial with the lowest selection loss (first on ties).
    SelectionOutcome outcome;
    OrderSelectionResult& result = outcome.result;
    std::vector<std::size_t> chosen_task_per_order;
    std::size_t k = 0;
    for (std::int64_t order = cfg.min_order; order <= cfg.max_order; ++order) {
        std::size_t best_k = k;
        std::int64_t iterations_used = 0;
        for (std::int64_t trial = 0; trial < cfg.trials_per_order; ++trial, ++k) {
            iterations_used += results[k]->log.final.iterations;
            if (results[k]->log.final.final_selection_loss < results[best_k]->log.final.final_selection_loss) {
                best_k = k;
            }
        }
        const TrainingSummary& s = results[best_k]->log.final;
        result.orders.push_back({order, s.final_loss, s.final_selection_loss, iterations_used});
        result.total_iterations += iterations_used;
        chosen_task_per_order.push_back(best_k);
    }

    double min_selection = result.orders.front().best_selection_loss;
    for (const auto& rec : result.orders) min_selection = std::min(min_selection, rec.best_selection_loss);
    const double tie_cutoff = min_selection + cfg.tie_abs + cfg.tie_rel * min_selection;

    std::size_t winner_idx = 0;
    while (result.orders[winner_idx].best_selection_loss > tie_cutoff) ++winner_idx;

    const OrderRecord& winner = result.orders[winner_idx];
    result.optimal_order = winner.order;
    result.optimum_training_loss = winner.best_training_loss;
    result.optimum_selection_loss = winner.best_selection_loss;

    TrainResult& best = *results[chosen_task_per_order[winner_idx]];
    outcome.best_net = std::move(best.net);
    outcome.best_log = std::move(best.log);
    return outcome;
}

}  // namespace lmnet
