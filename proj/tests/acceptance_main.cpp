// Acceptance suite: each numbered criterion prints one PASS/FAIL line with a
// measured detail. The process exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lmnet/dataset.hpp"
#include "lmnet/evaluation.hpp"
#include "lmnet/model_io.hpp"
#include "lmnet/order_selection.hpp"
#include "lmnet/trainer.hpp"
#include "screening_datagen.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

#ifndef LMNET_CLI_PATH
#error "LMNET_CLI_PATH must point at the lmnet binary"
#endif

using namespace lmnet;
namespace fs = std::filesystem;

namespace {

const fs::path scratch = fs::temp_directory_path() / "lmnet_acceptance";

int run_cli(const std::string& args) {
    const std::string cmd = std::string(LMNET_CLI_PATH) + " " + args + " >/dev/null 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Outcome {
    bool pass;
    std::string detail;
};

// ---- criteria ------------------------------------------------------------

Outcome jacobian_vs_finite_differences() {
    std::mt19937_64 gen(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng::below(gen, 5));
        const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng::below(gen, 3));
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng::below(gen, 10));
        const Network net = init_network({d, m}, gen());
        Eigen::MatrixXd X(n, d);
        Eigen::VectorXd y(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            y(i) = rng::below(gen, 2) ? 1.0 : 0.0;
            for (Eigen::Index j = 0; j < d; ++j) X(i, j) = 4.0 * rng::uniform01(gen) - 2.0;
        }
        const Eigen::VectorXd w1 = Eigen::VectorXd::Ones(n);
        const Residuals r = residual_jacobian(net, X, y, w1);
        const Eigen::MatrixXd fd = oracles::finite_difference_jacobian(net, X, y, w1);
        worst = std::max(worst, (r.jacobian - fd).cwiseAbs().maxCoeff());
    }
    return {worst < 1e-6, "max |J_analytic - J_fd| = " + format_double(worst, 3) + " over 20 cases"};
}

Outcome lm_step_closed_form() {
    Eigen::MatrixXd J(2, 1);
    J << 1, 2;
    Eigen::VectorXd e(2);
    e << -1, -2;
    const double step = lm_step(e, J, 1.0)(0);
    const double err = std::abs(step - 5.0 / 6.0);
    return {err < 1e-12, "step = " + format_double(step, 17) + ", |step - 5/6| = " + format_double(err, 3)};
}

Outcome auc_oracle_equivalence() {
    std::mt19937_64 gen(555);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng::below(gen, 199));
        Eigen::VectorXd outputs(n), targets(n);
        targets(0) = 0.0;
        targets(1) = 1.0;
        const bool ties = trial % 2 == 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i >= 2) targets(i) = rng::below(gen, 2) ? 1.0 : 0.0;
            outputs(i) = ties ? static_cast<double>(rng::below(gen, 10)) / 10.0 : rng::uniform01(gen);
        }
        worst = std::max(worst, std::abs(roc(outputs, targets).auc - oracles::pair_count_auc(outputs, targets)));
    }
    return {worst < 1e-12, "max |trapezoid - pair count| = " + format_double(worst, 3) + " over 100 sets"};
}

Outcome accuracy_arithmetic() {
    const double acc = accuracy_percent({33, 0, 1, 28, 0.5});
    const bool pass = acc == 100.0 * 61.0 / 62.0;
    return {pass, "accuracy(33,0,1,28) = " + format_double(acc, 17) + "%"};
}

Outcome synthetic_convergence() {
    int successes = 0;
    double worst_loss = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Eigen::MatrixXd X;
        Eigen::VectorXd y;
        synthetic::separable20(seed, X, y);
        TrainingConfig cfg;
        cfg.max_iterations = 200;
        const TrainResult r = train_on(init_network({2, 1}, seed), X, y, Eigen::MatrixXd(0, 2),
                                       Eigen::VectorXd(0), {1.0, 1.0}, cfg);
        if (r.log.final.final_loss < 1e-3) ++successes;
        worst_loss = std::max(worst_loss, r.log.final.final_loss);
    }
    return {successes >= 9, std::to_string(successes) + "/10 seeds below 1e-3 within 200 iterations "
                            "(worst final loss " + format_double(worst_loss, 3) + ")"};
}

Outcome order_selection_sanity() {
    const EncodedDataset xor_ds = synthetic::xor_dataset(7);
    OrderSelectionConfig cfg;
    cfg.max_order = 4;
    cfg.seed = 7;
    const SelectionOutcome xr = select_order(xor_ds, class_weights(xor_ds.subset_data(Subset::Training).y), cfg);

    const EncodedDataset lin_ds = synthetic::linear_dataset(9);
    OrderSelectionConfig lin_cfg;
    lin_cfg.max_order = 3;
    lin_cfg.seed = 9;
    // run candidates to the loss floor so near-equal orders genuinely tie
    lin_cfg.trainer.min_increment_norm = 1e-10;
    lin_cfg.trainer.gradient_norm_goal = 1e-10;
    const SelectionOutcome lr =
        select_order(lin_ds, class_weights(lin_ds.subset_data(Subset::Training).y), lin_cfg);

    const bool pass = xr.result.optimal_order >= 2 && lr.result.optimal_order == 1;
    return {pass, "xor optimal order " + std::to_string(xr.result.optimal_order) + " (order-1 loss " +
                      format_double(xr.result.orders[0].best_selection_loss, 3) + " vs order-2 " +
                      format_double(xr.result.orders[1].best_selection_loss, 3) + "); linear optimal order " +
                      std::to_string(lr.result.optimal_order)};
}

Outcome screening_reproduction() {
    const fs::path csv = scratch / "screening.csv";
    datagen::write_screening_csv(csv, 704, 42);

    std::vector<double> acc, auc, gain, order, weight;
    for (int seed = 1; seed <= 10; ++seed) {
        const fs::path out = scratch / ("rep_" + std::to_string(seed));
        const int code = run_cli("reproduce --data " + csv.string() + " --seed " + std::to_string(seed) +
                                 " --out " + out.string());
        if (code != 0) return {false, "reproduce --seed " + std::to_string(seed) + " exited " + std::to_string(code)};
        const auto doc = nlohmann::json::parse(slurp(out / "report.json"));
        acc.push_back(doc["confusion"]["accuracy_percent"].get<double>());
        auc.push_back(doc["roc"]["auc"].get<double>());
        gain.push_back(doc["gain"]["max_gain_score"].get<double>());
        order.push_back(doc["order_selection"]["optimal_order"].get<double>());
        weight.push_back(doc["class_weights"]["positive"].get<double>());
    }
    const double med_acc = median(acc), med_auc = median(auc), med_gain = median(gain),
                 med_order = median(order), med_weight = median(weight);
    const bool pass = med_acc >= 95.0 && med_auc >= 0.99 && med_gain >= 0.90 && med_order <= 3.0 &&
                      med_weight >= 1.5 && med_weight <= 4.0;
    std::ostringstream d;
    d << "medians over 10 seeds: accuracy " << format_double(med_acc, 4) << "%, auc "
      << format_double(med_auc, 4) << ", max gain " << format_double(med_gain, 4) << ", order "
      << format_double(med_order, 3) << ", positive weight " << format_double(med_weight, 3);
    return {pass, d.str()};
}

Outcome reproduction_determinism() {
    const fs::path csv = scratch / "screening.csv";
    if (!fs::exists(csv)) datagen::write_screening_csv(csv, 704, 42);
    const fs::path a = scratch / "det_a";
    const fs::path b = scratch / "det_b";
    for (const auto& out : {a, b}) {
        const int code = run_cli("reproduce --data " + csv.string() + " --seed 1 --out " + out.string());
        if (code != 0) return {false, "reproduce exited " + std::to_string(code)};
    }
    std::vector<std::string> different;
    for (const char* f : {"report.json", "roc.csv", "gain.csv", "lift.csv", "order_history.csv"}) {
        if (slurp(a / f) != slurp(b / f)) different.push_back(f);
    }
    if (!different.empty()) {
        std::string msg = "files differ between identical seed-1 runs:";
        for (const auto& f : different) msg += " " + f;
        return {false, msg};
    }
    return {true, "report.json and all curve CSVs byte-identical across two seed-1 runs"};
}

Outcome round_trip_and_scoring_parity() {
    const fs::path csv = scratch / "screening.csv";
    if (!fs::exists(csv)) datagen::write_screening_csv(csv, 704, 42);

    const Schema schema = Schema::adult_screening();
    const RawTable raw = parse_csv(csv, schema);
    const auto assignment = split(static_cast<std::int64_t>(raw.rows.size()), 1);
    const EncodedDataset ds = encode(raw, schema, assignment);
    const ClassWeights cw = class_weights(ds.subset_data(Subset::Training).y);

    TrainingConfig cfg;
    cfg.max_iterations = 80;
    const TrainResult r = train(init_network({ds.X.cols(), 1}, 1), ds, cw, cfg);

    ModelBundle bundle;
    bundle.schema = schema;
    bundle.encoding = ds.encoding;
    bundle.arch = r.net.arch;
    bundle.w = r.net.w;
    bundle.class_weights = cw;
    bundle.training_summary = {r.log.final.final_loss, to_string(r.log.final.stopping_reason), 1};

    const fs::path path = scratch / "roundtrip.lmnet.json";
    save_model(bundle, path);
    const ModelBundle loaded = load_model(path);
    if (loaded.w != bundle.w) return {false, "weights changed across save/load"};

    double worst = 0.0;
    std::int64_t checked = 0;
    for (std::size_t i = 0; i < raw.rows.size(); ++i) {
        if (ds.subset[i] == Subset::Unused) continue;
        const double pipeline = forward(r.net, ds.X.row(static_cast<Eigen::Index>(i)).transpose()).first;
        const double scored = score_record(loaded, raw.rows[i]).probability;
        worst = std::max(worst, std::abs(scored - pipeline));
        ++checked;
    }
    return {worst == 0.0 && checked > 500,
            "weights bit-exact; max |score - pipeline| = " + format_double(worst, 3) + " over " +
                std::to_string(checked) + " complete rows"};
}

struct Criterion {
    int id;
    std::string name;
    double time_limit_seconds;  // 0 = no limit asserted
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    fs::remove_all(scratch);
    fs::create_directories(scratch);

    const std::vector<Criterion> criteria = {
        {1, "Jacobian matches central finite differences", 1.0, jacobian_vs_finite_differences},
        {2, "LM step closed form (J=[1,2]^T, e=[-1,-2], mu=1)", 0.0, lm_step_closed_form},
        {3, "Trapezoidal AUC equals pair-counting oracle", 0.0, auc_oracle_equivalence},
        {4, "Accuracy arithmetic on confusion (33,0,1,28)", 0.0, accuracy_arithmetic},
        {5, "Separable-data convergence across seeds", 5.0, synthetic_convergence},
        {6, "Order selection: XOR needs order >= 2, linear picks 1", 30.0, order_selection_sanity},
        {7, "Screening reproduction medians over 10 seeds", 120.0, screening_reproduction},
        {8, "Byte-identical outputs for a fixed seed", 0.0, reproduction_determinism},
        {9, "Model round-trip and scoring parity", 0.0, round_trip_and_scoring_parity},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome outcome{false, ""};
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::string detail = outcome.detail + " [" + format_double(elapsed, 3) + " s]";
        if (c.time_limit_seconds > 0.0 && elapsed > c.time_limit_seconds) {
            outcome.pass = false;
            detail += " exceeded " + format_double(c.time_limit_seconds, 3) + " s limit";
        }
        std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.name << ": " << detail
                  << "\n";
        if (!outcome.pass) ++failures;
    }
    if (failures) std::cout << failures << " criterion(s) failed\n";
    return failures == 0 ? 0 : 1;
}
