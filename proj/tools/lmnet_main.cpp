#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lmnet/dataset.hpp"
#include "lmnet/evaluation.hpp"
#include "lmnet/loss.hpp"
#include "lmnet/model_io.hpp"
#include "lmnet/network.hpp"
#include "lmnet/order_selection.hpp"
#include "lmnet/report.hpp"
#include "lmnet/trainer.hpp"

namespace fs = std::filesystem;
using namespace lmnet;

namespace {

struct Options {
    std::string data;
    std::string model;
    std::string out = ".";
    std::uint64_t seed = 1;
    bool no_result_feature = false;
    double threshold = 0.5;
    std::int64_t jobs = 0;
    std::int64_t max_order = 10;
    std::int64_t trials = 3;
    std::int64_t order = 0;  // 0 = use order selection
    bool svg = false;
    bool youden = false;
    double minkowski_exponent = 1.5;
    std::string train_log;
    std::string order_history;
    std::string subset = "testing";
};

ThresholdRule rule_of(const Options& o) {
    return o.youden ? ThresholdRule::YoudenJ : ThresholdRule::DistanceToCorner;
}

Subset subset_of(const std::string& name) {
    if (name == "training") return Subset::Training;
    if (name == "selection") return Subset::Selection;
    if (name == "testing") return Subset::Testing;
    throw DataError("unknown subset '" + name + "' (training|selection|testing)");
}

EncodeOptions encode_options(const Options& o) {
    EncodeOptions opts;
    if (o.no_result_feature) opts.excluded_columns.push_back("result");
    return opts;
}

struct LoadedData {
    Schema schema;
    RawTable raw;
    std::vector<Subset> assignment;
    EncodedDataset ds;
};

LoadedData load_dataset(const Options& o) {
    LoadedData d;
    d.schema = Schema::adult_screening();
    d.raw = parse_csv(o.data, d.schema);
    d.assignment = split(static_cast<std::int64_t>(d.raw.rows.size()), o.seed);
    d.ds = encode(d.raw, d.schema, d.assignment, encode_options(o));
    for (const auto& w : d.ds.warnings) std::cerr << "warning: " << w << "\n";
    return d;
}

OrderSelectionConfig selection_config(const Options& o) {
    OrderSelectionConfig cfg;
    cfg.max_order = o.max_order;
    cfg.trials_per_order = o.trials;
    cfg.seed = o.seed;
    cfg.jobs = o.jobs;
    return cfg;
}

ModelBundle make_bundle(const LoadedData& d, const Network& net, const ClassWeights& weights,
                        const TrainingSummary& summary, std::int64_t optimal_order) {
    ModelBundle b;
    b.schema = d.schema;
    b.encoding = d.ds.encoding;
    b.arch = net.arch;
    b.w = net.w;
    b.class_weights = weights;
    b.training_summary = {summary.final_loss, to_string(summary.stopping_reason), optimal_order};
    return b;
}

int cmd_summary(const Options& o) {
    const LoadedData d = load_dataset(o);
    const PartitionSummary p = partition_summary(d.ds);
    std::cerr << partition_to_text(p);
    std::cout << partition_to_json(p).dump(2) << "\n";
    return 0;
}

int cmd_train(const Options& o) {
    const LoadedData d = load_dataset(o);
    const auto y_train = d.ds.subset_data(Subset::Training).y;
    const ClassWeights weights = class_weights(y_train);

    Network net;
    TrainingLog log;
    std::int64_t chosen_order;
    std::optional<OrderSelectionResult> selection;

    if (o.order > 0) {
        chosen_order = o.order;
        Network fresh = init_network({d.ds.X.cols(), o.order}, rng::derive_seed(o.seed, o.order, 0));
        TrainResult r = train(std::move(fresh), d.ds, weights, TrainingConfig{});
        net = std::move(r.net);
        log = std::move(r.log);
    } else {
        SelectionOutcome outcome = select_order(d.ds, weights, selection_config(o));
        net = std::move(outcome.best_net);
        log = std::move(outcome.best_log);
        selection = std::move(outcome.result);
        chosen_order = selection->optimal_order;
    }

    const fs::path model_path = o.model.empty() ? fs::path(o.out) / "model.lmnet.json" : fs::path(o.model);
    fs::create_directories(model_path.parent_path().empty() ? "." : model_path.parent_path());
    save_model(make_bundle(d, net, weights, log.final, chosen_order), model_path);

    if (!o.train_log.empty()) write_train_log_csv(o.train_log, log);
    if (!o.order_history.empty() && selection) write_order_history_csv(o.order_history, *selection);

    std::cout << "order               " << chosen_order << "\n";
    std::cout << "final loss          " << format_double(log.final.final_loss, 6) << "\n";
    std::cout << "final selection     " << format_double(log.final.final_selection_loss, 6) << "\n";
    std::cout << "iterations          " << log.final.iterations << "\n";
    std::cout << "stopping criterion  " << to_string(log.final.stopping_reason) << "\n";
    std::cout << "model               " << model_path.string() << "\n";
    return 0;
}

int cmd_evaluate(const Options& o) {
    const ModelBundle bundle = load_model(o.model);
    const RawTable raw = parse_csv(o.data, bundle.schema);
    const auto assignment = split(static_cast<std::int64_t>(raw.rows.size()), o.seed);
    const EncodedDataset ds = encode_with(bundle.encoding, raw, bundle.schema, assignment);

    const MetricsReport metrics = compute_metrics(ds, bundle.network(), bundle.class_weights,
                                                  subset_of(o.subset), o.threshold, rule_of(o),
                                                  o.minkowski_exponent);
    std::cout << metrics_to_json(metrics).dump(2) << "\n";

    if (!o.out.empty() && o.out != ".") {
        fs::create_directories(o.out);
        write_roc_csv(fs::path(o.out) / "roc.csv", metrics.roc);
        write_gain_csv(fs::path(o.out) / "gain.csv", metrics.gain_lift);
        write_lift_csv(fs::path(o.out) / "lift.csv", metrics.gain_lift);
        if (o.svg) {
            write_roc_svg(fs::path(o.out) / "roc.svg", metrics.roc);
            write_gain_svg(fs::path(o.out) / "gain.svg", metrics.gain_lift);
            write_lift_svg(fs::path(o.out) / "lift.svg", metrics.gain_lift);
        }
    }
    return 0;
}

int cmd_score(const Options& o) {
    const ModelBundle bundle = load_model(o.model);

    // The scoring file may carry the target column or omit it.
    RawTable raw;
    try {
        raw = parse_csv(o.data, bundle.schema);
    } catch (const DataError&) {
        std::vector<std::string> predictors;
        for (const auto& c : bundle.schema.columns) {
            if (c.kind != ColumnKind::Target) predictors.push_back(c.name);
        }
        raw = parse_csv_columns(o.data, predictors, bundle.schema.missing_token);
    }

    std::cout << "row,probability,prediction\n";
    for (std::size_t i = 0; i < raw.rows.size(); ++i) {
        try {
            const Scored s = score_record(bundle, raw.rows[i], o.threshold);
            std::cout << i + 1 << "," << format_double(s.probability, 10) << ","
                      << (s.positive ? "YES" : "NO") << "\n";
        } catch (const MissingValueError&) {
            std::cout << i + 1 << ",,REFUSED(missing)\n";
        } catch (const DataError& e) {
            throw DataError("row " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return 0;
}

int cmd_reproduce(const Options& o) {
    const LoadedData d = load_dataset(o);
    const auto y_train = d.ds.subset_data(Subset::Training).y;
    const ClassWeights weights = class_weights(y_train);

    SelectionOutcome outcome = select_order(d.ds, weights, selection_config(o));

    const PartitionSummary partition = partition_summary(d.ds);
    const MetricsReport metrics = compute_metrics(d.ds, outcome.best_net, weights, Subset::Testing,
                                                  o.threshold, rule_of(o), o.minkowski_exponent);

    const fs::path out(o.out);
    fs::create_directories(out);
    const nlohmann::ordered_json report =
        report_to_json(partition, weights, outcome.result, outcome.best_log.final, metrics);
    write_text_file(out / "report.json", report.dump(2) + "\n");
    write_text_file(out / "report.txt",
                    report_to_text(partition, weights, outcome.result, outcome.best_log.final, metrics));
    write_roc_csv(out / "roc.csv", metrics.roc);
    write_gain_csv(out / "gain.csv", metrics.gain_lift);
    write_lift_csv(out / "lift.csv", metrics.gain_lift);
    write_order_history_csv(out / "order_history.csv", outcome.result);
    save_model(make_bundle(d, outcome.best_net, weights, outcome.best_log.final, outcome.result.optimal_order),
               out / "model.lmnet.json");
    if (!o.train_log.empty()) write_train_log_csv(o.train_log, outcome.best_log);
    if (o.svg) {
        write_roc_svg(out / "roc.svg", metrics.roc);
        write_gain_svg(out / "gain.svg", metrics.gain_lift);
        write_lift_svg(out / "lift.svg", metrics.gain_lift);
    }

    std::cout << "== Reproduction summary ==\n";
    std::cout << "partition           ";
    for (const auto& e : partition.entries) std::cout << e.n + e.n_missing_dropped << " ";
    std::cout << "(assigned; " << partition.total_dropped << " rows dropped for missing values)\n";
    std::cout << "positive weight     " << format_double(weights.positive, 6) << "\n";
    std::cout << "optimal order       " << outcome.result.optimal_order << "\n";
    std::cout << "training loss       " << format_double(outcome.result.optimum_training_loss, 6) << "\n";
    std::cout << "selection loss      " << format_double(outcome.result.optimum_selection_loss, 6) << "\n";
    std::cout << "stopping criterion  " << to_string(outcome.best_log.final.stopping_reason) << "\n";
    std::cout << "test accuracy       " << format_double(metrics.accuracy_percent, 6) << "% (tp "
              << metrics.confusion.tp << ", fn " << metrics.confusion.fn << ", fp " << metrics.confusion.fp
              << ", tn " << metrics.confusion.tn << ")\n";
    std::cout << "test auc            " << format_double(metrics.roc.auc, 6) << " (optimal threshold "
              << format_double(metrics.roc.optimal_threshold, 6) << ")\n";
    std::cout << "maximum gain score  " << format_double(metrics.gain_lift.max_gain_score, 6)
              << " at instance ratio " << format_double(metrics.gain_lift.max_gain_ratio, 6) << "\n";
    std::cout << "elapsed             " << format_double(outcome.best_log.final.elapsed_seconds, 4)
              << " s (winning trial)\n";
    std::cout << "outputs             " << (out / "report.json").string() << " report.txt roc.csv gain.csv "
              << "lift.csv order_history.csv model.lmnet.json\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-hidden-layer classifier trained with Levenberg-Marquardt and incremental "
                 "order selection, with full ranking diagnostics"};
    app.require_subcommand(1);

    Options o;

    const auto add_common = [&](CLI::App* cmd, bool needs_data, bool needs_model) {
        if (needs_data) cmd->add_option("--data", o.data, "input CSV file")->required();
        if (needs_model) cmd->add_option("--model", o.model, "model bundle (.lmnet.json)");
        cmd->add_option("--seed", o.seed, "seed for the split and initializations (default 1)");
        cmd->add_option("--threshold", o.threshold, "decision threshold")
            ->check(CLI::Range(1e-9, 1.0 - 1e-9));
        cmd->add_flag("--no-result-feature", o.no_result_feature,
                      "exclude the 'result' column from the predictors");
    };

    CLI::App* summary = app.add_subcommand("summary", "dataset, partition and class counts");
    add_common(summary, true, false);

    CLI::App* train = app.add_subcommand("train", "fit a model");
    add_common(train, true, true);
    train->add_option("--out", o.out, "output directory (default .)");
    CLI::Option* order_opt =
        train->add_option("--order", o.order, "fixed hidden-layer size (skips order selection)")
            ->check(CLI::PositiveNumber);
    train->add_flag("--order-select", "sweep hidden-layer sizes (default)")->excludes(order_opt);
    train->add_option("--max-order", o.max_order, "largest order to try")->check(CLI::PositiveNumber);
    train->add_option("--trials", o.trials, "trainings per order")->check(CLI::PositiveNumber);
    train->add_option("--jobs", o.jobs, "concurrent trainings (0 = hardware)")
        ->check(CLI::NonNegativeNumber);
    train->add_option("--train-log", o.train_log, "write the per-iteration log CSV here");
    train->add_option("--order-history", o.order_history, "write the per-order loss CSV here");

    CLI::App* evaluate = app.add_subcommand("evaluate", "metric battery for a trained model");
    add_common(evaluate, true, true);
    evaluate->get_option("--model")->required();
    evaluate->add_option("--subset", o.subset, "training|selection|testing (default testing)")
        ->check(CLI::IsMember({"training", "selection", "testing"}));
    evaluate->add_option("--out", o.out, "also write curve CSVs into this directory");
    evaluate->add_flag("--svg", o.svg, "render roc/gain/lift SVG charts");
    evaluate->add_flag("--youden", o.youden, "optimal threshold by Youden's J instead of corner distance");
    evaluate->add_option("--minkowski-exponent", o.minkowski_exponent, "exponent of the Minkowski error")
        ->check(CLI::PositiveNumber);

    CLI::App* score = app.add_subcommand("score", "score raw records through a saved model");
    add_common(score, true, true);
    score->get_option("--model")->required();

    CLI::App* reproduce = app.add_subcommand("reproduce", "one-shot pipeline: split, encode, order "
                                             "selection, evaluation, full report");
    add_common(reproduce, true, false);
    reproduce->add_option("--out", o.out, "output directory (default .)");
    reproduce->add_option("--max-order", o.max_order, "largest order to try")->check(CLI::PositiveNumber);
    reproduce->add_option("--trials", o.trials, "trainings per order")->check(CLI::PositiveNumber);
    reproduce->add_option("--jobs", o.jobs, "concurrent trainings (0 = hardware)")
        ->check(CLI::NonNegativeNumber);
    reproduce->add_flag("--svg", o.svg, "render roc/gain/lift SVG charts");
    reproduce->add_flag("--youden", o.youden, "optimal threshold by Youden's J instead of corner distance");
    reproduce->add_option("--minkowski-exponent", o.minkowski_exponent, "exponent of the Minkowski error")
        ->check(CLI::PositiveNumber);
    reproduce->add_option("--train-log", o.train_log, "write the winning trial's iteration log CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    try {
        if (summary->parsed()) return cmd_summary(o);
        if (train->parsed()) return cmd_train(o);
        if (evaluate->parsed()) return cmd_evaluate(o);
        if (score->parsed()) return cmd_score(o);
        if (reproduce->parsed()) return cmd_reproduce(o);
    } catch (const TrainingError& e) {
        std::cerr << "training error: " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
