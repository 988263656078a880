#include "lmnet/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lmnet {

namespace {

using nlohmann::ordered_json;

constexpr std::array<Subset, 3> kUsedSubsets = {Subset::Training, Subset::Selection, Subset::Testing};

std::string csv_num(double v) { return format_double(v, 10); }

ordered_json error_report_json(const std::optional<ErrorReport>& r) {
    if (!r) return nullptr;
    return {{"sse", r->sse},
            {"mse", r->mse},
            {"rmse", r->rmse},
            {"nse", r->nse},
            {"cross_entropy", r->cross_entropy},
            {"minkowski", r->minkowski},
            {"weighted_squared", r->weighted_squared}};
}

ordered_json points_json(const std::vector<std::pair<double, double>>& pts) {
    ordered_json arr = ordered_json::array();
    for (const auto& [x, y] : pts) arr.push_back({x, y});
    return arr;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    return out;
}

// --- tiny SVG line charts ------------------------------------------------

struct Series {
    std::string label;
    std::string color;
    const std::vector<std::pair<double, double>>* points;
};

std::string svg_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series, double y_max, bool diagonal_baseline,
                      double horizontal_baseline_y = -1.0) {
    constexpr int W = 520, H = 420, L = 60, T = 40, R = 20, B = 50;
    const double plot_w = W - L - R, plot_h = H - T - B;
    const auto px = [&](double x) { return L + x * plot_w; };
    const auto py = [&](double y) { return T + (1.0 - y / y_max) * plot_h; };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    s << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    s << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" << title << "</text>\n";

    // frame and gridlines
    for (int i = 0; i <= 4; ++i) {
        const double f = i / 4.0;
        s << "<line x1=\"" << px(f) << "\" y1=\"" << py(0) << "\" x2=\"" << px(f) << "\" y2=\"" << py(y_max)
          << "\" stroke=\"#eeeeee\"/>\n";
        s << "<line x1=\"" << px(0) << "\" y1=\"" << py(f * y_max) << "\" x2=\"" << px(1) << "\" y2=\""
          << py(f * y_max) << "\" stroke=\"#eeeeee\"/>\n";
        s << "<text x=\"" << px(f) << "\" y=\"" << H - B + 18
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(f, 3)
          << "</text>\n";
        s << "<text x=\"" << L - 8 << "\" y=\"" << py(f * y_max) + 4
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(f * y_max, 3)
          << "</text>\n";
    }
    s << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << plot_w << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";
    s << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label << "</text>\n";
    s << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 16 " << H / 2 << ")\">" << y_label << "</text>\n";

    if (diagonal_baseline) {
        s << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1) << "\" y2=\"" << py(y_max)
          << "\" stroke=\"#aaaaaa\" stroke-dasharray=\"5,4\"/>\n";
    }
    if (horizontal_baseline_y >= 0.0) {
        s << "<line x1=\"" << px(0) << "\" y1=\"" << py(horizontal_baseline_y) << "\" x2=\"" << px(1)
          << "\" y2=\"" << py(horizontal_baseline_y) << "\" stroke=\"#aaaaaa\" stroke-dasharray=\"5,4\"/>\n";
    }

    int legend_y = T + 16;
    for (const auto& ser : series) {
        const auto pts = downsample_curve(*ser.points, 100);
        s << "<polyline fill=\"none\" stroke=\"" << ser.color << "\" stroke-width=\"1.6\" points=\"";
        for (const auto& [x, y] : pts) s << format_double(px(x), 7) << "," << format_double(py(y), 7) << " ";
        s << "\"/>\n";
        s << "<line x1=\"" << L + 10 << "\" y1=\"" << legend_y << "\" x2=\"" << L + 34 << "\" y2=\"" << legend_y
          << "\" stroke=\"" << ser.color << "\" stroke-width=\"1.6\"/>\n";
        s << "<text x=\"" << L + 40 << "\" y=\"" << legend_y + 4
          << "\" font-family=\"sans-serif\" font-size=\"11\">" << ser.label << "</text>\n";
        legend_y += 16;
    }
    s << "</svg>\n";
    return s.str();
}

}  // namespace

PartitionSummary partition_summary(const EncodedDataset& ds) {
    PartitionSummary p;
    for (const Subset s : kUsedSubsets) {
        const auto& counts = ds.class_counts[static_cast<std::size_t>(s)];
        PartitionSummary::Entry e;
        e.subset = subset_name(s);
        e.n = ds.count(s);
        e.n_positive = counts.n_positive;
        e.n_negative = counts.n_negative;
        e.n_missing_dropped = ds.dropped_from(s);
        p.entries.push_back(std::move(e));
    }
    p.total_rows = static_cast<std::int64_t>(ds.subset.size());
    p.total_dropped = static_cast<std::int64_t>(ds.dropped_rows.size());
    return p;
}

ordered_json partition_to_json(const PartitionSummary& p) {
    ordered_json subsets = ordered_json::array();
    for (const auto& e : p.entries) {
        subsets.push_back({{"subset", e.subset},
                           {"n", e.n},
                           {"n_positive", e.n_positive},
                           {"n_negative", e.n_negative},
                           {"n_missing_dropped", e.n_missing_dropped}});
    }
    return {{"total_rows", p.total_rows}, {"total_dropped", p.total_dropped}, {"subsets", std::move(subsets)}};
}

std::string partition_to_text(const PartitionSummary& p) {
    std::ostringstream s;
    s << "subset      assigned   used  positive  negative  dropped\n";
    for (const auto& e : p.entries) {
        char line[128];
        std::snprintf(line, sizeof(line), "%-10s  %8lld  %5lld  %8lld  %8lld  %7lld\n", e.subset.c_str(),
                      static_cast<long long>(e.n + e.n_missing_dropped), static_cast<long long>(e.n),
                      static_cast<long long>(e.n_positive), static_cast<long long>(e.n_negative),
                      static_cast<long long>(e.n_missing_dropped));
        s << line;
    }
    s << "total rows: " << p.total_rows << " (" << p.total_dropped << " dropped for missing values)\n";
    return s.str();
}

MetricsReport compute_metrics(const EncodedDataset& ds, const Network& net, const ClassWeights& weights,
                              Subset evaluated, double threshold, ThresholdRule rule,
                              double minkowski_exponent) {
    MetricsReport m;
    m.evaluated = evaluated;

    Eigen::VectorXd eval_outputs, eval_targets;
    for (const Subset s : kUsedSubsets) {
        const auto data = ds.subset_data(s);
        if (data.y.size() == 0) {
            if (s == evaluated) throw DataError(std::string("evaluation subset '") + subset_name(s) + "' is empty");
            continue;
        }
        const Eigen::VectorXd outputs = batch_outputs(net, data.X);
        const ErrorReport report = error_report(outputs, data.y, weights, minkowski_exponent);
        if (s == Subset::Training) m.training = report;
        if (s == Subset::Selection) m.selection = report;
        if (s == Subset::Testing) m.testing = report;
        if (s == evaluated) {
            eval_outputs = outputs;
            eval_targets = data.y;
        }
    }

    m.confusion = confusion(eval_outputs, eval_targets, threshold);
    m.accuracy_percent = accuracy_percent(m.confusion);
    m.roc = roc(eval_outputs, eval_targets, rule);
    m.gain_lift = gain_lift(eval_outputs, eval_targets);
    return m;
}

ordered_json metrics_to_json(const MetricsReport& m) {
    ordered_json errors;
    errors["training"] = error_report_json(m.training);
    errors["selection"] = error_report_json(m.selection);
    errors["testing"] = error_report_json(m.testing);

    ordered_json confusion_json = {{"threshold", m.confusion.threshold},
                                   {"tp", m.confusion.tp},
                                   {"fn", m.confusion.fn},
                                   {"fp", m.confusion.fp},
                                   {"tn", m.confusion.tn},
                                   {"accuracy_percent", m.accuracy_percent},
                                   {"evaluated_subset", subset_name(m.evaluated)}};

    std::vector<std::pair<double, double>> roc_pts;
    roc_pts.reserve(m.roc.points.size());
    for (const auto& p : m.roc.points) roc_pts.emplace_back(p.fpr, p.tpr);

    ordered_json roc_json = {{"auc", m.roc.auc},
                             {"optimal_threshold", m.roc.optimal_threshold},
                             {"points", points_json(downsample_curve(roc_pts, 100))}};

    ordered_json gain_json = {{"max_gain_score", m.gain_lift.max_gain_score},
                              {"max_gain_ratio", m.gain_lift.max_gain_ratio},
                              {"positive", points_json(downsample_curve(m.gain_lift.positive_gain, 100))},
                              {"negative", points_json(downsample_curve(m.gain_lift.negative_gain, 100))}};

    ordered_json lift_json = {{"points", points_json(downsample_curve(m.gain_lift.lift, 100))}};

    return {{"errors", std::move(errors)},
            {"confusion", std::move(confusion_json)},
            {"roc", std::move(roc_json)},
            {"gain", std::move(gain_json)},
            {"lift", std::move(lift_json)}};
}

ordered_json report_to_json(const PartitionSummary& partition, const ClassWeights& weights,
                            const OrderSelectionResult& selection, const TrainingSummary& training,
                            const MetricsReport& metrics) {
    ordered_json per_order = ordered_json::array();
    for (const auto& rec : selection.orders) {
        per_order.push_back({{"order", rec.order},
                             {"training_loss", rec.best_training_loss},
                             {"selection_loss", rec.best_selection_loss},
                             {"iterations", rec.iterations_used}});
    }

    ordered_json metrics_json = metrics_to_json(metrics);
    ordered_json doc;
    doc["partition"] = partition_to_json(partition);
    doc["class_weights"] = {{"positive", weights.positive}, {"negative", weights.negative}};
    doc["order_selection"] = {{"optimal_order", selection.optimal_order},
                              {"optimum_training_loss", selection.optimum_training_loss},
                              {"optimum_selection_loss", selection.optimum_selection_loss},
                              {"total_iterations", selection.total_iterations},
                              {"per_order", std::move(per_order)}};
    doc["training"] = {{"parameters_norm", training.parameters_norm},
                       {"final_loss", training.final_loss},
                       {"final_selection_loss", training.final_selection_loss},
                       {"final_gradient_norm", training.final_gradient_norm},
                       {"iterations", training.iterations},
                       {"stopping_reason", to_string(training.stopping_reason)}};
    doc["errors"] = std::move(metrics_json["errors"]);
    doc["confusion"] = std::move(metrics_json["confusion"]);
    doc["roc"] = std::move(metrics_json["roc"]);
    doc["gain"] = std::move(metrics_json["gain"]);
    doc["lift"] = std::move(metrics_json["lift"]);
    return doc;
}

std::string report_to_text(const PartitionSummary& partition, const ClassWeights& weights,
                           const OrderSelectionResult& selection, const TrainingSummary& training,
                           const MetricsReport& metrics) {
    std::ostringstream s;
    s << "== Data partition ==\n" << partition_to_text(partition) << "\n";

    s << "== Class weights ==\n";
    s << "positive  " << format_double(weights.positive, 6) << "\n";
    s << "negative  " << format_double(weights.negative, 6) << "\n\n";

    s << "== Training (Levenberg-Marquardt) ==\n";
    s << "final parameters norm   " << format_double(training.parameters_norm, 6) << "\n";
    s << "final loss              " << format_double(training.final_loss, 6) << "\n";
    s << "final selection loss    " << format_double(training.final_selection_loss, 6) << "\n";
    s << "final gradient norm     " << format_double(training.final_gradient_norm, 6) << "\n";
    s << "iterations              " << training.iterations << "\n";
    s << "stopping criterion      " << to_string(training.stopping_reason) << "\n\n";

    s << "== Order selection ==\n";
    s << "optimal order           " << selection.optimal_order << "\n";
    s << "optimum training loss   " << format_double(selection.optimum_training_loss, 6) << "\n";
    s << "optimum selection loss  " << format_double(selection.optimum_selection_loss, 6) << "\n";
    s << "total iterations        " << selection.total_iterations << "\n\n";

    s << "== Errors ==\n";
    s << "measure            training   selection     testing\n";
    const auto row = [&](const char* name, auto get) {
        char line[160];
        const auto cell = [&](const std::optional<ErrorReport>& r) {
            return r ? format_double(get(*r), 4) : std::string("-");
        };
        std::snprintf(line, sizeof(line), "%-16s %10s  %10s  %10s\n", name,
                      cell(metrics.training).c_str(), cell(metrics.selection).c_str(),
                      cell(metrics.testing).c_str());
        s << line;
    };
    row("sum squared", [](const ErrorReport& r) { return r.sse; });
    row("mean squared", [](const ErrorReport& r) { return r.mse; });
    row("root mean sq", [](const ErrorReport& r) { return r.rmse; });
    row("normalized sq", [](const ErrorReport& r) { return r.nse; });
    row("cross entropy", [](const ErrorReport& r) { return r.cross_entropy; });
    row("minkowski", [](const ErrorReport& r) { return r.minkowski; });
    row("weighted sq", [](const ErrorReport& r) { return r.weighted_squared; });
    s << "\n";

    s << "== Confusion (" << subset_name(metrics.evaluated) << ", threshold "
      << format_double(metrics.confusion.threshold, 4) << ") ==\n";
    s << "                  predicted positive   predicted negative\n";
    char line[160];
    std::snprintf(line, sizeof(line), "actual positive   %18lld   %18lld\n",
                  static_cast<long long>(metrics.confusion.tp), static_cast<long long>(metrics.confusion.fn));
    s << line;
    std::snprintf(line, sizeof(line), "actual negative   %18lld   %18lld\n",
                  static_cast<long long>(metrics.confusion.fp), static_cast<long long>(metrics.confusion.tn));
    s << line;
    s << "accuracy  " << format_double(metrics.accuracy_percent, 6) << "%\n\n";

    s << "== Ranking quality (" << subset_name(metrics.evaluated) << ") ==\n";
    s << "auc                 " << format_double(metrics.roc.auc, 6) << "\n";
    s << "optimal threshold   " << format_double(metrics.roc.optimal_threshold, 6) << "\n";
    s << "maximum gain score  " << format_double(metrics.gain_lift.max_gain_score, 6) << " at instance ratio "
      << format_double(metrics.gain_lift.max_gain_ratio, 6) << "\n";
    return s.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    auto out = open_out(path);
    out << content;
    if (!out) throw DataError("write failed for '" + path.string() + "'");
}

void write_roc_csv(const std::filesystem::path& path, const RocCurve& curve) {
    auto out = open_out(path);
    out << "fpr,tpr,threshold\n";
    for (const auto& p : curve.points) {
        out << csv_num(p.fpr) << "," << csv_num(p.tpr) << "," << csv_num(p.threshold) << "\n";
    }
}

void write_gain_csv(const std::filesystem::path& path, const GainLiftCurves& curves) {
    auto out = open_out(path);
    out << "ratio,positive_gain,negative_gain\n";
    for (std::size_t i = 0; i < curves.positive_gain.size(); ++i) {
        out << csv_num(curves.positive_gain[i].first) << "," << csv_num(curves.positive_gain[i].second) << ","
            << csv_num(curves.negative_gain[i].second) << "\n";
    }
}

void write_lift_csv(const std::filesystem::path& path, const GainLiftCurves& curves) {
    auto out = open_out(path);
    out << "ratio,lift\n";
    for (const auto& [ratio, lift] : curves.lift) out << csv_num(ratio) << "," << csv_num(lift) << "\n";
}

void write_order_history_csv(const std::filesystem::path& path, const OrderSelectionResult& result) {
    auto out = open_out(path);
    out << "order,training_loss,selection_loss\n";
    for (const auto& rec : result.orders) {
        out << rec.order << "," << csv_num(rec.best_training_loss) << "," << csv_num(rec.best_selection_loss)
            << "\n";
    }
}

void write_train_log_csv(const std::filesystem::path& path, const TrainingLog& log) {
    auto out = open_out(path);
    out << "iteration,training_loss,selection_loss,gradient_norm,damping,step_norm,accepted\n";
    for (const auto& r : log.records) {
        out << r.iteration << "," << csv_num(r.training_loss) << "," << csv_num(r.selection_loss) << ","
            << csv_num(r.gradient_norm) << "," << csv_num(r.damping) << "," << csv_num(r.step_norm) << ","
            << (r.accepted ? 1 : 0) << "\n";
    }
}

void write_roc_svg(const std::filesystem::path& path, const RocCurve& curve) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(curve.points.size());
    for (const auto& p : curve.points) pts.emplace_back(p.fpr, p.tpr);
    write_text_file(path, svg_chart("ROC curve", "false positive rate", "true positive rate",
                                    {{"model", "#1f77b4", &pts}}, 1.0, true));
}

void write_gain_svg(const std::filesystem::path& path, const GainLiftCurves& curves) {
    write_text_file(path, svg_chart("Cumulative gain", "instance ratio", "fraction found",
                                    {{"positive", "#1f77b4", &curves.positive_gain},
                                     {"negative", "#d62728", &curves.negative_gain}},
                                    1.0, true));
}

void write_lift_svg(const std::filesystem::path& path, const GainLiftCurves& curves) {
    double y_max = 1.0;
    for (const auto& [ratio, lift] : curves.lift) y_max = std::max(y_max, lift);
    write_text_file(path, svg_chart("Lift", "instance ratio", "lift", {{"model", "#1f77b4", &curves.lift}},
                                    y_max * 1.05, false, 1.0));
}

}  // namespace lmnet
