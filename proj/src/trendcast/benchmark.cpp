// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#include "trendcast/benchmark.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

#include "trendcast/error.hpp"
#include "trendcast/parallel.hpp"

namespace trendcast {

using nlohmann::json;

namespace {

std::vector<double> window(const TrajectorySet& t, int style, int begin, int end) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(end - begin));
    for (int i = begin; i < end; ++i) out.push_back(t.values(style, i));
    return out;
}

// Deterministic per-cell seed so parallel scheduling cannot change results.
std::uint64_t cell_seed(std::uint64_t base, int style, ModelFamily family) {
    return base * 1000003ULL + static_cast<std::uint64_t>(style) * 131ULL +
           static_cast<std::uint64_t>(family) * 7ULL;
}

std::vector<double> renormalized_mean(const std::vector<std::vector<double>>& vectors) {
    std::vector<double> mean(vectors[0].size(), 0.0);
    for (const auto& v : vectors)
        for (std::size_t i = 0; i < v.size(); ++i) mean[i] += v[i];
    double total = 0.0;
    for (double& v : mean) {
        v = std::max(v, 0.0);
        total += v;
    }
    if (total > 0.0)
        for (double& v : mean) v /= total;
    else
        for (double& v : mean) v = 1.0 / static_cast<double>(mean.size());
    return mean;
}

}  // namespace

MetricReport run_benchmark(const TrajectorySet& trajectories, const TimeGrid& grid,
                           const BenchmarkOptions& options) {
    if (options.models.empty()) fail(ErrorKind::InvalidArgument, "no models requested");
    const int styles = trajectories.styles();
    const int train_begin = grid.train_begin();
    const int train_end = grid.train_end();
    const int val_end = grid.validation_end();
    const int test_begin = grid.test_begin();
    const int test_end = grid.test_end();
    const int horizon = test_end - test_begin;
    if (horizon < 1) fail(ErrorKind::Validation, "empty test window");

    MetricReport report;
    report.styles = styles;
    report.train_range = grid.train.str();
    report.validation_range = grid.validation.str();
    report.test_range = grid.test.str();
    report.models.resize(options.models.size());

    // Per-style truth over the test window, shared by every model.
    std::vector<std::vector<double>> test_truth;
    test_truth.reserve(static_cast<std::size_t>(styles));
    for (int s = 0; s < styles; ++s)
        test_truth.push_back(window(trajectories, s, test_begin, test_end));

    for (std::size_t m = 0; m < options.models.size(); ++m) {
        const ModelFamily family = options.models[m];
        ModelReport& model_report = report.models[m];
        model_report.model = model_family_name(family);
        model_report.cells.resize(static_cast<std::size_t>(styles));

        if (family == ModelFamily::Var) {
            // Joint model: one lag order for the whole panel.
            try {
                std::vector<std::vector<double>> train_panel, val_panel, full_panel;
                for (int s = 0; s < styles; ++s) {
                    train_panel.push_back(window(trajectories, s, train_begin, train_end));
                    val_panel.push_back(window(trajectories, s, train_end, val_end));
                    full_panel.push_back(window(trajectories, s, train_begin, val_end));
                }
                Selection sel = select_var_hyperparams(train_panel, val_panel, options.grids);
                auto results = var_forecast(full_panel,
                                            static_cast<int>(sel.hyperparams.at("p")), horizon);
                for (int s = 0; s < styles; ++s) {
                    BenchmarkCell& cell = model_report.cells[static_cast<std::size_t>(s)];
                    cell.style = s;
                    cell.hyperparams = sel.hyperparams;
                    cell.predictions = results[static_cast<std::size_t>(s)].predictions;
                }
            } catch (const Error& e) {
                for (int s = 0; s < styles; ++s) {
                    BenchmarkCell& cell = model_report.cells[static_cast<std::size_t>(s)];
                    cell.style = s;
                    cell.error = e.what();
                }
            }
        } else {
            parallel_for(static_cast<std::size_t>(styles), [&](std::size_t s) {
                BenchmarkCell& cell = model_report.cells[s];
                cell.style = static_cast<int>(s);
                try {
                    auto train = window(trajectories, static_cast<int>(s), train_begin, train_end);
                    auto validation =
                        window(trajectories, static_cast<int>(s), train_end, val_end);
                    auto full = window(trajectories, static_cast<int>(s), train_begin, val_end);
                    const std::uint64_t seed =
                        cell_seed(options.seed, static_cast<int>(s), family);
                    Selection sel =
                        select_hyperparams(family, train, validation, options.grids, seed);
                    ForecastResult r =
                        forecast_with(family, full, sel.hyperparams, horizon, seed);
                    cell.hyperparams = sel.hyperparams;
                    cell.predictions = r.predictions;
                } catch (const std::exception& e) {
                    cell.error = e.what();
                }
            });
        }

        // Score cells and aggregate over styles.
        double mae_total = 0.0, mape_total = 0.0;
        std::size_t ok_count = 0, mape_count = 0;
        std::vector<std::vector<double>> forecast_vectors;
        bool all_ok = true;
        for (int s = 0; s < styles; ++s) {
            BenchmarkCell& cell = model_report.cells[static_cast<std::size_t>(s)];
            if (!cell.ok()) {
                ++model_report.failures;
                all_ok = false;
                continue;
            }
            cell.mae = mae(test_truth[static_cast<std::size_t>(s)], cell.predictions);
            MapeResult mp = mape(test_truth[static_cast<std::size_t>(s)], cell.predictions);
            cell.mape = mp.value;
            cell.mape_skipped = mp.skipped;
            mae_total += cell.mae;
            ++ok_count;
            if (std::isfinite(cell.mape)) {
                mape_total += cell.mape;
                ++mape_count;
            }
            forecast_vectors.push_back(cell.predictions);
        }
        model_report.aggregate_mae =
            ok_count > 0 ? mae_total / static_cast<double>(ok_count)
                         : std::numeric_limits<double>::quiet_NaN();
        model_report.aggregate_mape =
            mape_count > 0 ? mape_total / static_cast<double>(mape_count)
                           : std::numeric_limits<double>::quiet_NaN();

        if (all_ok && styles > 0) {
            // Aggregate test-year distributions: mean of per-month vectors,
            // renormalized, forecast vs actual.
            std::vector<std::vector<double>> forecast_months, actual_months;
            for (int t = 0; t < horizon; ++t) {
                std::vector<double> f(static_cast<std::size_t>(styles));
                std::vector<double> a(static_cast<std::size_t>(styles));
                for (int s = 0; s < styles; ++s) {
                    f[static_cast<std::size_t>(s)] =
                        model_report.cells[static_cast<std::size_t>(s)]
                            .predictions[static_cast<std::size_t>(t)];
                    a[static_cast<std::size_t>(s)] =
                        test_truth[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)];
                }
                forecast_months.push_back(std::move(f));
                actual_months.push_back(std::move(a));
            }
            auto forecast_dist = renormalized_mean(forecast_months);
            auto actual_dist = renormalized_mean(actual_months);
            model_report.kl = kl_divergence(forecast_dist, actual_dist);
        } else {
            model_report.kl = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return report;
}

namespace {

json cell_to_json(const BenchmarkCell& cell) {
    json j;
    j["style"] = cell.style;
    if (!cell.ok()) {
        j["error"] = cell.error;
        return j;
    }
    j["hyperparams"] = cell.hyperparams;
    j["predictions"] = cell.predictions;
    j["mae"] = cell.mae;
    if (std::isfinite(cell.mape)) j["mape"] = cell.mape;
    if (cell.mape_skipped > 0) j["mape_skipped"] = cell.mape_skipped;
    return j;
}

std::string fmt(double v) {
    if (!std::isfinite(v)) return "n/a";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

std::string report_markdown_table(const MetricReport& report) {
    std::ostringstream out;
    out << "| Model | MAE | MAPE | KL |\n";
    out << "|-------|-----|------|----|\n";
    for (const auto& m : report.models) {
        out << "| " << m.model << " | " << fmt(m.aggregate_mae) << " | "
            << fmt(m.aggregate_mape) << " | " << fmt(m.kl) << " |";
        if (m.failures > 0) out << " (" << m.failures << " failed)";
        out << "\n";
    }
    return out.str();
}

void save_report_json(const MetricReport& report, const std::string& path) {
    json doc;
    doc["styles"] = report.styles;
    doc["train"] = report.train_range;
    doc["validation"] = report.validation_range;
    doc["test"] = report.test_range;
    json models = json::array();
    for (const auto& m : report.models) {
        json entry;
        entry["model"] = m.model;
        entry["aggregate_mae"] = m.aggregate_mae;
        if (std::isfinite(m.aggregate_mape)) entry["aggregate_mape"] = m.aggregate_mape;
        if (std::isfinite(m.kl)) entry["kl"] = m.kl;
        entry["failures"] = m.failures;
        json cells = json::array();
        for (const auto& cell : m.cells) cells.push_back(cell_to_json(cell));
        entry["styles"] = cells;
        models.push_back(entry);
    }
    doc["models"] = models;
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write '" + path + "'");
    out << doc.dump(2) << "\n";
}

void save_report_markdown(const MetricReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write '" + path + "'");
    out << "# Forecast benchmark\n\n";
    out << "Styles: " << report.styles << "  \n";
    out << "Train " << report.train_range << ", validation " << report.validation_range
        << ", test " << report.test_range << "\n\n";
    out << report_markdown_table(report);
}

void save_report_csv(const MetricReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write '" + path + "'");
    out << "model,style,mae,mape,error\n";
    char buf[32];
    for (const auto& m : report.models) {
        for (const auto& cell : m.cells) {
            out << m.model << "," << cell.style << ",";
            if (cell.ok()) {
                std::snprintf(buf, sizeof(buf), "%.17g", cell.mae);
                out << buf << ",";
                if (std::isfinite(cell.mape)) {
                    std::snprintf(buf, sizeof(buf), "%.17g", cell.mape);
                    out << buf;
                }
                out << ",";
            } else {
                out << ",,\"" << cell.error << "\"";
            }
            out << "\n";
        }
    }
}

}  // namespace trendcast
