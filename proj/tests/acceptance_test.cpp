// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Tolerances and runtime bounds are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/helpers.hpp"
#include "support/matching.hpp"
#include "trendcast/analysis.hpp"
#include "trendcast/benchmark.hpp"
#include "trendcast/corpus.hpp"
#include "trendcast/forecast.hpp"
#include "trendcast/metrics.hpp"
#include "trendcast/pipeline.hpp"
#include "trendcast/rng.hpp"
#include "trendcast/styles.hpp"
#include "trendcast/synth.hpp"
#include "trendcast/trajectory.hpp"

using namespace trendcast;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool condition, const std::string& message) {
        if (!condition && ok) {
            ok = false;
            detail = message;
        }
    }
};

void criterion(const std::string& name, double time_budget_seconds,
               const std::function<void(Check&)>& body) {
    Check check;
    auto start = std::chrono::steady_clock::now();
    try {
        body(check);
    } catch (const std::exception& e) {
        check.expect(false, std::string("exception: ") + e.what());
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                         .count();
    if (time_budget_seconds > 0)
        check.expect(elapsed < time_budget_seconds,
                     "runtime " + std::to_string(elapsed) + "s exceeds " +
                         std::to_string(time_budget_seconds) + "s");
    std::printf("[%s] %s (%.2fs)%s%s\n", check.ok ? "PASS" : "FAIL", name.c_str(), elapsed,
                check.ok ? "" : " -- ", check.ok ? "" : check.detail.c_str());
    std::fflush(stdout);
    if (!check.ok) ++g_failures;
}

TimeGrid grid72() {
    return TimeGrid::make(MonthRange::parse("2008-01:2011-12"),
                          MonthRange::parse("2012-01:2012-12"),
                          MonthRange::parse("2013-01:2013-12"));
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// --------------------------------------------------------------------------

void exp_dual_form(Check& check) {
    Rng rng(1);
    for (int round = 0; round < 1000; ++round) {
        std::vector<double> series(48);
        for (auto& v : series) v = rng.uniform();
        for (int step = 0; step <= 100; ++step) {
            double alpha = std::min(0.01 * step, 1.0);
            double recursive = exp_forecast(series, alpha, 1).predictions[0];
            double expanded = exp_level_expanded(series, alpha);
            if (std::abs(recursive - expanded) > 1e-10) {
                check.expect(false, "series " + std::to_string(round) + " alpha " + fmt(alpha) +
                                        " differs by " + fmt(std::abs(recursive - expanded)));
                return;
            }
        }
    }
}

SynthConfig recovery_config() {
    SynthConfig config;
    config.styles = 3;
    config.attributes = 50;
    config.items = 2000;
    config.months = 72;
    config.noise = 0.05;
    config.seed = 7;
    return config;
}

void planted_style_recovery(Check& check) {
    SynthData data = generate_synthetic(recovery_config());
    FeatureMatrix matrix = build_feature_matrix(data.items, AugmentMode::None, data.vocabulary);
    FitOptions options;
    options.k = 3;
    options.seed = 7;
    StyleModel model = fit_styles(matrix, options);
    auto cosines = tc_test::greedy_cosine_match(model.w, data.w_star);
    for (double cosine : cosines)
        check.expect(cosine >= 0.9, "matched cosine " + fmt(cosine) + " below 0.9");
}

void nmf_monotonicity(Check& check) {
    std::mt19937 eng(99);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int round = 0; round < 20; ++round) {
        FeatureMatrix matrix;
        matrix.values = Eigen::MatrixXd(30, 200);
        for (int r = 0; r < 30; ++r)
            for (int c = 0; c < 200; ++c) matrix.values(r, c) = dist(eng);
        matrix.attribute_rows = 30;
        for (int r = 0; r < 30; ++r) matrix.row_names.push_back("f" + std::to_string(r));
        for (int c = 0; c < 200; ++c) matrix.item_ids.push_back("x" + std::to_string(c));

        FitOptions options;
        options.k = 5;
        options.sparsity = 0.0;
        options.max_iters = 100;
        options.tol = 0.0;  // run the full budget
        options.seed = static_cast<std::uint64_t>(round);
        StyleModel model = fit_styles(matrix, options);
        for (std::size_t i = 1; i < model.objective_trace.size(); ++i) {
            double prev = model.objective_trace[i - 1];
            double slack = 1e-12 * std::max(1.0, std::abs(prev));
            if (model.objective_trace[i] > prev + slack) {
                check.expect(false, "matrix " + std::to_string(round) + " iteration " +
                                        std::to_string(i) + " rose by " +
                                        fmt(model.objective_trace[i] - prev));
                return;
            }
        }
    }
}

void trajectory_simplex(Check& check) {
    SynthConfig config = recovery_config();
    config.items = 600;  // plenty for a binning pipeline
    SynthData data = generate_synthetic(config);
    FeatureMatrix matrix = build_feature_matrix(data.items, AugmentMode::None, data.vocabulary);
    FitOptions options;
    options.k = 3;
    options.seed = 7;
    StyleModel model = fit_styles(matrix, options);

    TimeGrid grid = grid72();
    MonthlyBins bins = bin_transactions(data.log, grid);
    TrajectorySet trajectories = compute_trajectories(model, bins, grid);

    std::vector<bool> interpolated(static_cast<std::size_t>(grid.months), false);
    for (int i : trajectories.empty_bins) interpolated[static_cast<std::size_t>(i)] = true;
    for (int t = 0; t < grid.months; ++t) {
        if (interpolated[static_cast<std::size_t>(t)]) continue;
        double sum = trajectories.values.col(t).sum();
        check.expect(std::abs(sum - 1.0) <= 1e-9,
                     "month " + std::to_string(t) + " sums to " + fmt(sum));
    }
}

void ar1_recovery(Check& check) {
    std::vector<double> series(40);
    series[0] = 1.0;
    for (int t = 1; t < 40; ++t) series[static_cast<std::size_t>(t)] =
        0.8 * series[static_cast<std::size_t>(t - 1)];

    ForecastResult ar = ar_forecast(series, 1, false, 12);
    check.expect(ar.coefficients.size() == 2, "expected intercept and one lag coefficient");
    check.expect(std::abs(ar.coefficients[1] - 0.8) <= 1e-6,
                 "lag coefficient " + fmt(ar.coefficients[1]));
    check.expect(std::abs(ar.coefficients[0]) <= 1e-6, "intercept " + fmt(ar.coefficients[0]));

    auto var = var_forecast({series}, 1, 12);
    for (int h = 0; h < 12; ++h) {
        double gap = std::abs(var[0].predictions[static_cast<std::size_t>(h)] -
                              ar.predictions[static_cast<std::size_t>(h)]);
        check.expect(gap <= 1e-9, "step " + std::to_string(h) + " var-ar gap " + fmt(gap));
    }
}

void nn_gradient_check(Check& check) {
    for (int round = 0; round < 10; ++round) {
        Rng rng(static_cast<std::uint64_t>(round) + 100);
        NnDesign design;
        design.hidden = 4;
        design.inputs = Eigen::MatrixXd(15, 3);
        design.targets = Eigen::VectorXd(15);
        for (int r = 0; r < 15; ++r) {
            for (int c = 0; c < 3; ++c) design.inputs(r, c) = rng.uniform();
            design.targets[r] = rng.uniform();
        }
        Eigen::VectorXd weights(nn_weight_count(3, 4));
        for (Eigen::Index i = 0; i < weights.size(); ++i) weights[i] = rng.uniform(-0.5, 0.5);

        Eigen::VectorXd analytic = nn_gradient(design, weights);
        const double step = 1e-5;
        double worst = 0.0;
        for (Eigen::Index i = 0; i < weights.size(); ++i) {
            Eigen::VectorXd up = weights, down = weights;
            up[i] += step;
            down[i] -= step;
            double numeric = (nn_loss(design, up) - nn_loss(design, down)) / (2.0 * step);
            double denom = std::max({std::abs(numeric), std::abs(analytic[i]), 1e-6});
            worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
        }
        check.expect(worst <= 1e-4,
                     "seed " + std::to_string(round) + " max relative error " + fmt(worst));
    }
}

void benchmark_ordering(Check& check) {
    SynthConfig config;
    config.styles = 3;
    config.attributes = 30;
    config.items = 200;
    config.months = 72;
    config.shapes = {TrendShape::parse("rw_decay:0.12"), TrendShape::parse("rw_decay:0.1"),
                     TrendShape::parse("rw_decay:0.08")};
    config.seed = 7;
    SynthData data = generate_synthetic(config);

    TrajectorySet trajectories;
    trajectories.grid = grid72();
    trajectories.values = data.trajectories;

    BenchmarkOptions options;
    options.models = {ModelFamily::NaiveMean, ModelFamily::NaiveLast, ModelFamily::Exp};
    options.seed = 7;
    MetricReport report = run_benchmark(trajectories, trajectories.grid, options);

    const ModelReport* mean_row = nullptr;
    const ModelReport* last_row = nullptr;
    const ModelReport* exp_row = nullptr;
    for (const auto& m : report.models) {
        if (m.model == "mean") mean_row = &m;
        if (m.model == "last") last_row = &m;
        if (m.model == "exp") exp_row = &m;
    }
    check.expect(exp_row && mean_row && last_row, "missing model rows");
    if (!check.ok) return;
    check.expect(exp_row->aggregate_mape < mean_row->aggregate_mape,
                 "exp MAPE " + fmt(exp_row->aggregate_mape) + " not below mean MAPE " +
                     fmt(mean_row->aggregate_mape));
    check.expect(exp_row->aggregate_mae <= last_row->aggregate_mae + 1e-9,
                 "exp MAE " + fmt(exp_row->aggregate_mae) + " above last MAE " +
                     fmt(last_row->aggregate_mae));
}

void attribute_normalization(Check& check) {
    std::mt19937 eng(5);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int round = 0; round < 100; ++round) {
        const int m = 8 + static_cast<int>(eng() % 9);
        const int n = 20 + static_cast<int>(eng() % 10);
        const int k = 2 + static_cast<int>(eng() % 3);

        FeatureMatrix matrix;
        matrix.values = Eigen::MatrixXd(m, n);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < n; ++c) matrix.values(r, c) = dist(eng);
        matrix.attribute_rows = static_cast<std::size_t>(m);
        for (int r = 0; r < m; ++r) matrix.row_names.push_back("f" + std::to_string(r));
        for (int c = 0; c < n; ++c) matrix.item_ids.push_back("x" + std::to_string(c));

        FitOptions options;
        options.k = k;
        options.max_iters = 60;
        options.seed = static_cast<std::uint64_t>(round);
        StyleModel model = fit_styles(matrix, options);

        std::vector<double> forecast(static_cast<std::size_t>(k));
        double total = 0.0;
        for (auto& v : forecast) {
            v = dist(eng);
            total += v;
        }
        for (auto& v : forecast) v /= total;

        AttributeForecast attr = forecast_attributes(model, forecast);
        double sum = 0.0;
        for (double v : attr.probabilities) sum += v;
        if (std::abs(sum - 1.0) > 1e-9) {
            check.expect(false, "round " + std::to_string(round) + " sums to " + fmt(sum));
            return;
        }
    }

    // one-hot columns marginalize exactly
    StyleModel model;
    model.k = 2;
    model.attribute_rows = 3;
    model.feature_names = {"a0", "a1", "a2"};
    model.w = Eigen::MatrixXd::Zero(3, 2);
    model.w(0, 0) = 1.0;
    model.w(1, 1) = 1.0;
    AttributeForecast attr = forecast_attributes(model, {0.7, 0.3});
    check.expect(attr.probabilities[0] == 0.7 && attr.probabilities[1] == 0.3 &&
                     attr.probabilities[2] == 0.0,
                 "one-hot marginalization is inexact");
}

void kl_properties(Check& check) {
    std::mt19937 eng(8);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int round = 0; round < 1000; ++round) {
        const int k = 3 + static_cast<int>(eng() % 6);
        std::vector<double> p(static_cast<std::size_t>(k)), q(static_cast<std::size_t>(k));
        double sp = 0.0, sq = 0.0;
        for (int i = 0; i < k; ++i) {
            p[static_cast<std::size_t>(i)] = dist(eng);
            q[static_cast<std::size_t>(i)] = dist(eng);
            sp += p[static_cast<std::size_t>(i)];
            sq += q[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < k; ++i) {
            p[static_cast<std::size_t>(i)] /= sp;
            q[static_cast<std::size_t>(i)] /= sq;
        }
        double kl = kl_divergence(p, q);
        if (kl < -1e-12) {
            check.expect(false, "negative divergence " + fmt(kl));
            return;
        }
        double self = kl_divergence(p, p);
        if (std::abs(self) > 1e-9) {
            check.expect(false, "self divergence " + fmt(self));
            return;
        }
    }
    double hand = kl_divergence({0.5, 0.5}, {0.25, 0.75});
    check.expect(std::abs(hand - 0.1438) <= 1e-3, "hand value " + fmt(hand));
}

void rank_intersection_cases(Check& check) {
    std::map<std::string, double> predicted, truth;
    for (int i = 0; i < 60; ++i) {
        char id[8];
        std::snprintf(id, sizeof(id), "a%02d", i);
        predicted[id] = 60.0 - i;
        truth[id] = 60.0 - i;
    }
    for (std::size_t top : {std::size_t{10}, std::size_t{25}, std::size_t{50}})
        check.expect(rank_intersection(predicted, truth, top) == 1.0,
                     "perfect forecast below 1.0 at top " + std::to_string(top));

    // disjoint top-10 sets
    std::map<std::string, double> flipped;
    for (int i = 0; i < 60; ++i) {
        char id[8];
        std::snprintf(id, sizeof(id), "a%02d", i);
        flipped[id] = static_cast<double>(i);
    }
    check.expect(rank_intersection(flipped, truth, 10) == 0.0, "disjoint top sets above 0.0");
}

void dynamics_oracle(Check& check) {
    const std::vector<std::pair<std::string, Dynamics>> expected = {
        {"linear:0.5", Dynamics::Trending},
        {"flat:0.45", Dynamics::Classic},
        {"logistic_decline", Dynamics::OutOfFashion},
        {"flat:0.05", Dynamics::Unpopular},
        {"trough", Dynamics::ReEmerging},
    };
    TrajectorySet trajectories;
    trajectories.grid = grid72();
    trajectories.values = Eigen::MatrixXd(5, 72);
    for (std::size_t k = 0; k < expected.size(); ++k) {
        TrendShape shape = TrendShape::parse(expected[k].first);
        for (int t = 0; t < 72; ++t)
            trajectories.values(static_cast<Eigen::Index>(k), t) = trend_shape_value(shape, t, 72);
    }
    auto labels = classify_dynamics(trajectories);
    for (std::size_t k = 0; k < expected.size(); ++k)
        check.expect(labels[k].label == expected[k].second,
                     expected[k].first + " classified as " + dynamics_name(labels[k].label));
}

std::map<std::string, std::string> artifact_bytes(const std::string& root) {
    std::map<std::string, std::string> bytes;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        bytes[fs::relative(entry.path(), root).string()] =
            tc_test::read_file(entry.path().string());
    }
    return bytes;
}

void run_full_pipeline(const std::string& out, double* seconds) {
    auto start = std::chrono::steady_clock::now();
    auto config = [&](const std::string& extra) {
        return std::string("{\"out\":\"") + out + "\",\"seed\":7" + extra + "}";
    };
    const std::string ranges =
        ",\"train\":\"2008-01:2011-12\",\"val\":\"2012-01:2012-12\",\"test\":\"2013-01:2013-12\"";
    run_command("synth", config(",\"k\":3,\"m_attrs\":50,\"n_items\":2000,\"months\":72,"
                                "\"noise\":0.05"));
    run_command("discover", config(",\"items\":\"" + out + "/items.jsonl\",\"vocab\":\"" + out +
                                   "/vocabulary.txt\",\"k\":3"));
    run_command("trajectories", config(",\"items\":\"" + out + "/items.jsonl\",\"vocab\":\"" +
                                       out + "/vocabulary.txt\",\"transactions\":\"" + out +
                                       "/transactions.csv\"" + ranges));
    run_command("forecast", config(ranges));
    run_command("evaluate", config(ranges));
    run_command("dynamics", config(ranges));
    run_command("attributes", config(ranges));
    run_command("report", config(ranges));
    *seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void pipeline_determinism(Check& check) {
    tc_test::TempDir dir("tc-acceptance");
    double first_seconds = 0.0, second_seconds = 0.0;

    // keep pipeline chatter off the criterion report
    std::ostringstream sink;
    auto* old_buf = std::cout.rdbuf(sink.rdbuf());
    try {
        run_full_pipeline(dir.file("a"), &first_seconds);
        run_full_pipeline(dir.file("b"), &second_seconds);
    } catch (...) {
        std::cout.rdbuf(old_buf);
        throw;
    }
    std::cout.rdbuf(old_buf);

    check.expect(first_seconds < 60.0,
                 "first run took " + std::to_string(first_seconds) + "s");
    check.expect(second_seconds < 60.0,
                 "second run took " + std::to_string(second_seconds) + "s");

    auto a = artifact_bytes(dir.file("a"));
    auto b = artifact_bytes(dir.file("b"));
    check.expect(a.size() == b.size() && !a.empty(), "artifact sets differ in size");
    for (const auto& [name, bytes] : a) {
        auto it = b.find(name);
        if (it == b.end() || it->second != bytes) {
            check.expect(false, "artifact '" + name + "' differs between runs");
            return;
        }
    }
    for (const char* artifact :
         {"items.jsonl", "vocabulary.txt", "transactions.csv", "truth.json", "styles.json",
          "trajectories.csv", "forecasts.json", "report.json", "report.md",
          "report_per_style.csv", "dynamics.json", "attributes_forecast.csv", "wordcloud.csv",
          "plots/style_000.svg"})
        check.expect(a.count(artifact) == 1, std::string("missing artifact ") + artifact);
}

}  // namespace

int main() {
    criterion("exp-dual-form", 5.0, exp_dual_form);
    criterion("planted-style-recovery", 30.0, planted_style_recovery);
    criterion("nmf-objective-monotonicity", 0.0, nmf_monotonicity);
    criterion("trajectory-simplex", 0.0, trajectory_simplex);
    criterion("ar1-recovery", 0.0, ar1_recovery);
    criterion("nn-gradient-check", 0.0, nn_gradient_check);
    criterion("benchmark-ordering", 0.0, benchmark_ordering);
    criterion("attribute-forecast-normalization", 0.0, attribute_normalization);
    criterion("kl-properties", 0.0, kl_properties);
    criterion("rank-intersection", 0.0, rank_intersection_cases);
    criterion("dynamics-oracle", 0.0, dynamics_oracle);
    criterion("pipeline-determinism", 0.0, pipeline_determinism);

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
