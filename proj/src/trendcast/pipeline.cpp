// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#include "trendcast/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <nlohmann/json.hpp>
#include <optional>

#include "trendcast/analysis.hpp"
#include "trendcast/benchmark.hpp"
#include "trendcast/corpus.hpp"
#include "trendcast/error.hpp"
#include "trendcast/forecast.hpp"
#include "trendcast/styles.hpp"
#include "trendcast/synth.hpp"
#include "trendcast/trajectory.hpp"

namespace trendcast {

using nlohmann::json;

namespace {

struct RunConfig {
    json raw;

    [[noreturn]] static void bad_type(const char* key) {
        fail(ErrorKind::Validation, std::string("config field '") + key + "' has the wrong type");
    }

    std::string require_string(const char* key) const {
        if (!raw.contains(key) || !raw[key].is_string() || raw[key].get<std::string>().empty())
            fail(ErrorKind::Validation, std::string("config field '") + key + "' is required");
        return raw[key].get<std::string>();
    }
    std::string string_or(const char* key, const std::string& fallback) const {
        if (!raw.contains(key)) return fallback;
        if (!raw[key].is_string()) bad_type(key);
        return raw[key].get<std::string>();
    }
    double number_or(const char* key, double fallback) const {
        if (!raw.contains(key)) return fallback;
        if (!raw[key].is_number()) bad_type(key);
        return raw[key].get<double>();
    }
    int int_or(const char* key, int fallback) const {
        if (!raw.contains(key)) return fallback;
        if (!raw[key].is_number_integer()) bad_type(key);
        return raw[key].get<int>();
    }
    std::uint64_t require_seed() const {
        if (!raw.contains("seed") || !raw["seed"].is_number())
            fail(ErrorKind::Validation, "config field 'seed' is required (no silent default)");
        return raw["seed"].get<std::uint64_t>();
    }
    bool has(const char* key) const { return raw.contains(key) && !raw[key].is_null(); }
};

TimeGrid grid_from(const RunConfig& config) {
    MonthRange train = MonthRange::parse(config.require_string("train"));
    MonthRange validation = MonthRange::parse(config.require_string("val"));
    MonthRange test = MonthRange::parse(config.require_string("test"));
    return TimeGrid::make(train, validation, test);
}

std::string out_dir(const RunConfig& config) {
    std::string dir = config.require_string("out");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(ErrorKind::Io, "cannot create '" + dir + "': " + ec.message());
    return dir;
}

void require_artifact(const std::string& path) {
    if (!std::filesystem::exists(path))
        fail(ErrorKind::MissingInput, "missing input '" + path + "'");
}

std::vector<ModelFamily> models_from(const RunConfig& config,
                                     const std::vector<std::string>& fallback) {
    std::vector<std::string> names = fallback;
    if (config.has("models")) {
        if (!config.raw["models"].is_array()) RunConfig::bad_type("models");
        names.clear();
        for (const auto& entry : config.raw["models"]) {
            if (!entry.is_string()) RunConfig::bad_type("models");
            names.push_back(entry.get<std::string>());
        }
    }
    if (names.empty()) fail(ErrorKind::Validation, "empty model list");
    std::vector<ModelFamily> models;
    models.reserve(names.size());
    for (const auto& name : names) models.push_back(parse_model_family(name));
    return models;
}

HyperGrids grids_from(const RunConfig& config) {
    HyperGrids grids;
    grids.alpha_step = config.number_or("alpha_grid_step", 0.01);
    if (grids.alpha_step <= 0.0 || grids.alpha_step > 1.0)
        fail(ErrorKind::Validation, "alpha_grid_step must lie in (0,1]");
    return grids;
}

SynthConfig synth_config_from(const RunConfig& config) {
    SynthConfig sc;
    sc.styles = config.int_or("k", 3);
    sc.attributes = config.int_or("m_attrs", 50);
    sc.items = config.int_or("n_items", 500);
    sc.months = config.int_or("months", 72);
    sc.start = YearMonth::parse(config.string_or("start", "2008-01"));
    if (config.has("shapes")) {
        for (const auto& entry : config.raw["shapes"])
            sc.shapes.push_back(TrendShape::parse(entry.get<std::string>()));
    }
    sc.seasonal_amplitude = config.number_or("seasonal_amp", 0.0);
    sc.noise = config.number_or("noise", 0.0);
    sc.transactions_per_month = config.int_or("tx_per_month", 200);
    sc.seed = config.require_seed();
    return sc;
}

struct LoadedCorpus {
    AttributeVocabulary vocabulary;
    std::vector<Item> items;
};

LoadedCorpus load_corpus(const RunConfig& config) {
    LoadedCorpus corpus;
    corpus.vocabulary = load_vocabulary(config.require_string("vocab"));
    corpus.items = load_items(config.require_string("items"), corpus.vocabulary);
    return corpus;
}

// ---------------------------------------------------------------------------

void cmd_synth(const RunConfig& config) {
    SynthConfig sc = synth_config_from(config);
    std::string dir = out_dir(config);
    SynthData data = generate_synthetic(sc);
    write_synth_files(data, dir);
    std::cout << "synth: wrote " << data.items.size() << " items, " << data.log.events.size()
              << " transactions, " << sc.months << " months (K*=" << sc.styles << ")\n";
}

void cmd_discover(const RunConfig& config) {
    LoadedCorpus corpus = load_corpus(config);
    AugmentMode mode = parse_augment_mode(config.string_or("augment", "none"));
    FeatureMatrix matrix = build_feature_matrix(corpus.items, mode, corpus.vocabulary);

    FitOptions options;
    options.k = config.int_or("k", 30);
    options.sparsity = config.number_or("sparsity", 0.1);
    options.max_iters = config.int_or("max_iters", 500);
    options.tol = config.number_or("tol", 1e-6);
    options.seed = config.require_seed();

    StyleModel model = fit_styles(matrix, options);
    if (!model.degenerate_items.empty())
        std::cerr << "warning: " << model.degenerate_items.size()
                  << " all-zero items, style mixture set uniform\n";
    std::string dir = out_dir(config);
    save_style_model(model, dir + "/styles.json");
    std::cout << "discover: fitted K=" << model.k << " styles over "
              << model.feature_names.size() << " features, "
              << model.objective_trace.size() << " iterations (objective "
              << (model.objective_trace.empty() ? 0.0 : model.objective_trace.back()) << ")\n";
}

void cmd_trajectories(const RunConfig& config) {
    std::string dir = out_dir(config);
    require_artifact(dir + "/styles.json");
    StyleModel model = load_style_model(dir + "/styles.json");
    LoadedCorpus corpus = load_corpus(config);
    TransactionLog log = load_transactions(config.require_string("transactions"), corpus.items);
    TimeGrid grid = grid_from(config);
    MonthlyBins bins = bin_transactions(log, grid);
    if (bins.dropped > 0)
        std::cerr << "warning: dropped " << bins.dropped << " out-of-grid transactions\n";
    TrajectorySet trajectories = compute_trajectories(model, bins, grid);
    save_trajectories(trajectories, dir + "/trajectories.csv",
                      dir + "/trajectories_interpolated.txt");
    std::cout << "trajectories: " << trajectories.styles() << " styles x "
              << trajectories.months() << " months, " << trajectories.empty_bins.size()
              << " interpolated\n";
}

// Per-style selection, refit on train+validation, test-window forecast.
void cmd_forecast(const RunConfig& config) {
    std::string dir = out_dir(config);
    require_artifact(dir + "/trajectories.csv");
    TimeGrid grid = grid_from(config);
    TrajectorySet trajectories = load_trajectories(dir + "/trajectories.csv", grid);

    std::vector<ModelFamily> models = models_from(config, {"exp"});
    if (models.size() != 1)
        fail(ErrorKind::Validation, "forecast takes exactly one model (use evaluate to compare)");
    const ModelFamily family = models[0];
    const std::uint64_t seed = config.require_seed();
    HyperGrids grids = grids_from(config);

    const int train_begin = grid.train_begin();
    const int train_end = grid.train_end();
    const int val_end = grid.validation_end();
    const int test_begin = grid.test_begin();
    const int test_end = grid.test_end();
    const int horizon = test_end - test_begin;
    const int styles = trajectories.styles();

    auto window = [&](int style, int begin, int end) {
        std::vector<double> out;
        for (int i = begin; i < end; ++i) out.push_back(trajectories.values(style, i));
        return out;
    };

    json doc;
    doc["model"] = model_family_name(family);
    doc["train"] = grid.train.str();
    doc["val"] = grid.validation.str();
    doc["test"] = grid.test.str();
    doc["seed"] = seed;
    doc["alpha_grid_step"] = grids.alpha_step;
    json style_entries = json::array();

    if (family == ModelFamily::Var) {
        std::vector<std::vector<double>> train_panel, val_panel, full_panel;
        for (int s = 0; s < styles; ++s) {
            train_panel.push_back(window(s, train_begin, train_end));
            val_panel.push_back(window(s, train_end, val_end));
            full_panel.push_back(window(s, train_begin, val_end));
        }
        Selection sel = select_var_hyperparams(train_panel, val_panel, grids);
        auto results = var_forecast(full_panel, static_cast<int>(sel.hyperparams.at("p")),
                                    horizon);
        for (int s = 0; s < styles; ++s) {
            json entry;
            entry["style"] = s;
            entry["hyperparams"] = sel.hyperparams;
            entry["predictions"] = results[static_cast<std::size_t>(s)].predictions;
            auto truth = window(s, test_begin, test_end);
            entry["mae"] = mae(truth, results[static_cast<std::size_t>(s)].predictions);
            MapeResult mp = mape(truth, results[static_cast<std::size_t>(s)].predictions);
            if (std::isfinite(mp.value)) entry["mape"] = mp.value;
            style_entries.push_back(entry);
        }
    } else {
        for (int s = 0; s < styles; ++s) {
            auto train = window(s, train_begin, train_end);
            auto validation = window(s, train_end, val_end);
            auto full = window(s, train_begin, val_end);
            Selection sel = select_hyperparams(family, train, validation, grids, seed);
            ForecastResult result = forecast_with(family, full, sel.hyperparams, horizon, seed);
            json entry;
            entry["style"] = s;
            entry["hyperparams"] = sel.hyperparams;
            entry["predictions"] = result.predictions;
            auto truth = window(s, test_begin, test_end);
            entry["mae"] = mae(truth, result.predictions);
            MapeResult mp = mape(truth, result.predictions);
            if (std::isfinite(mp.value)) entry["mape"] = mp.value;
            if (mp.skipped > 0) entry["mape_skipped"] = mp.skipped;
            style_entries.push_back(entry);
        }
    }
    doc["styles"] = style_entries;

    std::ofstream out(dir + "/forecasts.json", std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write '" + dir + "/forecasts.json'");
    out << doc.dump(2) << "\n";
    std::cout << "forecast: " << model_family_name(family) << " over " << styles
              << " styles, horizon " << horizon << "\n";
}

void cmd_evaluate(const RunConfig& config) {
    std::string dir = out_dir(config);
    require_artifact(dir + "/trajectories.csv");
    TimeGrid grid = grid_from(config);
    TrajectorySet trajectories = load_trajectories(dir + "/trajectories.csv", grid);

    BenchmarkOptions options;
    options.models = models_from(config, {"mean", "last", "drift", "exp", "ar", "ars", "var",
                                          "arima", "tlnn", "ffnn"});
    options.grids = grids_from(config);
    options.seed = config.require_seed();

    MetricReport report = run_benchmark(trajectories, grid, options);
    save_report_json(report, dir + "/report.json");
    save_report_markdown(report, dir + "/report.md");
    save_report_csv(report, dir + "/report_per_style.csv");

    std::size_t failures = 0;
    for (const auto& m : report.models) failures += m.failures;
    if (failures > 0)
        std::cerr << "warning: " << failures << " model/style cells failed; see report.json\n";
    std::cout << "evaluate: " << report.models.size() << " models x " << report.styles
              << " styles\n" << report_markdown_table(report);
}

void cmd_dynamics(const RunConfig& config) {
    std::string dir = out_dir(config);
    require_artifact(dir + "/trajectories.csv");
    TimeGrid grid = grid_from(config);
    TrajectorySet trajectories = load_trajectories(dir + "/trajectories.csv", grid);

    DynamicsOptions options;
    if (config.has("theta")) options.theta = config.raw["theta"].get<double>();
    auto labels = classify_dynamics(trajectories, options);
    save_dynamics(labels, dir + "/dynamics.json");
    std::cout << "dynamics:";
    for (const auto& label : labels)
        std::cout << " style_" << label.style << "=" << dynamics_name(label.label);
    std::cout << "\n";
}

// Mean of the per-month forecast distribution over the test window.
std::vector<double> aggregate_forecast_distribution(const json& forecasts, int styles) {
    std::vector<double> dist(static_cast<std::size_t>(styles), 0.0);
    for (const auto& entry : forecasts.at("styles")) {
        int s = entry.at("style").get<int>();
        const auto& predictions = entry.at("predictions");
        double mean = 0.0;
        for (const auto& v : predictions) mean += v.get<double>();
        if (!predictions.empty()) mean /= static_cast<double>(predictions.size());
        dist[static_cast<std::size_t>(s)] = std::max(mean, 0.0);
    }
    double total = 0.0;
    for (double v : dist) total += v;
    if (total > 0.0)
        for (double& v : dist) v /= total;
    else
        for (double& v : dist) v = 1.0 / static_cast<double>(styles);
    return dist;
}

json read_json_artifact(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::MissingInput, "cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, path + ": " + e.what());
    }
    return doc;
}

void cmd_attributes(const RunConfig& config) {
    std::string dir = out_dir(config);
    require_artifact(dir + "/styles.json");
    require_artifact(dir + "/forecasts.json");
    StyleModel model = load_style_model(dir + "/styles.json");
    json forecasts = read_json_artifact(dir + "/forecasts.json");

    auto dist = aggregate_forecast_distribution(forecasts, model.k);
    std::string label = forecasts.value("test", "");
    AttributeForecast forecast = forecast_attributes(model, dist, label);
    save_attribute_forecast(forecast, model, dir + "/attributes_forecast.csv");
    std::cout << "attributes: ranked " << forecast.ranking.size() << " attributes for " << label
              << "\n";
}

void cmd_report(const RunConfig& config) {
    std::string dir = out_dir(config);
    require_artifact(dir + "/styles.json");
    require_artifact(dir + "/trajectories.csv");
    TimeGrid grid = grid_from(config);
    StyleModel model = load_style_model(dir + "/styles.json");
    TrajectorySet trajectories = load_trajectories(dir + "/trajectories.csv", grid);

    ReportInputs inputs;
    inputs.model = &model;
    inputs.trajectories = &trajectories;

    // Optional artifacts: fold in whatever earlier stages produced.
    std::optional<MetricReport> benchmark;
    std::vector<DynamicsLabel> dynamics;
    std::optional<AttributeForecast> attributes;

    if (std::filesystem::exists(dir + "/forecasts.json")) {
        json forecasts = read_json_artifact(dir + "/forecasts.json");
        inputs.forecast_model = forecasts.value("model", "");
        inputs.forecasts.assign(static_cast<std::size_t>(model.k), {});
        for (const auto& entry : forecasts.at("styles")) {
            int s = entry.at("style").get<int>();
            inputs.forecasts[static_cast<std::size_t>(s)] =
                entry.at("predictions").get<std::vector<double>>();
        }
        inputs.forecast_offset = grid.test_begin();
    }
    if (std::filesystem::exists(dir + "/dynamics.json")) {
        json doc = read_json_artifact(dir + "/dynamics.json");
        for (const auto& entry : doc) {
            DynamicsLabel label;
            label.style = entry.at("style").get<int>();
            std::string name = entry.at("label").get<std::string>();
            for (Dynamics d : {Dynamics::OutOfFashion, Dynamics::Classic, Dynamics::Trending,
                               Dynamics::Unpopular, Dynamics::ReEmerging})
                if (name == dynamics_name(d)) label.label = d;
            label.evidence.slope_recent = entry.at("evidence").at("slope_recent").get<double>();
            dynamics.push_back(label);
        }
        inputs.dynamics = &dynamics;
    }
    if (std::filesystem::exists(dir + "/report.json")) {
        json doc = read_json_artifact(dir + "/report.json");
        MetricReport r;
        r.styles = doc.value("styles", 0);
        r.train_range = doc.value("train", "");
        r.validation_range = doc.value("validation", "");
        r.test_range = doc.value("test", "");
        for (const auto& entry : doc.at("models")) {
            ModelReport m;
            m.model = entry.at("model").get<std::string>();
            m.aggregate_mae = entry.value("aggregate_mae", 0.0);
            m.aggregate_mape = entry.value("aggregate_mape",
                                           std::numeric_limits<double>::quiet_NaN());
            m.kl = entry.value("kl", std::numeric_limits<double>::quiet_NaN());
            m.failures = entry.value("failures", 0);
            r.models.push_back(std::move(m));
        }
        benchmark = std::move(r);
        inputs.benchmark = &*benchmark;
    }
    if (std::filesystem::exists(dir + "/attributes_forecast.csv")) {
        // Rebuild the attribute forecast from the model and forecasts.json
        // rather than reparsing the CSV.
        if (std::filesystem::exists(dir + "/forecasts.json")) {
            json forecasts = read_json_artifact(dir + "/forecasts.json");
            auto dist = aggregate_forecast_distribution(forecasts, model.k);
            attributes = forecast_attributes(model, dist, forecasts.value("test", ""));
            inputs.attributes = &*attributes;
        }
    }

    emit_report(inputs, dir);
    std::cout << "report: wrote report.md and " << trajectories.styles() << " plots\n";
}

void cmd_sweep_k(const RunConfig& config) {
    std::string dir = out_dir(config);
    if (!config.has("k_list") || !config.raw["k_list"].is_array() ||
        config.raw["k_list"].empty())
        fail(ErrorKind::Validation, "sweep-k needs a non-empty 'k_list'");
    std::vector<int> k_values;
    for (const auto& v : config.raw["k_list"]) k_values.push_back(v.get<int>());

    LoadedCorpus corpus = load_corpus(config);
    AugmentMode mode = parse_augment_mode(config.string_or("augment", "none"));
    FeatureMatrix matrix = build_feature_matrix(corpus.items, mode, corpus.vocabulary);
    TransactionLog log = load_transactions(config.require_string("transactions"), corpus.items);
    TimeGrid grid = grid_from(config);
    MonthlyBins bins = bin_transactions(log, grid);

    BenchmarkOptions options;
    options.models = models_from(config, {"exp"});
    options.grids = grids_from(config);
    options.seed = config.require_seed();

    FitOptions fit_options;
    fit_options.sparsity = config.number_or("sparsity", 0.1);
    fit_options.max_iters = config.int_or("max_iters", 500);
    fit_options.tol = config.number_or("tol", 1e-6);
    fit_options.seed = options.seed;

    std::ofstream out(dir + "/sweep_k.csv", std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write '" + dir + "/sweep_k.csv'");
    out << "k,mape\n";
    std::cout << "| K | MAPE |\n|---|------|\n";
    char buf[32];
    for (int k : k_values) {
        fit_options.k = k;
        StyleModel model = fit_styles(matrix, fit_options);
        TrajectorySet trajectories = compute_trajectories(model, bins, grid);
        MetricReport report = run_benchmark(trajectories, grid, options);
        double mape_value = report.models.front().aggregate_mape;
        std::snprintf(buf, sizeof(buf), "%.17g", mape_value);
        out << k << "," << buf << "\n";
        std::snprintf(buf, sizeof(buf), "%.2f", mape_value);
        std::cout << "| " << k << " | " << buf << " |\n";
    }
}

}  // namespace

void run_command(const std::string& command, const std::string& config_json) {
    RunConfig config;
    if (!config_json.empty()) {
        try {
            config.raw = json::parse(config_json);
        } catch (const json::exception& e) {
            fail(ErrorKind::Parse, std::string("bad config JSON: ") + e.what());
        }
        if (!config.raw.is_object())
            fail(ErrorKind::Parse, "config JSON must be an object");
    } else {
        config.raw = json::object();
    }

    if (command == "synth") cmd_synth(config);
    else if (command == "discover") cmd_discover(config);
    else if (command == "trajectories") cmd_trajectories(config);
    else if (command == "forecast") cmd_forecast(config);
    else if (command == "evaluate") cmd_evaluate(config);
    else if (command == "dynamics") cmd_dynamics(config);
    else if (command == "attributes") cmd_attributes(config);
    else if (command == "report") cmd_report(config);
    else if (command == "sweep-k") cmd_sweep_k(config);
    else
        fail(ErrorKind::InvalidArgument, "unknown command '" + command + "'");
}

}  // namespace trendcast
