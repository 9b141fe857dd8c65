// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#include "trendcast.h"

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "trendcast/analysis.hpp"
#include "trendcast/corpus.hpp"
#include "trendcast/error.hpp"
#include "trendcast/forecast.hpp"
#include "trendcast/metrics.hpp"
#include "trendcast/pipeline.hpp"
#include "trendcast/styles.hpp"
#include "trendcast/trajectory.hpp"

using nlohmann::json;

namespace {

thread_local std::string g_error_message;
thread_local std::string g_error_record;
thread_local std::string g_error_kind;

void clear_error() {
    g_error_message.clear();
    g_error_record.clear();
    g_error_kind.clear();
}

tc_status status_of(trendcast::ErrorKind kind) {
    using trendcast::ErrorKind;
    switch (kind) {
        case ErrorKind::InvalidArgument: return TC_ERROR_INVALID_ARGUMENT;
        case ErrorKind::MissingInput: return TC_ERROR_MISSING_INPUT;
        case ErrorKind::Validation: return TC_ERROR_VALIDATION;
        case ErrorKind::Parse: return TC_ERROR_PARSE;
        case ErrorKind::Io: return TC_ERROR_IO;
        case ErrorKind::Numeric: return TC_ERROR_NUMERIC;
    }
    return TC_ERROR_INTERNAL;
}

tc_status set_error(const char* kind, const std::string& message, tc_status status) {
    g_error_kind = kind;
    g_error_message = message;
    g_error_record =
        json{{"error", {{"kind", kind}, {"message", message}}}}.dump();
    return status;
}

// Runs fn, translating exceptions into status codes + the thread-local record.
template <typename Fn>
tc_status guarded(Fn&& fn) {
    clear_error();
    try {
        fn();
        return TC_OK;
    } catch (const trendcast::Error& e) {
        return set_error(trendcast::error_kind_name(e.kind()), e.what(), status_of(e.kind()));
    } catch (const std::exception& e) {
        return set_error("internal", e.what(), TC_ERROR_INTERNAL);
    } catch (...) {
        return set_error("internal", "unknown error", TC_ERROR_INTERNAL);
    }
}

tc_status require(bool condition, const char* message) {
    if (condition) return TC_OK;
    return set_error("invalid_argument", message, TC_ERROR_INVALID_ARGUMENT);
}

}  // namespace

struct tc_corpus {
    trendcast::AttributeVocabulary vocabulary;
    std::vector<trendcast::Item> items;
    trendcast::FeatureMatrix matrix;
    trendcast::TransactionLog log;
    bool has_log = false;
};

struct tc_style_model {
    trendcast::StyleModel model;
};

struct tc_trajectories {
    trendcast::TrajectorySet set;
};

extern "C" {

const char* tc_version(void) { return "1.0.0"; }

const char* tc_error_message(void) { return g_error_message.c_str(); }

const char* tc_error_record(void) {
    if (g_error_record.empty() && !g_error_message.empty())
        g_error_record = json{{"error", {{"kind", g_error_kind}, {"message", g_error_message}}}}
                             .dump();
    return g_error_record.c_str();
}

tc_status tc_corpus_load(const char* items_path, const char* vocab_path,
                         const char* transactions_path, const char* augment, tc_corpus** out) {
    if (tc_status s = require(out && items_path && vocab_path, "null argument")) return s;
    return guarded([&] {
        auto corpus = std::make_unique<tc_corpus>();
        corpus->vocabulary = trendcast::load_vocabulary(vocab_path);
        corpus->items = trendcast::load_items(items_path, corpus->vocabulary);
        corpus->matrix = trendcast::build_feature_matrix(
            corpus->items, trendcast::parse_augment_mode(augment ? augment : "none"),
            corpus->vocabulary);
        if (transactions_path && std::strlen(transactions_path) > 0) {
            corpus->log = trendcast::load_transactions(transactions_path, corpus->items);
            corpus->has_log = true;
        }
        *out = corpus.release();
    });
}

void tc_corpus_free(tc_corpus* corpus) { delete corpus; }

size_t tc_corpus_items(const tc_corpus* corpus) { return corpus ? corpus->items.size() : 0; }

size_t tc_corpus_features(const tc_corpus* corpus) {
    return corpus ? static_cast<size_t>(corpus->matrix.values.rows()) : 0;
}

size_t tc_corpus_attributes(const tc_corpus* corpus) {
    return corpus ? corpus->matrix.attribute_rows : 0;
}

size_t tc_corpus_transactions(const tc_corpus* corpus) {
    return corpus ? corpus->log.events.size() : 0;
}

tc_status tc_style_fit(const tc_corpus* corpus, int k, double sparsity, int max_iters,
                       double tol, uint64_t seed, tc_style_model** out) {
    if (tc_status s = require(corpus && out, "null argument")) return s;
    return guarded([&] {
        trendcast::FitOptions options;
        options.k = k;
        options.sparsity = sparsity;
        options.max_iters = max_iters;
        options.tol = tol;
        options.seed = seed;
        auto model = std::make_unique<tc_style_model>();
        model->model = trendcast::fit_styles(corpus->matrix, options);
        *out = model.release();
    });
}

tc_status tc_style_model_save(const tc_style_model* model, const char* path) {
    if (tc_status s = require(model && path, "null argument")) return s;
    return guarded([&] { trendcast::save_style_model(model->model, path); });
}

tc_status tc_style_model_load(const char* path, tc_style_model** out) {
    if (tc_status s = require(path && out, "null argument")) return s;
    return guarded([&] {
        auto model = std::make_unique<tc_style_model>();
        model->model = trendcast::load_style_model(path);
        *out = model.release();
    });
}

void tc_style_model_free(tc_style_model* model) { delete model; }

int tc_style_model_k(const tc_style_model* model) { return model ? model->model.k : 0; }

size_t tc_style_model_features(const tc_style_model* model) {
    return model ? model->model.feature_names.size() : 0;
}

size_t tc_style_model_items(const tc_style_model* model) {
    return model ? model->model.item_ids.size() : 0;
}

tc_status tc_style_weights(const tc_style_model* model, int style, double* out, size_t len) {
    if (tc_status s = require(model && out, "null argument")) return s;
    return guarded([&] {
        if (style < 0 || style >= model->model.k)
            trendcast::fail(trendcast::ErrorKind::InvalidArgument, "style index out of range");
        const auto rows = static_cast<size_t>(model->model.w.rows());
        if (len < rows)
            trendcast::fail(trendcast::ErrorKind::InvalidArgument, "output buffer too small");
        for (size_t r = 0; r < rows; ++r)
            out[r] = model->model.w(static_cast<Eigen::Index>(r), style);
    });
}

tc_status tc_style_mixture(const tc_style_model* model, int item_index, double* out, size_t len) {
    if (tc_status s = require(model && out, "null argument")) return s;
    return guarded([&] {
        Eigen::VectorXd column = trendcast::style_given_item(model->model, item_index);
        if (len < static_cast<size_t>(column.size()))
            trendcast::fail(trendcast::ErrorKind::InvalidArgument, "output buffer too small");
        for (Eigen::Index i = 0; i < column.size(); ++i) out[static_cast<size_t>(i)] = column[i];
    });
}

tc_status tc_trajectories_compute(const tc_style_model* model, const tc_corpus* corpus,
                                  const char* train, const char* validation, const char* test,
                                  tc_trajectories** out) {
    if (tc_status s = require(model && corpus && train && validation && test && out,
                              "null argument"))
        return s;
    return guarded([&] {
        if (!corpus->has_log)
            trendcast::fail(trendcast::ErrorKind::Validation,
                            "corpus was loaded without transactions");
        trendcast::TimeGrid grid = trendcast::TimeGrid::make(
            trendcast::MonthRange::parse(train), trendcast::MonthRange::parse(validation),
            trendcast::MonthRange::parse(test));
        trendcast::MonthlyBins bins = trendcast::bin_transactions(corpus->log, grid);
        auto trajectories = std::make_unique<tc_trajectories>();
        trajectories->set = trendcast::compute_trajectories(model->model, bins, grid);
        *out = trajectories.release();
    });
}

void tc_trajectories_free(tc_trajectories* trajectories) { delete trajectories; }

int tc_trajectories_styles(const tc_trajectories* trajectories) {
    return trajectories ? trajectories->set.styles() : 0;
}

int tc_trajectories_months(const tc_trajectories* trajectories) {
    return trajectories ? trajectories->set.months() : 0;
}

tc_status tc_trajectories_series(const tc_trajectories* trajectories, int style, double* out,
                                 size_t len) {
    if (tc_status s = require(trajectories && out, "null argument")) return s;
    return guarded([&] {
        if (style < 0 || style >= trajectories->set.styles())
            trendcast::fail(trendcast::ErrorKind::InvalidArgument, "style index out of range");
        auto series = trajectories->set.series(style);
        if (len < series.size())
            trendcast::fail(trendcast::ErrorKind::InvalidArgument, "output buffer too small");
        std::copy(series.begin(), series.end(), out);
    });
}

tc_status tc_forecast_series(const double* values, size_t n, const char* model,
                             const char* params_json, int horizon, uint64_t seed, double* out) {
    if (tc_status s = require(values && model && out && n > 0, "null argument")) return s;
    return guarded([&] {
        trendcast::ModelFamily family = trendcast::parse_model_family(model);
        std::map<std::string, double> hyperparams;
        if (params_json && std::strlen(params_json) > 0) {
            json doc;
            try {
                doc = json::parse(params_json);
            } catch (const json::exception& e) {
                trendcast::fail(trendcast::ErrorKind::Parse,
                                std::string("bad params JSON: ") + e.what());
            }
            for (const auto& [key, value] : doc.items())
                hyperparams[key] = value.get<double>();
        }
        std::vector<double> series(values, values + n);
        trendcast::ForecastResult result =
            trendcast::forecast_with(family, series, hyperparams, horizon, seed);
        std::copy(result.predictions.begin(), result.predictions.end(), out);
    });
}

tc_status tc_mae(const double* truth, const double* predicted, size_t n, double* out) {
    if (tc_status s = require(truth && predicted && out, "null argument")) return s;
    return guarded([&] {
        *out = trendcast::mae(std::vector<double>(truth, truth + n),
                              std::vector<double>(predicted, predicted + n));
    });
}

tc_status tc_mape(const double* truth, const double* predicted, size_t n, double* out,
                  size_t* skipped) {
    if (tc_status s = require(truth && predicted && out, "null argument")) return s;
    return guarded([&] {
        trendcast::MapeResult r = trendcast::mape(std::vector<double>(truth, truth + n),
                                                  std::vector<double>(predicted, predicted + n));
        *out = r.value;
        if (skipped) *skipped = r.skipped;
    });
}

tc_status tc_kl_divergence(const double* p, const double* q, size_t n, double epsilon,
                           double* out) {
    if (tc_status s = require(p && q && out, "null argument")) return s;
    return guarded([&] {
        *out = trendcast::kl_divergence(std::vector<double>(p, p + n),
                                        std::vector<double>(q, q + n), epsilon);
    });
}

tc_status tc_rank_intersection(const double* predicted_scores, const double* true_scores,
                               size_t n, size_t top_n, double* out) {
    if (tc_status s = require(predicted_scores && true_scores && out, "null argument")) return s;
    return guarded([&] {
        // Index-keyed ids, zero padded so lexicographic order matches index
        // order for deterministic ties.
        int width = static_cast<int>(std::to_string(n > 0 ? n - 1 : 0).size());
        std::map<std::string, double> predicted, truth;
        char buf[32];
        for (size_t i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof(buf), "%0*zu", width, i);
            predicted[buf] = predicted_scores[i];
            truth[buf] = true_scores[i];
        }
        *out = trendcast::rank_intersection(predicted, truth, top_n);
    });
}

tc_status tc_run_command(const char* command, const char* config_json) {
    if (tc_status s = require(command, "null command")) return s;
    return guarded([&] {
        trendcast::run_command(command, config_json ? config_json : "");
    });
}

}  // extern "C"
