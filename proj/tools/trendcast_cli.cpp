// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0
//
// Command line front end. Parses flags into a run configuration and drives
// the pipeline through the public C API; flags override config-file values.

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "trendcast.h"

using nlohmann::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitMissingInput = 2;
constexpr int kExitValidation = 3;

int exit_code_for(tc_status status) {
    switch (status) {
        case TC_OK: return 0;
        case TC_ERROR_MISSING_INPUT: return kExitMissingInput;
        case TC_ERROR_VALIDATION:
        case TC_ERROR_INVALID_ARGUMENT:
        case TC_ERROR_PARSE: return kExitValidation;
        default: return kExitFailure;
    }
}

struct CommonFlags {
    std::optional<std::string> config_path;
    std::optional<std::string> items, transactions, vocab, out;
    std::optional<std::string> train, val, test, augment, start;
    std::optional<int> k, months, n_items, m_attrs, tx_per_month, max_iters;
    std::optional<double> sparsity, theta, alpha_grid_step, tol, noise, seasonal_amp;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> models;   // comma separated
    std::optional<std::string> shapes;   // comma separated
    std::optional<std::string> k_list;   // comma separated
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file; flags override its values");
    cmd->add_option("--items", flags.items, "items JSONL file");
    cmd->add_option("--transactions", flags.transactions, "transactions CSV file");
    cmd->add_option("--vocab", flags.vocab, "attribute vocabulary file");
    cmd->add_option("--out", flags.out, "output directory");
    cmd->add_option("--k", flags.k, "style count");
    cmd->add_option("--sparsity", flags.sparsity, "L1 sparsity weight on style mixtures");
    cmd->add_option("--seed", flags.seed, "random seed (required; no silent default)");
    cmd->add_option("--train", flags.train, "training months YYYY-MM:YYYY-MM");
    cmd->add_option("--val", flags.val, "validation months YYYY-MM:YYYY-MM");
    cmd->add_option("--test", flags.test, "test months YYYY-MM:YYYY-MM");
    cmd->add_option("--models", flags.models, "comma separated model list");
    cmd->add_option("--augment", flags.augment, "none|tags|text|tags+text")
        ->check(CLI::IsMember({"none", "tags", "text", "tags+text"}));
    cmd->add_option("--alpha-grid-step", flags.alpha_grid_step, "alpha grid step");
    cmd->add_option("--theta", flags.theta, "dynamics slope threshold per month");
    cmd->add_option("--max-iters", flags.max_iters, "factorization iteration cap");
    cmd->add_option("--tol", flags.tol, "factorization stopping tolerance");
    cmd->add_option("--months", flags.months, "synthetic month count");
    cmd->add_option("--n-items", flags.n_items, "synthetic item count");
    cmd->add_option("--m-attrs", flags.m_attrs, "synthetic attribute count");
    cmd->add_option("--start", flags.start, "synthetic first month YYYY-MM");
    cmd->add_option("--shapes", flags.shapes, "comma separated trend shapes");
    cmd->add_option("--noise", flags.noise, "synthetic multiplicative noise level");
    cmd->add_option("--seasonal-amp", flags.seasonal_amp, "synthetic seasonal amplitude");
    cmd->add_option("--tx-per-month", flags.tx_per_month, "synthetic transactions per month");
    cmd->add_option("--list", flags.k_list, "comma separated K values for sweep-k");
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

int fail_with(const std::string& kind, const std::string& message, int code) {
    json record{{"error", {{"kind", kind}, {"message", message}}}};
    std::cerr << record.dump() << "\n";
    return code;
}

int run(const std::string& command, const CommonFlags& flags) {
    json config = json::object();
    if (flags.config_path) {
        std::ifstream in(*flags.config_path);
        if (!in)
            return fail_with("missing_input", "cannot open '" + *flags.config_path + "'",
                             kExitMissingInput);
        try {
            in >> config;
        } catch (const json::exception& e) {
            return fail_with("parse", std::string("bad config file: ") + e.what(),
                             kExitValidation);
        }
        if (!config.is_object())
            return fail_with("parse", "config file must hold a JSON object", kExitValidation);
    }

    auto set_string = [&](const char* key, const std::optional<std::string>& v) {
        if (v) config[key] = *v;
    };
    auto set_int = [&](const char* key, const std::optional<int>& v) {
        if (v) config[key] = *v;
    };
    auto set_double = [&](const char* key, const std::optional<double>& v) {
        if (v) config[key] = *v;
    };
    set_string("items", flags.items);
    set_string("transactions", flags.transactions);
    set_string("vocab", flags.vocab);
    set_string("out", flags.out);
    set_string("train", flags.train);
    set_string("val", flags.val);
    set_string("test", flags.test);
    set_string("augment", flags.augment);
    set_string("start", flags.start);
    set_int("k", flags.k);
    set_int("months", flags.months);
    set_int("n_items", flags.n_items);
    set_int("m_attrs", flags.m_attrs);
    set_int("tx_per_month", flags.tx_per_month);
    set_int("max_iters", flags.max_iters);
    set_double("sparsity", flags.sparsity);
    set_double("theta", flags.theta);
    set_double("alpha_grid_step", flags.alpha_grid_step);
    set_double("tol", flags.tol);
    set_double("noise", flags.noise);
    set_double("seasonal_amp", flags.seasonal_amp);
    if (flags.seed) config["seed"] = *flags.seed;
    if (flags.models) config["models"] = split_csv(*flags.models);
    if (flags.shapes) config["shapes"] = split_csv(*flags.shapes);
    if (flags.k_list) {
        json list = json::array();
        for (const auto& value : split_csv(*flags.k_list)) {
            try {
                list.push_back(std::stoi(value));
            } catch (const std::exception&) {
                return fail_with("validation", "bad K value '" + value + "' in --list",
                                 kExitValidation);
            }
        }
        config["k_list"] = list;
    }

    tc_status status = tc_run_command(command.c_str(), config.dump().c_str());
    if (status != TC_OK) {
        std::cerr << tc_error_record() << "\n";
        return exit_code_for(status);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trendcast: latent style discovery and popularity forecasting"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tc_version()));

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"synth", "generate a synthetic corpus with planted styles and trends"},
        {"discover", "factorize the feature matrix into styles (styles.json)"},
        {"trajectories", "reconstruct monthly style popularity (trajectories.csv)"},
        {"forecast", "forecast the test window with one model (forecasts.json)"},
        {"evaluate", "benchmark forecast models (report.json/report.md)"},
        {"dynamics", "classify style life cycles (dynamics.json)"},
        {"attributes", "forecast attribute popularity (attributes_forecast.csv)"},
        {"report", "render report.md, plots and word-cloud data"},
        {"sweep-k", "rerun discover+evaluate across K values (sweep_k.csv)"},
    };

    std::map<std::string, CommonFlags> flags;
    for (const auto& [name, description] : commands)
        add_common_flags(app.add_subcommand(name, description), flags[name]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        json record{{"error", {{"kind", "usage"}, {"message", e.what()}}}};
        std::cerr << record.dump() << "\n";
        return kExitValidation;
    }

    for (const auto& [name, description] : commands)
        if (app.got_subcommand(name)) return run(name, flags[name]);
    return kExitValidation;
}
