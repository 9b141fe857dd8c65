// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trendcast/forecast.hpp"
#include "trendcast/metrics.hpp"
#include "trendcast/trajectory.hpp"

namespace trendcast {

struct BenchmarkOptions {
    std::vector<ModelFamily> models;
    HyperGrids grids;
    std::uint64_t seed = 0;
};

/// One (style, model) benchmark cell. A failed fit is recorded, not fatal.
struct BenchmarkCell {
    int style = 0;
    std::map<std::string, double> hyperparams;
    std::vector<double> predictions;
    double mae = 0.0;
    double mape = 0.0;
    std::size_t mape_skipped = 0;
    std::string error;  // empty on success

    bool ok() const noexcept { return error.empty(); }
};

struct ModelReport {
    std::string model;
    std::vector<BenchmarkCell> cells;  // one per style
    double aggregate_mae = 0.0;
    double aggregate_mape = 0.0;
    double kl = 0.0;  // aggregate test-year forecast vs actual distribution
    std::size_t failures = 0;
};

struct MetricReport {
    std::vector<ModelReport> models;
    int styles = 0;
    std::string train_range, validation_range, test_range;
};

/// Per style and model: select hyperparameters on the validation window,
/// refit on train+validation, forecast the test months, score MAE/MAPE.
/// Aggregates are unweighted means over styles.
MetricReport run_benchmark(const TrajectorySet& trajectories, const TimeGrid& grid,
                           const BenchmarkOptions& options);

void save_report_json(const MetricReport& report, const std::string& path);
void save_report_markdown(const MetricReport& report, const std::string& path);
void save_report_csv(const MetricReport& report, const std::string& path);

/// Renders the models x {MAE, MAPE, KL} table; reused by the full report.
std::string report_markdown_table(const MetricReport& report);

}  // namespace trendcast
