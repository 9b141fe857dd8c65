// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "trendcast/benchmark.hpp"
#include "trendcast/styles.hpp"
#include "trendcast/trajectory.hpp"

namespace trendcast {

enum class Dynamics {
    OutOfFashion,
    Classic,
    Trending,
    Unpopular,
    ReEmerging,
};

const char* dynamics_name(Dynamics label);

struct DynamicsEvidence {
    double slope_full = 0.0;
    double slope_recent = 0.0;
    double mean_level = 0.0;
    double first_third_mean = 0.0;
    double middle_third_mean = 0.0;
    double last_third_mean = 0.0;
    double theta = 0.0;
    double level_quartile = 0.0;  // 25th percentile of style levels
};

struct DynamicsLabel {
    int style = 0;
    Dynamics label = Dynamics::Classic;
    DynamicsEvidence evidence;
};

struct DynamicsOptions {
    std::optional<double> theta;       // default 0.1 / T per month
    double recent_fraction = 0.25;     // window for the recent slope
};

/// Life-cycle classification from slopes, level and the thirds profile.
/// Rules, in order: re-emerging, trending, out-of-fashion, unpopular, classic.
std::vector<DynamicsLabel> classify_dynamics(const TrajectorySet& trajectories,
                                             const DynamicsOptions& options = {});

void save_dynamics(const std::vector<DynamicsLabel>& labels, const std::string& path);

struct AttributeForecast {
    std::string month;                       // label only; empty when unset
    std::vector<double> probabilities;       // over attribute rows
    std::vector<int> ranking;                // attribute indices, best first
};

/// Attribute popularity implied by a style distribution: W restricted to
/// attribute rows times the (renormalized) style forecast, renormalized when
/// augmentation rows exist. Ranking ties resolve toward the lower index.
AttributeForecast forecast_attributes(const StyleModel& model,
                                      const std::vector<double>& style_forecast,
                                      const std::string& month_label = "");

void save_attribute_forecast(const AttributeForecast& forecast, const StyleModel& model,
                             const std::string& path);

struct ReportInputs {
    const StyleModel* model = nullptr;
    const TrajectorySet* trajectories = nullptr;
    const MetricReport* benchmark = nullptr;                   // optional
    const std::vector<DynamicsLabel>* dynamics = nullptr;      // optional
    const AttributeForecast* attributes = nullptr;             // optional
    // Per-style forecast overlaying the grid starting at forecast_offset
    // (typically the first test month), by the report's lead model.
    std::vector<std::vector<double>> forecasts;
    int forecast_offset = 0;
    std::string forecast_model;
};

/// Writes report.md, plots/style_*.svg and wordcloud.csv. Deterministic
/// bytes: no timestamps or absolute paths are embedded.
void emit_report(const ReportInputs& inputs, const std::string& out_dir);

}  // namespace trendcast
