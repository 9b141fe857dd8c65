// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "trendcast/corpus.hpp"
#include "trendcast/month.hpp"
#include "trendcast/styles.hpp"

namespace trendcast {

/// K monthly style-popularity series. Non-empty months are means of per-item
/// style distributions and sum to 1; empty months are filled (interior by
/// linear interpolation, edges by copying the nearest value) and flagged.
struct TrajectorySet {
    TimeGrid grid;
    Eigen::MatrixXd values;               // K x T
    std::vector<int> empty_bins;          // grid indices that were filled

    int styles() const noexcept { return static_cast<int>(values.rows()); }
    int months() const noexcept { return static_cast<int>(values.cols()); }

    std::vector<double> series(int style) const {
        std::vector<double> out(static_cast<std::size_t>(values.cols()));
        for (int t = 0; t < values.cols(); ++t) out[static_cast<std::size_t>(t)] = values(style, t);
        return out;
    }
};

TrajectorySet compute_trajectories(const StyleModel& model, const MonthlyBins& bins,
                                   const TimeGrid& grid);

/// trajectories.csv plus a sidecar listing interpolated months.
void save_trajectories(const TrajectorySet& t, const std::string& csv_path,
                       const std::string& sidecar_path);
TrajectorySet load_trajectories(const std::string& csv_path, const TimeGrid& grid);

}  // namespace trendcast
