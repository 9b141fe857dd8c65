// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#include "trendcast/trajectory.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "trendcast/error.hpp"

namespace trendcast {

TrajectorySet compute_trajectories(const StyleModel& model, const MonthlyBins& bins,
                                   const TimeGrid& grid) {
    if (static_cast<int>(bins.items_by_month.size()) != grid.months)
        fail(ErrorKind::InvalidArgument, "bin count does not match the time grid");

    std::unordered_map<std::string, int> column_of;
    column_of.reserve(model.item_ids.size());
    for (std::size_t j = 0; j < model.item_ids.size(); ++j)
        column_of.emplace(model.item_ids[j], static_cast<int>(j));

    const int k = model.k;
    const int t_count = grid.months;
    TrajectorySet out;
    out.grid = grid;
    out.values = Eigen::MatrixXd::Zero(k, t_count);

    std::vector<bool> filled(static_cast<std::size_t>(t_count), false);
    for (int t = 0; t < t_count; ++t) {
        const auto& ids = bins.items_by_month[static_cast<std::size_t>(t)];
        if (ids.empty()) continue;
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(k);
        for (const auto& id : ids) {
            auto it = column_of.find(id);
            if (it == column_of.end())
                fail(ErrorKind::Validation,
                     "transaction references item '" + id + "' unknown to the style model");
            mean += model.h.col(it->second);
        }
        mean /= static_cast<double>(ids.size());
        out.values.col(t) = mean;
        filled[static_cast<std::size_t>(t)] = true;
    }

    // Fill empty months: interior linearly between the nearest non-empty
    // neighbors, edges by copying the nearest non-empty month.
    int first = -1, last = -1;
    for (int t = 0; t < t_count; ++t)
        if (filled[static_cast<std::size_t>(t)]) {
            if (first < 0) first = t;
            last = t;
        }
    if (first < 0)
        fail(ErrorKind::Validation, "no transactions fall inside the time grid");

    for (int t = 0; t < t_count; ++t) {
        if (filled[static_cast<std::size_t>(t)]) continue;
        out.empty_bins.push_back(t);
        if (t < first) {
            out.values.col(t) = out.values.col(first);
        } else if (t > last) {
            out.values.col(t) = out.values.col(last);
        } else {
            int left = t - 1;
            while (!filled[static_cast<std::size_t>(left)]) --left;
            int right = t + 1;
            while (!filled[static_cast<std::size_t>(right)]) ++right;
            double w = static_cast<double>(t - left) / static_cast<double>(right - left);
            out.values.col(t) = (1.0 - w) * out.values.col(left) + w * out.values.col(right);
        }
    }
    return out;
}

void save_trajectories(const TrajectorySet& t, const std::string& csv_path,
                       const std::string& sidecar_path) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write '" + csv_path + "'");
    out << "month";
    for (int k = 0; k < t.styles(); ++k) out << ",style_" << k;
    out << "\n";
    char buf[32];
    for (int i = 0; i < t.months(); ++i) {
        out << t.grid.month_at(i).str();
        for (int k = 0; k < t.styles(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", t.values(k, i));
            out << "," << buf;
        }
        out << "\n";
    }
    std::ofstream side(sidecar_path, std::ios::binary);
    if (!side) fail(ErrorKind::Io, "cannot write '" + sidecar_path + "'");
    for (int i : t.empty_bins) side << t.grid.month_at(i).str() << "\n";
}

TrajectorySet load_trajectories(const std::string& csv_path, const TimeGrid& grid) {
    std::ifstream in(csv_path);
    if (!in) fail(ErrorKind::MissingInput, "cannot open '" + csv_path + "'");
    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::Parse, csv_path + ": empty file");
    int styles = -1;
    {
        std::stringstream header(line);
        std::string field;
        int count = 0;
        while (std::getline(header, field, ',')) ++count;
        styles = count - 1;
    }
    if (styles < 1) fail(ErrorKind::Parse, csv_path + ": no style columns");

    TrajectorySet t;
    t.grid = grid;
    t.values = Eigen::MatrixXd::Zero(styles, grid.months);
    int row = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (row >= grid.months)
            fail(ErrorKind::Validation, csv_path + ": more rows than grid months");
        std::stringstream ss(line);
        std::string field;
        std::getline(ss, field, ',');
        if (YearMonth::parse(field) != t.grid.month_at(row))
            fail(ErrorKind::Validation,
                 csv_path + ":" + std::to_string(line_no) + ": month " + field +
                     " does not match grid month " + t.grid.month_at(row).str());
        for (int k = 0; k < styles; ++k) {
            if (!std::getline(ss, field, ','))
                fail(ErrorKind::Parse, csv_path + ":" + std::to_string(line_no) + ": short row");
            try {
                t.values(k, row) = std::stod(field);
            } catch (const std::exception&) {
                fail(ErrorKind::Parse,
                     csv_path + ":" + std::to_string(line_no) + ": bad number '" + field + "'");
            }
        }
        ++row;
    }
    if (row != grid.months)
        fail(ErrorKind::Validation, csv_path + ": expected " + std::to_string(grid.months) +
                                        " rows, got " + std::to_string(row));
    return t;
}

}  // namespace trendcast
