// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>

#include "support/helpers.hpp"
#include "trendcast/error.hpp"
#include "trendcast/trajectory.hpp"

using namespace trendcast;

namespace {

TimeGrid grid12() {
    // 12 grid months: 10 train, 1 validation, 1 test
    return TimeGrid::make(MonthRange::parse("2010-01:2010-10"),
                          MonthRange::parse("2010-11:2010-11"),
                          MonthRange::parse("2010-12:2010-12"));
}

// Two styles, hand-set mixtures per item.
StyleModel model_with(const std::vector<std::pair<std::string, std::array<double, 2>>>& items) {
    StyleModel model;
    model.k = 2;
    model.h = Eigen::MatrixXd(2, static_cast<Eigen::Index>(items.size()));
    for (std::size_t j = 0; j < items.size(); ++j) {
        model.item_ids.push_back(items[j].first);
        model.h(0, static_cast<Eigen::Index>(j)) = items[j].second[0];
        model.h(1, static_cast<Eigen::Index>(j)) = items[j].second[1];
    }
    model.feature_names = {"f0", "f1"};
    model.attribute_rows = 2;
    return model;
}

MonthlyBins bins_for(const TimeGrid& grid,
                     const std::vector<std::pair<int, std::vector<std::string>>>& content) {
    MonthlyBins bins;
    bins.items_by_month.resize(static_cast<std::size_t>(grid.months));
    for (const auto& [month, ids] : content)
        bins.items_by_month[static_cast<std::size_t>(month)] = ids;
    return bins;
}

}  // namespace

TEST_CASE("a month's vector is the mean of its items' style mixtures") {
    auto model = model_with({{"a", {1.0, 0.0}}, {"b", {0.0, 1.0}}});
    auto grid = grid12();
    std::vector<std::pair<int, std::vector<std::string>>> content;
    for (int t = 0; t < grid.months; ++t)
        content.push_back({t, {"a", "b"}});
    auto trajectories = compute_trajectories(model, bins_for(grid, content), grid);
    CHECK(trajectories.values(0, 0) == doctest::Approx(0.5));
    CHECK(trajectories.values(1, 0) == doctest::Approx(0.5));
    CHECK(trajectories.empty_bins.empty());
}

TEST_CASE("repeated purchases of one item give exactly its mixture") {
    auto model = model_with({{"a", {0.3, 0.7}}, {"b", {0.9, 0.1}}});
    auto grid = grid12();
    std::vector<std::pair<int, std::vector<std::string>>> content;
    for (int t = 0; t < grid.months; ++t)
        content.push_back({t, {"a", "a", "a"}});
    auto trajectories = compute_trajectories(model, bins_for(grid, content), grid);
    CHECK(trajectories.values(0, 3) == doctest::Approx(0.3));
    CHECK(trajectories.values(1, 3) == doctest::Approx(0.7));
}

TEST_CASE("duplicates shift the month toward the repeated item monotonically") {
    auto model = model_with({{"a", {0.3, 0.7}}, {"b", {0.9, 0.1}}});
    auto grid = grid12();
    double previous = 1.0;
    for (int copies = 1; copies <= 4; ++copies) {
        std::vector<std::pair<int, std::vector<std::string>>> content;
        for (int t = 0; t < grid.months; ++t) {
            std::vector<std::string> ids = {"b"};
            for (int c = 0; c < copies; ++c) ids.push_back("a");
            content.push_back({t, ids});
        }
        auto trajectories = compute_trajectories(model, bins_for(grid, content), grid);
        double distance = std::abs(trajectories.values(0, 0) - 0.3);
        CHECK(distance < previous);
        previous = distance;
    }
}

TEST_CASE("interior empty months interpolate linearly between neighbors") {
    auto model = model_with({{"a", {0.2, 0.8}}, {"b", {0.4, 0.6}}});
    auto grid = grid12();
    // month 0 has item a, month 2 has item b, month 1 empty; remaining months
    // keep a to avoid edge copying
    std::vector<std::pair<int, std::vector<std::string>>> content = {{0, {"a"}}, {2, {"b"}}};
    for (int t = 3; t < grid.months; ++t) content.push_back({t, {"b"}});
    auto trajectories = compute_trajectories(model, bins_for(grid, content), grid);

    CHECK(trajectories.values(0, 1) == doctest::Approx(0.3));
    CHECK(trajectories.values(1, 1) == doctest::Approx(0.7));
    CHECK(trajectories.empty_bins == std::vector<int>{1});
}

TEST_CASE("interpolation weights by distance over longer gaps") {
    auto model = model_with({{"a", {0.0, 1.0}}, {"b", {1.0, 0.0}}});
    auto grid = grid12();
    std::vector<std::pair<int, std::vector<std::string>>> content = {{0, {"a"}}, {3, {"b"}}};
    for (int t = 4; t < grid.months; ++t) content.push_back({t, {"b"}});
    auto trajectories = compute_trajectories(model, bins_for(grid, content), grid);
    CHECK(trajectories.values(0, 1) == doctest::Approx(1.0 / 3));
    CHECK(trajectories.values(0, 2) == doctest::Approx(2.0 / 3));

    // interpolated months lie componentwise between their neighbors
    for (int t : trajectories.empty_bins)
        for (int k = 0; k < 2; ++k) {
            double lo = std::min(trajectories.values(k, 0), trajectories.values(k, 3));
            double hi = std::max(trajectories.values(k, 0), trajectories.values(k, 3));
            CHECK(trajectories.values(k, t) >= lo - 1e-12);
            CHECK(trajectories.values(k, t) <= hi + 1e-12);
        }
}

TEST_CASE("leading and trailing empty months copy the nearest value") {
    auto model = model_with({{"a", {0.25, 0.75}}});
    auto grid = grid12();
    std::vector<std::pair<int, std::vector<std::string>>> content = {{2, {"a"}}, {9, {"a"}}};
    auto trajectories = compute_trajectories(model, bins_for(grid, content), grid);
    CHECK(trajectories.values(0, 0) == doctest::Approx(0.25));
    CHECK(trajectories.values(0, 1) == doctest::Approx(0.25));
    CHECK(trajectories.values(0, 10) == doctest::Approx(0.25));
    CHECK(trajectories.values(0, 11) == doctest::Approx(0.25));
    CHECK(trajectories.empty_bins.size() == 10);
}

TEST_CASE("non-empty months satisfy the simplex property") {
    auto model = model_with({{"a", {0.3, 0.7}}, {"b", {0.55, 0.45}}});
    auto grid = grid12();
    std::vector<std::pair<int, std::vector<std::string>>> content;
    for (int t = 0; t < grid.months; ++t)
        content.push_back({t, t % 2 == 0 ? std::vector<std::string>{"a", "b"}
                                         : std::vector<std::string>{"b"}});
    auto trajectories = compute_trajectories(model, bins_for(grid, content), grid);
    for (int t = 0; t < grid.months; ++t)
        CHECK(trajectories.values.col(t).sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("unknown item ids and empty grids are errors") {
    auto model = model_with({{"a", {1.0, 0.0}}});
    auto grid = grid12();
    auto bins = bins_for(grid, {{0, {"mystery"}}});
    CHECK_THROWS_WITH_AS(compute_trajectories(model, bins, grid),
                         doctest::Contains("mystery"), Error);
    CHECK_THROWS_WITH_AS(compute_trajectories(model, bins_for(grid, {}), grid),
                         doctest::Contains("no transactions"), Error);
}

TEST_CASE("trajectories round trip through CSV") {
    tc_test::TempDir dir("tc-traj");
    auto model = model_with({{"a", {0.3, 0.7}}, {"b", {0.9, 0.1}}});
    auto grid = grid12();
    std::vector<std::pair<int, std::vector<std::string>>> content;
    for (int t = 0; t < grid.months; ++t)
        if (t != 5) content.push_back({t, {t % 2 == 0 ? "a" : "b"}});
    auto original = compute_trajectories(model, bins_for(grid, content), grid);

    save_trajectories(original, dir.file("trajectories.csv"), dir.file("interp.txt"));
    auto loaded = load_trajectories(dir.file("trajectories.csv"), grid);
    CHECK((loaded.values - original.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK(tc_test::read_file(dir.file("interp.txt")) == "2010-06\n");

    CHECK_THROWS_AS(load_trajectories(dir.file("missing.csv"), grid), Error);
}
