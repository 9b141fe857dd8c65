// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "trendcast/error.hpp"
#include "trendcast/metrics.hpp"

using namespace trendcast;

TEST_CASE("mae and mape hand values") {
    // errors 1 and 2: MAE (1+2)/2 = 1.5; MAPE (0.1 + 0.1)/2 * 100 = 10
    std::vector<double> truth = {10.0, 20.0};
    std::vector<double> predicted = {11.0, 18.0};
    CHECK(mae(truth, predicted) == doctest::Approx(1.5));
    auto mp = mape(truth, predicted);
    CHECK(mp.value == doctest::Approx(10.0));
    CHECK(mp.skipped == 0);
}

TEST_CASE("perfect predictions score zero") {
    std::vector<double> truth = {0.3, 0.5, 0.7};
    CHECK(mae(truth, truth) == 0.0);
    CHECK(mape(truth, truth).value == 0.0);
}

TEST_CASE("zero truth values are skipped in mape with a count") {
    std::vector<double> truth = {0.0, 10.0};
    std::vector<double> predicted = {5.0, 12.0};
    auto mp = mape(truth, predicted);
    CHECK(mp.skipped == 1);
    CHECK(mp.value == doctest::Approx(20.0));

    auto all_zero = mape({0.0, 0.0}, {1.0, 1.0});
    CHECK(all_zero.skipped == 2);
    CHECK(std::isnan(all_zero.value));
}

TEST_CASE("metric length mismatches are errors") {
    CHECK_THROWS_AS(mae({1.0}, {1.0, 2.0}), Error);
    CHECK_THROWS_AS(mape({1.0}, {1.0, 2.0}), Error);
    CHECK_THROWS_AS(kl_divergence({1.0}, {0.5, 0.5}), Error);
    CHECK_THROWS_AS(mae({}, {}), Error);
}

TEST_CASE("kl divergence") {
    SUBCASE("identical distributions diverge by zero") {
        std::vector<double> p = {0.25, 0.25, 0.5};
        CHECK(std::abs(kl_divergence(p, p)) <= 1e-9);
    }
    SUBCASE("hand value: 0.5 ln 2 + 0.5 ln(2/3)") {
        double expected = 0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0);
        CHECK(kl_divergence({0.5, 0.5}, {0.25, 0.75}) == doctest::Approx(expected).epsilon(1e-3));
        CHECK(kl_divergence({0.5, 0.5}, {0.25, 0.75}) == doctest::Approx(0.1438).epsilon(1e-2));
    }
    SUBCASE("nonnegative on random distribution pairs") {
        std::mt19937 eng(4);
        std::uniform_real_distribution<double> dist(0.0, 1.0);
        for (int round = 0; round < 200; ++round) {
            std::vector<double> p(5), q(5);
            double sp = 0.0, sq = 0.0;
            for (int i = 0; i < 5; ++i) {
                p[static_cast<std::size_t>(i)] = dist(eng);
                q[static_cast<std::size_t>(i)] = dist(eng);
                sp += p[static_cast<std::size_t>(i)];
                sq += q[static_cast<std::size_t>(i)];
            }
            for (int i = 0; i < 5; ++i) {
                p[static_cast<std::size_t>(i)] /= sp;
                q[static_cast<std::size_t>(i)] /= sq;
            }
            CHECK(kl_divergence(p, q) >= -1e-12);
        }
    }
    SUBCASE("zero entries survive via smoothing") {
        CHECK(std::isfinite(kl_divergence({1.0, 0.0}, {0.0, 1.0})));
        CHECK(kl_divergence({1.0, 0.0}, {0.0, 1.0}) > 1.0);
    }
    SUBCASE("inputs must be near-normalized and nonnegative") {
        CHECK_THROWS_AS(kl_divergence({0.2, 0.2}, {0.5, 0.5}), Error);
        CHECK_THROWS_AS(kl_divergence({1.5, -0.5}, {0.5, 0.5}), Error);
    }
}

TEST_CASE("rank intersection") {
    auto scores = [](std::initializer_list<std::pair<const char*, double>> init) {
        std::map<std::string, double> m;
        for (const auto& [k, v] : init) m[k] = v;
        return m;
    };

    SUBCASE("identical maps give 1.0") {
        auto s = scores({{"a", 3.0}, {"b", 2.0}, {"c", 1.0}});
        CHECK(rank_intersection(s, s, 2) == doctest::Approx(1.0));
    }
    SUBCASE("disjoint top sets give 0.0") {
        auto predicted = scores({{"a", 9.0}, {"b", 8.0}, {"c", 1.0}, {"d", 0.5}});
        auto truth = scores({{"a", 0.1}, {"b", 0.2}, {"c", 7.0}, {"d", 6.0}});
        CHECK(rank_intersection(predicted, truth, 2) == doctest::Approx(0.0));
    }
    SUBCASE("9 of 10 shared gives 0.9") {
        std::map<std::string, double> predicted, truth;
        for (int i = 0; i < 20; ++i) {
            std::string id = "id" + std::to_string(10 + i);  // fixed width
            predicted[id] = 20.0 - i;
            truth[id] = 20.0 - i;
        }
        // swap one member of the predicted top 10 with a bottom item
        predicted["id10"] = 0.0;   // drops the truth leader out of the top 10
        CHECK(rank_intersection(predicted, truth, 10) == doctest::Approx(0.9));
    }
    SUBCASE("ties break by identifier order") {
        auto predicted = scores({{"a", 1.0}, {"b", 1.0}, {"c", 1.0}});
        auto truth = scores({{"a", 3.0}, {"b", 2.0}, {"c", 1.0}});
        // all tied: the lexicographically first ids fill the top set
        CHECK(rank_intersection(predicted, truth, 2) == doctest::Approx(1.0));
    }
    SUBCASE("key mismatches and bad top_n are errors") {
        auto predicted = scores({{"a", 1.0}});
        auto truth = scores({{"b", 1.0}});
        CHECK_THROWS_AS(rank_intersection(predicted, truth, 1), Error);
        auto same = scores({{"a", 1.0}});
        CHECK_THROWS_AS(rank_intersection(same, same, 2), Error);
        CHECK_THROWS_AS(rank_intersection(same, same, 0), Error);
    }
}
