// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#include "trendcast/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "trendcast/error.hpp"

namespace trendcast {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        fail(ErrorKind::InvalidArgument, std::string(what) + ": length mismatch (" +
                                             std::to_string(a) + " vs " + std::to_string(b) + ")");
    if (a == 0) fail(ErrorKind::InvalidArgument, std::string(what) + ": empty input");
}

}  // namespace

double mae(const std::vector<double>& truth, const std::vector<double>& predicted) {
    require_same_length(truth.size(), predicted.size(), "mae");
    double total = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) total += std::abs(predicted[i] - truth[i]);
    return total / static_cast<double>(truth.size());
}

MapeResult mape(const std::vector<double>& truth, const std::vector<double>& predicted) {
    require_same_length(truth.size(), predicted.size(), "mape");
    MapeResult result;
    double total = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == 0.0) {
            ++result.skipped;
            continue;
        }
        total += std::abs((predicted[i] - truth[i]) / truth[i]);
        ++used;
    }
    result.value = used > 0 ? total / static_cast<double>(used) * 100.0
                            : std::numeric_limits<double>::quiet_NaN();
    return result;
}

double kl_divergence(const std::vector<double>& p, const std::vector<double>& q, double epsilon) {
    require_same_length(p.size(), q.size(), "kl_divergence");
    double sum_p = 0.0, sum_q = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0.0 || q[i] < 0.0)
            fail(ErrorKind::InvalidArgument, "kl_divergence: negative probability");
        sum_p += p[i];
        sum_q += q[i];
    }
    if (std::abs(sum_p - 1.0) > 1e-6 || std::abs(sum_q - 1.0) > 1e-6)
        fail(ErrorKind::InvalidArgument, "kl_divergence: inputs must sum to 1 within 1e-6");

    const double denom_p = sum_p + epsilon * static_cast<double>(p.size());
    const double denom_q = sum_q + epsilon * static_cast<double>(q.size());
    double kl = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double pi = (p[i] + epsilon) / denom_p;
        double qi = (q[i] + epsilon) / denom_q;
        kl += pi * std::log(pi / qi);
    }
    return kl;
}

double rank_intersection(const std::map<std::string, double>& predicted_scores,
                         const std::map<std::string, double>& true_scores, std::size_t top_n) {
    if (predicted_scores.size() != true_scores.size())
        fail(ErrorKind::InvalidArgument, "rank_intersection: key sets differ");
    for (const auto& [key, value] : predicted_scores)
        if (!true_scores.count(key))
            fail(ErrorKind::InvalidArgument, "rank_intersection: key '" + key + "' missing");
    if (top_n == 0 || top_n > predicted_scores.size())
        fail(ErrorKind::InvalidArgument, "rank_intersection: top_n out of range");

    auto top_set = [top_n](const std::map<std::string, double>& scores) {
        std::vector<std::pair<std::string, double>> order(scores.begin(), scores.end());
        std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
            return a.second > b.second;  // map order already sorts ids for ties
        });
        std::vector<std::string> top;
        top.reserve(top_n);
        for (std::size_t i = 0; i < top_n; ++i) top.push_back(order[i].first);
        std::sort(top.begin(), top.end());
        return top;
    };

    auto a = top_set(predicted_scores);
    auto b = top_set(true_scores);
    std::vector<std::string> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    return static_cast<double>(common.size()) / static_cast<double>(top_n);
}

}  // namespace trendcast
