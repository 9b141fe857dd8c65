// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace trendcast {

double mae(const std::vector<double>& truth, const std::vector<double>& predicted);

struct MapeResult {
    double value = 0.0;
    std::size_t skipped = 0;  // terms dropped because the truth value is zero
};

/// Mean absolute percentage error, in percent. Zero-truth terms are skipped
/// and counted; value is NaN when nothing is left.
MapeResult mape(const std::vector<double>& truth, const std::vector<double>& predicted);

/// KL divergence (nats) between two distributions after epsilon smoothing
/// and renormalization. Inputs must be nonnegative and sum to 1 within 1e-6.
double kl_divergence(const std::vector<double>& p, const std::vector<double>& q,
                     double epsilon = 1e-8);

/// |top_n(pred) ∩ top_n(truth)| / top_n, ties broken by identifier order.
double rank_intersection(const std::map<std::string, double>& predicted_scores,
                         const std::map<std::string, double>& true_scores, std::size_t top_n);

}  // namespace trendcast
