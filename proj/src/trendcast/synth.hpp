// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "trendcast/corpus.hpp"
#include "trendcast/month.hpp"

namespace trendcast {

/// Trend shape vocabulary for planted style popularity. The five named
/// life-cycle shapes plus a random-walk variant whose innovations decay
/// exponentially (for recency-weighted benchmark fixtures).
enum class TrendKind {
    Linear,          // param: total rise from first to last month
    Flat,            // param: level
    LogisticRise,    // param: steepness divisor (months per unit)
    LogisticDecline, // param: steepness divisor
    Trough,          // param: dip depth; popular, declines, re-emerges
    RandomWalkDecay, // param: initial innovation scale
};

struct TrendShape {
    TrendKind kind = TrendKind::Flat;
    double param = 0.0;
    bool has_param = false;

    static TrendShape parse(const std::string& text);  // "name" or "name:param"
    std::string str() const;
};

/// Shape value at month t of T, before cross-style normalization. Pure in
/// (shape, t, T); the random-walk kind is evaluated via planted_trajectories.
double trend_shape_value(const TrendShape& shape, int t, int months);

struct SynthConfig {
    int styles = 3;              // K*
    int attributes = 50;         // M
    int items = 500;             // N
    int months = 72;             // T
    YearMonth start{2008, 1};
    std::vector<TrendShape> shapes;  // one per style; defaults cycle the vocabulary
    double seasonal_amplitude = 0.0;
    double noise = 0.0;
    int transactions_per_month = 200;
    std::uint64_t seed = 0;
};

struct SynthData {
    AttributeVocabulary vocabulary;
    std::vector<Item> items;
    TransactionLog log;
    Eigen::MatrixXd w_star;        // M x K*, column sums 1
    Eigen::MatrixXd trajectories;  // K* x T, column sums 1 (planted shares)
    std::vector<std::string> months;
    SynthConfig config;
};

/// Deterministic in (config, seed). Attribute vectors are W* h with sparse
/// mixtures h; monthly transaction counts follow the planted shapes.
SynthData generate_synthetic(const SynthConfig& config);

/// Writes items.jsonl, vocabulary.txt, transactions.csv and truth.json.
void write_synth_files(const SynthData& data, const std::string& out_dir);

}  // namespace trendcast
