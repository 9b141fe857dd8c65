// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "trendcast/corpus.hpp"

namespace trendcast {

/// Nonnegative factorization of a feature matrix into K styles. Columns of W
/// (style over features) and H (item over styles) sum to 1; the rank-1
/// weights are folded into H before its normalization.
struct StyleModel {
    int k = 0;
    std::uint64_t seed = 0;
    double sparsity = 0.0;
    std::vector<std::string> feature_names;
    std::vector<std::string> item_ids;
    std::size_t attribute_rows = 0;
    Eigen::MatrixXd w;  // features x K
    Eigen::MatrixXd h;  // K x items
    std::vector<double> objective_trace;
    std::vector<std::string> degenerate_items;  // all-zero columns, H set uniform
};

struct FitOptions {
    int k = 30;
    double sparsity = 0.1;
    int max_iters = 500;
    double tol = 1e-6;
    std::uint64_t seed = 0;
};

/// Multiplicative-update NMF on squared Frobenius error plus an L1 penalty on
/// H. Deterministic given the seed; stops on relative objective change < tol.
StyleModel fit_styles(const FeatureMatrix& matrix, const FitOptions& options);

/// H column for one item; sums to 1.
Eigen::VectorXd style_given_item(const StyleModel& model, int item_index);

struct StyleDescription {
    int style = 0;
    std::vector<std::pair<std::string, double>> top_attributes;
    std::vector<std::string> exemplar_items;
};

/// Per style, the top_a features by weight and top_x exemplar items by
/// mixture strength; ties resolved toward the lower index.
std::vector<StyleDescription> describe_styles(const StyleModel& model, int top_a, int top_x);

void save_style_model(const StyleModel& model, const std::string& path);
StyleModel load_style_model(const std::string& path);

}  // namespace trendcast
