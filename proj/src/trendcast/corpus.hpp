// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "trendcast/month.hpp"

namespace trendcast {

/// Ordered attribute names; line index in the vocabulary file is the
/// attribute index everywhere else.
struct AttributeVocabulary {
    std::vector<std::string> names;

    std::size_t size() const noexcept { return names.size(); }
};

struct Item {
    std::string item_id;
    std::vector<double> attributes;        // length M, each in [0,1]
    std::vector<std::string> text_tokens;  // lowercased tokens, may repeat
    std::vector<std::string> tags;
    bool has_tags = false;
    bool has_text = false;
};

enum class AugmentMode { None, Tags, Text, TagsText };

AugmentMode parse_augment_mode(const std::string& name);
const char* augment_mode_name(AugmentMode mode);

/// Feature rows (attributes first, then any augmented term rows) by item
/// columns. All entries nonnegative; attribute rows also bounded by 1.
struct FeatureMatrix {
    std::vector<std::string> row_names;
    std::vector<std::string> item_ids;
    Eigen::MatrixXd values;           // rows x items
    std::size_t attribute_rows = 0;   // leading rows that are attributes
};

struct Transaction {
    std::string item_id;
    Date date;
};

struct TransactionLog {
    std::vector<Transaction> events;
};

/// Per grid month, the item ids purchased that month (duplicates preserved).
struct MonthlyBins {
    std::vector<std::vector<std::string>> items_by_month;
    std::size_t dropped = 0;  // events outside the grid

    std::size_t total_binned() const noexcept {
        std::size_t n = 0;
        for (const auto& bin : items_by_month) n += bin.size();
        return n;
    }
};

AttributeVocabulary load_vocabulary(const std::string& path);

/// Reads JSON Lines items. Errors carry the 1-based line number.
std::vector<Item> load_items(const std::string& path, const AttributeVocabulary& vocabulary);

/// Reads the `item_id,timestamp` CSV. Every item_id must resolve against
/// `items`.
TransactionLog load_transactions(const std::string& path, const std::vector<Item>& items);

FeatureMatrix build_feature_matrix(const std::vector<Item>& items, AugmentMode mode,
                                   const AttributeVocabulary& vocabulary);

MonthlyBins bin_transactions(const TransactionLog& log, const TimeGrid& grid);

/// Lowercased alphanumeric token runs.
std::vector<std::string> tokenize(const std::string& text);

}  // namespace trendcast
