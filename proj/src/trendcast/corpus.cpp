// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#include "trendcast/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "trendcast/error.hpp"

namespace trendcast {

using nlohmann::json;

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::MissingInput, "cannot open '" + path + "'");
    return in;
}

[[noreturn]] void fail_line(const std::string& path, std::size_t line, const std::string& what) {
    fail(ErrorKind::Parse, path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

AugmentMode parse_augment_mode(const std::string& name) {
    if (name == "none" || name.empty()) return AugmentMode::None;
    if (name == "tags") return AugmentMode::Tags;
    if (name == "text") return AugmentMode::Text;
    if (name == "tags+text" || name == "text+tags") return AugmentMode::TagsText;
    fail(ErrorKind::InvalidArgument,
         "unknown augment mode '" + name + "' (expected none|tags|text|tags+text)");
}

const char* augment_mode_name(AugmentMode mode) {
    switch (mode) {
        case AugmentMode::None: return "none";
        case AugmentMode::Tags: return "tags";
        case AugmentMode::Text: return "text";
        case AugmentMode::TagsText: return "tags+text";
    }
    return "none";
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(current);
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(current);
    return tokens;
}

AttributeVocabulary load_vocabulary(const std::string& path) {
    auto in = open_input(path);
    AttributeVocabulary vocab;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) fail_line(path, line_no, "empty attribute name");
        if (!seen.insert(line).second)
            fail_line(path, line_no, "duplicate attribute name '" + line + "'");
        vocab.names.push_back(line);
    }
    if (vocab.names.empty())
        fail(ErrorKind::Validation, "vocabulary '" + path + "' is empty");
    return vocab;
}

std::vector<Item> load_items(const std::string& path, const AttributeVocabulary& vocabulary) {
    auto in = open_input(path);
    std::vector<Item> items;
    std::unordered_set<std::string> ids;
    std::string line;
    std::size_t line_no = 0;
    const std::size_t m = vocabulary.size();
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::exception& e) {
            fail_line(path, line_no, std::string("malformed JSON: ") + e.what());
        }
        if (!record.is_object() || !record.contains("item_id") || !record["item_id"].is_string())
            fail_line(path, line_no, "record must be an object with a string 'item_id'");
        if (!record.contains("attributes") || !record["attributes"].is_array())
            fail_line(path, line_no, "record must carry an 'attributes' array");

        Item item;
        item.item_id = record["item_id"].get<std::string>();
        if (!ids.insert(item.item_id).second)
            fail_line(path, line_no, "duplicate item_id '" + item.item_id + "'");

        const auto& attrs = record["attributes"];
        if (attrs.size() != m)
            fail_line(path, line_no,
                      "expected " + std::to_string(m) + " attributes, got " +
                          std::to_string(attrs.size()));
        item.attributes.reserve(m);
        for (const auto& v : attrs) {
            if (!v.is_number())
                fail_line(path, line_no, "attribute values must be numbers");
            double x = v.get<double>();
            if (!(x >= 0.0 && x <= 1.0))
                fail_line(path, line_no,
                          "attribute value " + std::to_string(x) + " outside [0,1]");
            item.attributes.push_back(x);
        }
        if (record.contains("tags")) {
            if (!record["tags"].is_array())
                fail_line(path, line_no, "'tags' must be an array of strings");
            item.has_tags = true;
            for (const auto& t : record["tags"]) {
                if (!t.is_string()) fail_line(path, line_no, "'tags' must be an array of strings");
                item.tags.push_back(t.get<std::string>());
            }
        }
        if (record.contains("text")) {
            if (!record["text"].is_string())
                fail_line(path, line_no, "'text' must be a string");
            item.has_text = true;
            item.text_tokens = tokenize(record["text"].get<std::string>());
        }
        items.push_back(std::move(item));
    }
    if (items.empty()) fail(ErrorKind::Validation, "no items in '" + path + "'");
    return items;
}

TransactionLog load_transactions(const std::string& path, const std::vector<Item>& items) {
    auto in = open_input(path);
    std::unordered_set<std::string> known;
    known.reserve(items.size());
    for (const auto& item : items) known.insert(item.item_id);

    TransactionLog log;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) fail(ErrorKind::Parse, path + ": empty file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "item_id,timestamp")
        fail_line(path, line_no, "expected header 'item_id,timestamp'");
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            fail_line(path, line_no, "expected exactly two fields");
        Transaction tx;
        tx.item_id = line.substr(0, comma);
        if (!known.count(tx.item_id))
            fail_line(path, line_no, "unknown item_id '" + tx.item_id + "'");
        try {
            tx.date = Date::parse(line.substr(comma + 1));
        } catch (const Error& e) {
            fail_line(path, line_no, e.what());
        }
        log.events.push_back(std::move(tx));
    }
    return log;
}

namespace {

// Term rows learned from the corpus, in first-appearance order, max-scaled
// to [0,1] so they share the attribute rows' range.
struct TermBlock {
    std::vector<std::string> row_names;
    Eigen::MatrixXd values;
};

TermBlock build_term_block(const std::vector<Item>& items, const std::string& prefix,
                           bool use_tags) {
    std::vector<std::string> order;
    std::unordered_map<std::string, std::size_t> index;
    auto intern = [&](const std::string& term) {
        auto [it, inserted] = index.emplace(term, order.size());
        if (inserted) order.push_back(term);
        return it->second;
    };

    const std::size_t n = items.size();
    std::vector<std::vector<std::pair<std::size_t, double>>> counts(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::unordered_map<std::size_t, double> local;
        const auto& terms = use_tags ? items[j].tags : items[j].text_tokens;
        for (const auto& term : terms) local[intern(term)] += 1.0;
        counts[j].assign(local.begin(), local.end());
    }

    TermBlock block;
    block.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(order.size()),
                                         static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (auto [row, count] : counts[j])
            block.values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) = count;

    for (Eigen::Index r = 0; r < block.values.rows(); ++r) {
        double peak = block.values.row(r).maxCoeff();
        if (peak > 0.0) block.values.row(r) /= peak;
    }
    block.row_names.reserve(order.size());
    for (const auto& term : order) block.row_names.push_back(prefix + term);
    return block;
}

}  // namespace

FeatureMatrix build_feature_matrix(const std::vector<Item>& items, AugmentMode mode,
                                   const AttributeVocabulary& vocabulary) {
    if (items.empty()) fail(ErrorKind::InvalidArgument, "no items to build a feature matrix from");
    const std::size_t m = vocabulary.size();
    const std::size_t n = items.size();
    for (const auto& item : items)
        if (item.attributes.size() != m)
            fail(ErrorKind::Validation, "item '" + item.item_id + "' has " +
                                            std::to_string(item.attributes.size()) +
                                            " attributes, vocabulary has " + std::to_string(m));

    const bool want_tags = mode == AugmentMode::Tags || mode == AugmentMode::TagsText;
    const bool want_text = mode == AugmentMode::Text || mode == AugmentMode::TagsText;
    for (const auto& item : items) {
        if (want_tags && !item.has_tags)
            fail(ErrorKind::Validation,
                 "augment mode needs tags but item '" + item.item_id + "' has none");
        if (want_text && !item.has_text)
            fail(ErrorKind::Validation,
                 "augment mode needs text but item '" + item.item_id + "' has none");
    }

    TermBlock tag_block, text_block;
    if (want_tags) tag_block = build_term_block(items, "tag:", true);
    if (want_text) text_block = build_term_block(items, "text:", false);

    const std::size_t extra = tag_block.row_names.size() + text_block.row_names.size();
    FeatureMatrix fm;
    fm.attribute_rows = m;
    fm.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m + extra),
                                      static_cast<Eigen::Index>(n));
    fm.row_names.reserve(m + extra);
    fm.row_names.assign(vocabulary.names.begin(), vocabulary.names.end());
    fm.item_ids.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        fm.item_ids.push_back(items[j].item_id);
        for (std::size_t r = 0; r < m; ++r)
            fm.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
                items[j].attributes[r];
    }
    Eigen::Index row = static_cast<Eigen::Index>(m);
    for (std::size_t b = 0; b < tag_block.row_names.size(); ++b, ++row) {
        fm.row_names.push_back(tag_block.row_names[b]);
        fm.values.row(row) = tag_block.values.row(static_cast<Eigen::Index>(b));
    }
    for (std::size_t b = 0; b < text_block.row_names.size(); ++b, ++row) {
        fm.row_names.push_back(text_block.row_names[b]);
        fm.values.row(row) = text_block.values.row(static_cast<Eigen::Index>(b));
    }
    return fm;
}

MonthlyBins bin_transactions(const TransactionLog& log, const TimeGrid& grid) {
    MonthlyBins bins;
    bins.items_by_month.resize(static_cast<std::size_t>(grid.months));
    for (const auto& tx : log.events) {
        YearMonth m = tx.date.year_month();
        if (!grid.contains(m)) {
            ++bins.dropped;
            continue;
        }
        bins.items_by_month[static_cast<std::size_t>(grid.index_of(m))].push_back(tx.item_id);
    }
    return bins;
}

}  // namespace trendcast
