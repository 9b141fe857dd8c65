// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#include "trendcast/styles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>

#include "trendcast/error.hpp"
#include "trendcast/rng.hpp"

namespace trendcast {

using nlohmann::json;

namespace {

constexpr double kDenomGuard = 1e-16;

// Kahan-compensated squared reconstruction error; the objective trace must be
// comparable at tolerances far below plain summation noise.
double reconstruction_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& w,
                            const Eigen::MatrixXd& h) {
    Eigen::MatrixXd residual = a - w * h;
    double sum = 0.0, carry = 0.0;
    const double* p = residual.data();
    const double* end = p + residual.size();
    for (; p != end; ++p) {
        double term = *p * *p - carry;
        double next = sum + term;
        carry = (next - sum) - term;
        sum = next;
    }
    return sum;
}

}  // namespace

StyleModel fit_styles(const FeatureMatrix& matrix, const FitOptions& options) {
    const Eigen::Index rows = matrix.values.rows();
    const Eigen::Index n = matrix.values.cols();
    const int k = options.k;
    if (k < 1) fail(ErrorKind::InvalidArgument, "style count must be at least 1");
    if (k > std::min(rows, n))
        fail(ErrorKind::InvalidArgument,
             "style count " + std::to_string(k) + " exceeds min(features, items) = " +
                 std::to_string(std::min(rows, n)));
    if (options.sparsity < 0.0) fail(ErrorKind::InvalidArgument, "sparsity must be nonnegative");
    if ((matrix.values.array() < 0.0).any())
        fail(ErrorKind::InvalidArgument, "feature matrix has negative entries");
    if (matrix.values.sum() <= 0.0)
        fail(ErrorKind::InvalidArgument, "feature matrix is all zero");

    const Eigen::MatrixXd& a = matrix.values;
    Rng rng(options.seed);

    // uniform(0,1) init, one normalization pass
    Eigen::MatrixXd w(rows, k), h(k, n);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < k; ++c) w(r, c) = rng.uniform();
    for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index c = 0; c < n; ++c) h(r, c) = rng.uniform();
    for (Eigen::Index c = 0; c < k; ++c) w.col(c) /= w.col(c).sum();
    for (Eigen::Index c = 0; c < n; ++c) h.col(c) /= h.col(c).sum();

    StyleModel model;
    model.k = k;
    model.seed = options.seed;
    model.sparsity = options.sparsity;
    model.feature_names = matrix.row_names;
    model.item_ids = matrix.item_ids;
    model.attribute_rows = matrix.attribute_rows;
    model.objective_trace.reserve(static_cast<std::size_t>(options.max_iters));

    double previous = -1.0;
    for (int iter = 0; iter < options.max_iters; ++iter) {
        // H step: the L1 penalty adds its weight to the denominator.
        {
            Eigen::MatrixXd numerator = w.transpose() * a;
            Eigen::MatrixXd denominator = (w.transpose() * w) * h;
            denominator.array() += options.sparsity + kDenomGuard;
            h.array() *= numerator.array() / denominator.array();
        }
        // W step
        {
            Eigen::MatrixXd numerator = a * h.transpose();
            Eigen::MatrixXd denominator = w * (h * h.transpose());
            denominator.array() += kDenomGuard;
            w.array() *= numerator.array() / denominator.array();
        }
        double objective = reconstruction_error(a, w, h) + options.sparsity * h.sum();
        model.objective_trace.push_back(objective);
        if (iter > 0) {
            double scale = std::max(std::abs(previous), 1e-30);
            if (std::abs(previous - objective) / scale < options.tol) break;
        }
        previous = objective;
    }

    // Fold each column scale of W into H, then normalize H columns into
    // per-item style distributions.
    for (int c = 0; c < k; ++c) {
        double scale = w.col(c).sum();
        if (scale > 0.0) {
            w.col(c) /= scale;
            h.row(c) *= scale;
        } else {
            w.col(c).setConstant(1.0 / static_cast<double>(rows));
        }
    }
    for (Eigen::Index c = 0; c < n; ++c) {
        double scale = h.col(c).sum();
        bool zero_input = a.col(c).sum() <= 0.0;
        if (scale > 0.0 && !zero_input) {
            h.col(c) /= scale;
        } else {
            // p(style | item) is undefined for an all-zero item
            h.col(c).setConstant(1.0 / static_cast<double>(k));
            model.degenerate_items.push_back(matrix.item_ids[static_cast<std::size_t>(c)]);
        }
    }

    model.w = std::move(w);
    model.h = std::move(h);
    return model;
}

Eigen::VectorXd style_given_item(const StyleModel& model, int item_index) {
    if (item_index < 0 || item_index >= model.h.cols())
        fail(ErrorKind::InvalidArgument,
             "item index " + std::to_string(item_index) + " out of range");
    return model.h.col(item_index);
}

std::vector<StyleDescription> describe_styles(const StyleModel& model, int top_a, int top_x) {
    std::vector<StyleDescription> descriptions;
    descriptions.reserve(static_cast<std::size_t>(model.k));
    const auto features = static_cast<std::size_t>(model.w.rows());
    const auto items = static_cast<std::size_t>(model.h.cols());
    for (int k = 0; k < model.k; ++k) {
        StyleDescription d;
        d.style = k;

        std::vector<std::size_t> order(features);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return model.w(static_cast<Eigen::Index>(a), k) >
                   model.w(static_cast<Eigen::Index>(b), k);
        });
        const std::size_t na = std::min<std::size_t>(static_cast<std::size_t>(std::max(top_a, 0)),
                                                     features);
        for (std::size_t i = 0; i < na; ++i)
            d.top_attributes.emplace_back(model.feature_names[order[i]],
                                          model.w(static_cast<Eigen::Index>(order[i]), k));

        std::vector<std::size_t> items_order(items);
        std::iota(items_order.begin(), items_order.end(), 0);
        std::stable_sort(items_order.begin(), items_order.end(),
                         [&](std::size_t a, std::size_t b) {
                             return model.h(k, static_cast<Eigen::Index>(a)) >
                                    model.h(k, static_cast<Eigen::Index>(b));
                         });
        const std::size_t nx = std::min<std::size_t>(static_cast<std::size_t>(std::max(top_x, 0)),
                                                     items);
        for (std::size_t i = 0; i < nx; ++i)
            d.exemplar_items.push_back(model.item_ids[items_order[i]]);

        descriptions.push_back(std::move(d));
    }
    return descriptions;
}

void save_style_model(const StyleModel& model, const std::string& path) {
    json doc;
    doc["K"] = model.k;
    doc["seed"] = model.seed;
    doc["sparsity"] = model.sparsity;
    doc["vocabulary"] = model.feature_names;
    doc["n_attribute_rows"] = model.attribute_rows;
    doc["item_ids"] = model.item_ids;
    json w = json::array();
    for (int k = 0; k < model.k; ++k) {
        json col = json::array();
        for (Eigen::Index r = 0; r < model.w.rows(); ++r) col.push_back(model.w(r, k));
        w.push_back(col);
    }
    doc["W"] = w;
    json h = json::array();
    for (Eigen::Index c = 0; c < model.h.cols(); ++c) {
        json col = json::array();
        for (int k = 0; k < model.k; ++k) col.push_back(model.h(k, c));
        h.push_back(col);
    }
    doc["H"] = h;
    doc["objective_trace"] = model.objective_trace;
    doc["degenerate_items"] = model.degenerate_items;

    json styles = json::array();
    for (const auto& d : describe_styles(model, 10, 5)) {
        json entry;
        entry["style"] = d.style;
        json tops = json::array();
        for (const auto& [name, value] : d.top_attributes)
            tops.push_back(json{{"attribute", name}, {"probability", value}});
        entry["top_attributes"] = tops;
        entry["exemplars"] = d.exemplar_items;
        styles.push_back(entry);
    }
    doc["styles"] = styles;

    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write '" + path + "'");
    out << doc.dump(2) << "\n";
}

StyleModel load_style_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::MissingInput, "cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, path + ": " + e.what());
    }
    StyleModel model;
    try {
        model.k = doc.at("K").get<int>();
        model.seed = doc.at("seed").get<std::uint64_t>();
        model.sparsity = doc.at("sparsity").get<double>();
        model.feature_names = doc.at("vocabulary").get<std::vector<std::string>>();
        model.attribute_rows = doc.at("n_attribute_rows").get<std::size_t>();
        model.item_ids = doc.at("item_ids").get<std::vector<std::string>>();
        model.objective_trace = doc.at("objective_trace").get<std::vector<double>>();
        if (doc.contains("degenerate_items"))
            model.degenerate_items = doc["degenerate_items"].get<std::vector<std::string>>();
        const auto& w = doc.at("W");
        const auto rows = static_cast<Eigen::Index>(model.feature_names.size());
        model.w = Eigen::MatrixXd::Zero(rows, model.k);
        for (int k = 0; k < model.k; ++k)
            for (Eigen::Index r = 0; r < rows; ++r)
                model.w(r, k) = w.at(static_cast<std::size_t>(k))
                                    .at(static_cast<std::size_t>(r))
                                    .get<double>();
        const auto& h = doc.at("H");
        const auto items = static_cast<Eigen::Index>(model.item_ids.size());
        model.h = Eigen::MatrixXd::Zero(model.k, items);
        for (Eigen::Index c = 0; c < items; ++c)
            for (int k = 0; k < model.k; ++k)
                model.h(k, c) = h.at(static_cast<std::size_t>(c))
                                    .at(static_cast<std::size_t>(k))
                                    .get<double>();
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, path + ": " + e.what());
    }
    return model;
}

}  // namespace trendcast
