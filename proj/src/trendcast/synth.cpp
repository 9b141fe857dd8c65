// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#include "trendcast/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>

#include "trendcast/error.hpp"
#include "trendcast/rng.hpp"

namespace trendcast {

using nlohmann::json;

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

const char* kind_name(TrendKind kind) {
    switch (kind) {
        case TrendKind::Linear: return "linear";
        case TrendKind::Flat: return "flat";
        case TrendKind::LogisticRise: return "logistic_rise";
        case TrendKind::LogisticDecline: return "logistic_decline";
        case TrendKind::Trough: return "trough";
        case TrendKind::RandomWalkDecay: return "rw_decay";
    }
    return "flat";
}

}  // namespace

TrendShape TrendShape::parse(const std::string& text) {
    TrendShape shape;
    std::string name = text;
    auto colon = text.find(':');
    if (colon != std::string::npos) {
        name = text.substr(0, colon);
        try {
            shape.param = std::stod(text.substr(colon + 1));
        } catch (const std::exception&) {
            fail(ErrorKind::Parse, "bad shape parameter in '" + text + "'");
        }
        shape.has_param = true;
    }
    if (name == "linear") shape.kind = TrendKind::Linear;
    else if (name == "flat") shape.kind = TrendKind::Flat;
    else if (name == "logistic_rise") shape.kind = TrendKind::LogisticRise;
    else if (name == "logistic_decline") shape.kind = TrendKind::LogisticDecline;
    else if (name == "trough") shape.kind = TrendKind::Trough;
    else if (name == "rw_decay") shape.kind = TrendKind::RandomWalkDecay;
    else
        fail(ErrorKind::Parse, "unknown trend shape '" + name + "'");
    return shape;
}

std::string TrendShape::str() const {
    if (!has_param) return kind_name(kind);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s:%g", kind_name(kind), param);
    return buf;
}

double trend_shape_value(const TrendShape& shape, int t, int months) {
    const double T = static_cast<double>(months);
    const double x = months > 1 ? static_cast<double>(t) / (T - 1.0) : 0.0;  // 0..1
    switch (shape.kind) {
        case TrendKind::Linear: {
            double rise = shape.has_param ? shape.param : 0.4;
            return std::max(0.01, 0.5 + rise * (x - 0.5));
        }
        case TrendKind::Flat:
            return shape.has_param ? shape.param : 0.45;
        case TrendKind::LogisticRise: {
            double tau = shape.has_param ? shape.param : T / 8.0;
            return 0.1 + 0.7 * logistic((static_cast<double>(t) - 0.6 * T) / tau);
        }
        case TrendKind::LogisticDecline: {
            double tau = shape.has_param ? shape.param : T / 8.0;
            return 0.1 + 0.7 * logistic(-(static_cast<double>(t) - 0.6 * T) / tau);
        }
        case TrendKind::Trough: {
            double depth = shape.has_param ? shape.param : 0.65;
            double u = 2.0 * x - 1.0;
            return 0.8 - depth + depth * u * u;
        }
        case TrendKind::RandomWalkDecay:
            fail(ErrorKind::InvalidArgument,
                 "rw_decay has no closed form; evaluate via generate_synthetic");
    }
    return 0.0;
}

namespace {

std::vector<TrendShape> default_shapes(int styles) {
    static const char* cycle[5] = {"linear:0.5", "flat:0.45", "logistic_decline",
                                   "flat:0.06", "trough"};
    std::vector<TrendShape> shapes;
    shapes.reserve(static_cast<std::size_t>(styles));
    for (int k = 0; k < styles; ++k) shapes.push_back(TrendShape::parse(cycle[k % 5]));
    return shapes;
}

// Largest-remainder apportionment of n among weights; ties go to lower index.
std::vector<int> apportion(const Eigen::VectorXd& weights, int n) {
    const int k = static_cast<int>(weights.size());
    double total = weights.sum();
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    if (total <= 0.0 || n <= 0) return counts;
    std::vector<double> remainders(static_cast<std::size_t>(k));
    int assigned = 0;
    for (int i = 0; i < k; ++i) {
        double share = weights[i] / total * n;
        counts[static_cast<std::size_t>(i)] = static_cast<int>(std::floor(share));
        remainders[static_cast<std::size_t>(i)] = share - std::floor(share);
        assigned += counts[static_cast<std::size_t>(i)];
    }
    std::vector<int> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return remainders[static_cast<std::size_t>(a)] > remainders[static_cast<std::size_t>(b)];
    });
    for (int i = 0; assigned < n; ++i)
        ++counts[static_cast<std::size_t>(order[static_cast<std::size_t>(i % k)])], ++assigned;
    return counts;
}

std::string padded_id(const char* prefix, int index, int width) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, index);
    return buf;
}

}  // namespace

SynthData generate_synthetic(const SynthConfig& config_in) {
    SynthConfig config = config_in;
    if (config.styles < 1) fail(ErrorKind::InvalidArgument, "need at least one style");
    if (config.attributes < config.styles)
        fail(ErrorKind::InvalidArgument, "need at least as many attributes as styles");
    if (config.items < 1) fail(ErrorKind::InvalidArgument, "need at least one item");
    if (config.months < 1) fail(ErrorKind::InvalidArgument, "need at least one month");
    if (config.shapes.empty()) config.shapes = default_shapes(config.styles);
    if (static_cast<int>(config.shapes.size()) != config.styles)
        fail(ErrorKind::InvalidArgument, "shape list length must equal the style count");

    const int K = config.styles;
    const int M = config.attributes;
    const int N = config.items;
    const int T = config.months;
    Rng rng(config.seed);

    SynthData data;
    data.config = config;

    // Planted styles: disjoint anchor attributes with strong weight, faint
    // background elsewhere, columns normalized to unit sum.
    data.w_star = Eigen::MatrixXd::Zero(M, K);
    for (int m = 0; m < M; ++m) {
        int anchor = m % K;
        for (int k = 0; k < K; ++k)
            data.w_star(m, k) = k == anchor ? rng.uniform(0.6, 1.0) : rng.uniform(0.0, 0.05);
    }
    for (int k = 0; k < K; ++k) data.w_star.col(k) /= data.w_star.col(k).sum();

    // Items: sparse mixtures dominated by one style.
    const int id_width = std::max(4, static_cast<int>(std::to_string(N - 1).size()));
    data.vocabulary.names.reserve(static_cast<std::size_t>(M));
    const int attr_width = std::max(3, static_cast<int>(std::to_string(M - 1).size()));
    for (int m = 0; m < M; ++m)
        data.vocabulary.names.push_back(padded_id("attr_", m, attr_width));

    std::vector<int> dominant(static_cast<std::size_t>(N));
    std::vector<std::vector<int>> by_style(static_cast<std::size_t>(K));
    data.items.reserve(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) {
        int d = static_cast<int>(rng.integer(static_cast<std::uint64_t>(K)));
        dominant[static_cast<std::size_t>(j)] = d;
        by_style[static_cast<std::size_t>(d)].push_back(j);
        Eigen::VectorXd h = Eigen::VectorXd::Zero(K);
        if (K == 1) {
            h[0] = 1.0;
        } else {
            double u = rng.uniform(0.85, 1.0);
            h[d] = u;
            double rest = 0.0;
            Eigen::VectorXd raw = Eigen::VectorXd::Zero(K);
            for (int k = 0; k < K; ++k) {
                if (k == d) continue;
                raw[k] = rng.uniform();
                rest += raw[k];
            }
            if (rest > 0.0) {
                for (int k = 0; k < K; ++k)
                    if (k != d) h[k] = (1.0 - u) * raw[k] / rest;
            } else {
                h[d] = 1.0;
            }
        }
        Eigen::VectorXd a = data.w_star * h;
        Item item;
        item.item_id = padded_id("item_", j, id_width);
        item.attributes.assign(a.data(), a.data() + a.size());
        data.items.push_back(std::move(item));
    }
    // A style with no dominant item gets a fallback so sampling stays total.
    for (int k = 0; k < K; ++k)
        if (by_style[static_cast<std::size_t>(k)].empty())
            by_style[static_cast<std::size_t>(k)].push_back(0);

    // Planted monthly style weights: shape value, optional 12-month sinusoid,
    // optional multiplicative log-normal noise; normalized to shares.
    Eigen::MatrixXd weights(K, T);
    std::vector<double> walk(static_cast<std::size_t>(K), 0.0);
    for (int k = 0; k < K; ++k) {
        const TrendShape& shape = config.shapes[static_cast<std::size_t>(k)];
        if (shape.kind == TrendKind::RandomWalkDecay)
            walk[static_cast<std::size_t>(k)] = rng.uniform(0.3, 0.7);
        for (int t = 0; t < T; ++t) {
            double w;
            if (shape.kind == TrendKind::RandomWalkDecay) {
                double sigma0 = shape.has_param ? shape.param : 0.12;
                // Innovations decay toward a floor so late months keep moving.
                double sigma = std::max(0.25 * sigma0,
                                        sigma0 * std::exp(-3.0 * t / static_cast<double>(T)));
                walk[static_cast<std::size_t>(k)] = std::clamp(
                    walk[static_cast<std::size_t>(k)] + sigma * rng.normal(), 0.05, 0.95);
                w = walk[static_cast<std::size_t>(k)];
            } else {
                w = trend_shape_value(shape, t, T);
            }
            if (config.seasonal_amplitude > 0.0)
                w *= 1.0 + config.seasonal_amplitude *
                               std::sin(2.0 * M_PI * (t % 12) / 12.0 + k);
            if (config.noise > 0.0) w *= std::exp(config.noise * rng.normal());
            weights(k, t) = std::max(w, 1e-9);
        }
    }
    data.trajectories = Eigen::MatrixXd(K, T);
    for (int t = 0; t < T; ++t) data.trajectories.col(t) = weights.col(t) / weights.col(t).sum();

    // Transactions: apportion the month's volume across styles by share and
    // cycle deterministically through each style's items.
    std::vector<std::size_t> cursor(static_cast<std::size_t>(K), 0);
    long counter = 0;
    for (int t = 0; t < T; ++t) {
        YearMonth m = YearMonth::from_index(config.start.index() + t);
        std::vector<int> counts = apportion(data.trajectories.col(t), config.transactions_per_month);
        for (int k = 0; k < K; ++k) {
            const auto& pool = by_style[static_cast<std::size_t>(k)];
            for (int c = 0; c < counts[static_cast<std::size_t>(k)]; ++c) {
                int j = pool[cursor[static_cast<std::size_t>(k)] % pool.size()];
                ++cursor[static_cast<std::size_t>(k)];
                Transaction tx;
                tx.item_id = data.items[static_cast<std::size_t>(j)].item_id;
                tx.date.year = m.year;
                tx.date.month = m.month;
                tx.date.day = 1 + static_cast<int>((counter * 7) % 28);
                ++counter;
                data.log.events.push_back(std::move(tx));
            }
        }
    }

    data.months.reserve(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t)
        data.months.push_back(YearMonth::from_index(config.start.index() + t).str());
    return data;
}

void write_synth_files(const SynthData& data, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) fail(ErrorKind::Io, "cannot create '" + out_dir + "': " + ec.message());

    auto open_out = [&](const std::string& name) {
        std::ofstream out(out_dir + "/" + name, std::ios::binary);
        if (!out) fail(ErrorKind::Io, "cannot write '" + out_dir + "/" + name + "'");
        return out;
    };

    {
        auto out = open_out("vocabulary.txt");
        for (const auto& name : data.vocabulary.names) out << name << "\n";
    }
    {
        auto out = open_out("items.jsonl");
        for (const auto& item : data.items) {
            json record;
            record["item_id"] = item.item_id;
            record["attributes"] = item.attributes;
            out << record.dump() << "\n";
        }
    }
    {
        auto out = open_out("transactions.csv");
        out << "item_id,timestamp\n";
        char buf[32];
        for (const auto& tx : data.log.events) {
            std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", tx.date.year, tx.date.month,
                          tx.date.day);
            out << tx.item_id << "," << buf << "\n";
        }
    }
    {
        json truth;
        json cfg;
        cfg["styles"] = data.config.styles;
        cfg["attributes"] = data.config.attributes;
        cfg["items"] = data.config.items;
        cfg["months"] = data.config.months;
        cfg["start"] = data.config.start.str();
        json shape_list = json::array();
        for (const auto& s : data.config.shapes) shape_list.push_back(s.str());
        cfg["shapes"] = shape_list;
        cfg["seasonal_amplitude"] = data.config.seasonal_amplitude;
        cfg["noise"] = data.config.noise;
        cfg["transactions_per_month"] = data.config.transactions_per_month;
        cfg["seed"] = data.config.seed;
        truth["config"] = cfg;
        truth["months"] = data.months;
        json w = json::array();
        for (int k = 0; k < data.w_star.cols(); ++k) {
            json col = json::array();
            for (int m = 0; m < data.w_star.rows(); ++m) col.push_back(data.w_star(m, k));
            w.push_back(col);
        }
        truth["w_star"] = w;
        json planted = json::array();
        for (int k = 0; k < data.trajectories.rows(); ++k) {
            json row = json::array();
            for (int t = 0; t < data.trajectories.cols(); ++t)
                row.push_back(data.trajectories(k, t));
            planted.push_back(row);
        }
        truth["trajectories"] = planted;
        auto out = open_out("truth.json");
        out << truth.dump(2) << "\n";
    }
}

}  // namespace trendcast
