// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#include "trendcast/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>

#include "trendcast/error.hpp"

namespace trendcast {

using nlohmann::json;

const char* dynamics_name(Dynamics label) {
    switch (label) {
        case Dynamics::OutOfFashion: return "out_of_fashion";
        case Dynamics::Classic: return "classic";
        case Dynamics::Trending: return "trending";
        case Dynamics::Unpopular: return "unpopular";
        case Dynamics::ReEmerging: return "re_emerging";
    }
    return "classic";
}

namespace {

double least_squares_slope(const double* values, int n) {
    if (n < 2) return 0.0;
    double mean_t = (n - 1) / 2.0;
    double mean_y = 0.0;
    for (int i = 0; i < n; ++i) mean_y += values[i];
    mean_y /= n;
    double cov = 0.0, var = 0.0;
    for (int i = 0; i < n; ++i) {
        cov += (i - mean_t) * (values[i] - mean_y);
        var += (i - mean_t) * (i - mean_t);
    }
    return cov / var;
}

double mean_of(const double* values, int n) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += values[i];
    return n > 0 ? total / n : 0.0;
}

// Type-7 quantile (linear interpolation between order statistics).
double percentile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    if (values.size() == 1) return values[0];
    double h = p * static_cast<double>(values.size() - 1);
    std::size_t lo = static_cast<std::size_t>(std::floor(h));
    std::size_t hi = std::min(lo + 1, values.size() - 1);
    double w = h - std::floor(h);
    return (1.0 - w) * values[lo] + w * values[hi];
}

}  // namespace

std::vector<DynamicsLabel> classify_dynamics(const TrajectorySet& trajectories,
                                             const DynamicsOptions& options) {
    const int t_count = trajectories.months();
    const int styles = trajectories.styles();
    if (t_count < 24)
        fail(ErrorKind::InvalidArgument,
             "dynamics classification needs at least 24 months, got " + std::to_string(t_count));

    const double theta = options.theta.value_or(0.1 / static_cast<double>(t_count));
    const int recent = std::max(2, static_cast<int>(std::ceil(t_count * options.recent_fraction)));
    const int third = t_count / 3;

    std::vector<double> levels(static_cast<std::size_t>(styles));
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(styles));
    for (int s = 0; s < styles; ++s) {
        rows[static_cast<std::size_t>(s)] = trajectories.series(s);
        levels[static_cast<std::size_t>(s)] =
            mean_of(rows[static_cast<std::size_t>(s)].data(), t_count);
    }
    const double level_quartile = percentile(levels, 0.25);

    std::vector<DynamicsLabel> labels;
    labels.reserve(static_cast<std::size_t>(styles));
    for (int s = 0; s < styles; ++s) {
        const double* y = rows[static_cast<std::size_t>(s)].data();
        DynamicsLabel entry;
        entry.style = s;
        DynamicsEvidence& ev = entry.evidence;
        ev.slope_full = least_squares_slope(y, t_count);
        ev.slope_recent = least_squares_slope(y + (t_count - recent), recent);
        ev.mean_level = levels[static_cast<std::size_t>(s)];
        ev.first_third_mean = mean_of(y, third);
        ev.middle_third_mean = mean_of(y + third, third);
        ev.last_third_mean = mean_of(y + 2 * third, t_count - 2 * third);
        ev.theta = theta;
        ev.level_quartile = level_quartile;

        if (ev.first_third_mean > ev.middle_third_mean && ev.slope_recent > theta)
            entry.label = Dynamics::ReEmerging;
        else if (ev.slope_recent > theta)
            entry.label = Dynamics::Trending;
        else if (ev.slope_recent < -theta && ev.mean_level > level_quartile)
            entry.label = Dynamics::OutOfFashion;
        else if (ev.mean_level < level_quartile && std::abs(ev.slope_recent) <= theta)
            entry.label = Dynamics::Unpopular;
        else
            entry.label = Dynamics::Classic;
        labels.push_back(entry);
    }
    return labels;
}

void save_dynamics(const std::vector<DynamicsLabel>& labels, const std::string& path) {
    json doc = json::array();
    for (const auto& entry : labels) {
        json ev;
        ev["slope_full"] = entry.evidence.slope_full;
        ev["slope_recent"] = entry.evidence.slope_recent;
        ev["mean_level"] = entry.evidence.mean_level;
        ev["first_third_mean"] = entry.evidence.first_third_mean;
        ev["middle_third_mean"] = entry.evidence.middle_third_mean;
        ev["last_third_mean"] = entry.evidence.last_third_mean;
        ev["theta"] = entry.evidence.theta;
        ev["level_quartile"] = entry.evidence.level_quartile;
        doc.push_back(json{{"style", entry.style},
                           {"label", dynamics_name(entry.label)},
                           {"evidence", ev}});
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write '" + path + "'");
    out << doc.dump(2) << "\n";
}

AttributeForecast forecast_attributes(const StyleModel& model,
                                      const std::vector<double>& style_forecast,
                                      const std::string& month_label) {
    if (static_cast<int>(style_forecast.size()) != model.k)
        fail(ErrorKind::InvalidArgument, "style forecast length does not match K");
    double total = 0.0;
    for (double v : style_forecast) {
        if (v < 0.0) fail(ErrorKind::InvalidArgument, "style forecast has negative entries");
        total += v;
    }
    if (total <= 0.0) fail(ErrorKind::InvalidArgument, "style forecast sums to zero");

    Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(style_forecast.data(), model.k);
    p /= total;

    const auto attr_rows = static_cast<Eigen::Index>(model.attribute_rows);
    Eigen::VectorXd probabilities = model.w.topRows(attr_rows) * p;
    if (static_cast<std::size_t>(model.w.rows()) > model.attribute_rows) {
        double mass = probabilities.sum();
        if (mass > 0.0) probabilities /= mass;
    }

    AttributeForecast out;
    out.month = month_label;
    out.probabilities.assign(probabilities.data(), probabilities.data() + probabilities.size());
    out.ranking.resize(static_cast<std::size_t>(attr_rows));
    std::iota(out.ranking.begin(), out.ranking.end(), 0);
    std::stable_sort(out.ranking.begin(), out.ranking.end(), [&](int a, int b) {
        return out.probabilities[static_cast<std::size_t>(a)] >
               out.probabilities[static_cast<std::size_t>(b)];
    });
    return out;
}

void save_attribute_forecast(const AttributeForecast& forecast, const StyleModel& model,
                             const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write '" + path + "'");
    out << "rank,attribute,probability\n";
    char buf[32];
    for (std::size_t i = 0; i < forecast.ranking.size(); ++i) {
        int attr = forecast.ranking[i];
        std::snprintf(buf, sizeof(buf), "%.17g",
                      forecast.probabilities[static_cast<std::size_t>(attr)]);
        out << (i + 1) << "," << model.feature_names[static_cast<std::size_t>(attr)] << ","
            << buf << "\n";
    }
}

// ---------------------------------------------------------------------------
// Report emission

namespace {

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

// Minimal line chart: observed months as circles, forecast overlay (from
// forecast_offset) as a second point series, a dashed marker at the split.
std::string render_style_svg(const std::vector<double>& observed,
                             const std::vector<double>& forecast, std::size_t forecast_offset,
                             const std::string& title) {
    const double width = 720.0, height = 240.0, pad = 30.0;
    const std::size_t total = std::max(observed.size(), forecast_offset + forecast.size());
    double peak = 1e-12;
    for (double v : observed) peak = std::max(peak, v);
    for (double v : forecast) peak = std::max(peak, v);
    auto x_at = [&](std::size_t i) {
        return total > 1 ? pad + (width - 2 * pad) * static_cast<double>(i) /
                                     static_cast<double>(total - 1)
                         : width / 2;
    };
    auto y_at = [&](double v) { return height - pad - (height - 2 * pad) * (v / peak); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<text x=\"" << pad << "\" y=\"16\" font-size=\"12\">" << title << "</text>\n";
    svg << "<line x1=\"" << pad << "\" y1=\"" << height - pad << "\" x2=\"" << width - pad
        << "\" y2=\"" << height - pad << "\" stroke=\"#888\"/>\n";

    auto polyline = [&](std::size_t offset, const std::vector<double>& values,
                        const char* color, const char* dash) {
        if (values.empty()) return;
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\"" << dash << " points=\"";
        for (std::size_t i = 0; i < values.size(); ++i)
            svg << fmt2(x_at(offset + i)) << "," << fmt2(y_at(values[i])) << " ";
        svg << "\"/>\n";
    };
    polyline(0, observed, "#1f6fb2", "");
    polyline(forecast_offset, forecast, "#d1495b", " stroke-dasharray=\"5 3\"");

    for (std::size_t i = 0; i < observed.size(); ++i)
        svg << "<circle class=\"obs\" cx=\"" << fmt2(x_at(i)) << "\" cy=\""
            << fmt2(y_at(observed[i])) << "\" r=\"2\" fill=\"#1f6fb2\"/>\n";
    for (std::size_t i = 0; i < forecast.size(); ++i)
        svg << "<circle class=\"fc\" cx=\"" << fmt2(x_at(forecast_offset + i)) << "\" cy=\""
            << fmt2(y_at(forecast[i])) << "\" r=\"2\" fill=\"#d1495b\"/>\n";

    if (!forecast.empty() && forecast_offset > 0) {
        double xs = (x_at(forecast_offset - 1) + x_at(forecast_offset)) / 2.0;
        svg << "<line class=\"split\" x1=\"" << fmt2(xs) << "\" y1=\"" << pad << "\" x2=\""
            << fmt2(xs) << "\" y2=\"" << height - pad
            << "\" stroke=\"#444\" stroke-dasharray=\"4 3\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write '" + path + "'");
    out << content;
}

}  // namespace

void emit_report(const ReportInputs& inputs, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir + "/plots", ec);
    if (ec) fail(ErrorKind::Io, "cannot create '" + out_dir + "/plots': " + ec.message());

    const int styles = inputs.trajectories ? inputs.trajectories->styles() : 0;

    std::ostringstream md;
    md << "# Style trend report\n\n";

    if (inputs.trajectories) {
        md << "Months: " << inputs.trajectories->months() << ", styles: " << styles << "\n\n";
        if (!inputs.trajectories->empty_bins.empty()) {
            md << "Interpolated months:";
            for (int i : inputs.trajectories->empty_bins)
                md << " " << inputs.trajectories->grid.month_at(i).str();
            md << "\n\n";
        }
    }

    if (inputs.benchmark) {
        md << "## Forecast benchmark\n\n" << report_markdown_table(*inputs.benchmark) << "\n";
    }

    for (int s = 0; s < styles; ++s) {
        md << "## Style " << s << "\n\n";
        if (inputs.model) {
            auto descriptions = describe_styles(*inputs.model, 5, 3);
            const auto& d = descriptions[static_cast<std::size_t>(s)];
            md << "Top attributes:";
            for (const auto& [name, value] : d.top_attributes)
                md << " " << name << " (" << fmt2(value * 100) << "%)";
            md << "  \nExemplars:";
            for (const auto& id : d.exemplar_items) md << " " << id;
            md << "\n\n";
        }
        if (inputs.dynamics && s < static_cast<int>(inputs.dynamics->size())) {
            const auto& label = (*inputs.dynamics)[static_cast<std::size_t>(s)];
            md << "Dynamics: **" << dynamics_name(label.label) << "** (recent slope "
               << label.evidence.slope_recent << ")\n\n";
        }

        std::vector<double> observed = inputs.trajectories->series(s);
        std::vector<double> forecast;
        if (s < static_cast<int>(inputs.forecasts.size()))
            forecast = inputs.forecasts[static_cast<std::size_t>(s)];
        char name[64];
        std::snprintf(name, sizeof(name), "plots/style_%03d.svg", s);
        std::string title = "style " + std::to_string(s);
        if (!inputs.forecast_model.empty() && !forecast.empty())
            title += " (forecast: " + inputs.forecast_model + ")";
        write_file(out_dir + "/" + name,
                   render_style_svg(observed, forecast,
                                    static_cast<std::size_t>(std::max(inputs.forecast_offset, 0)),
                                    title));
        md << "![style " << s << "](" << name << ")\n\n";
    }

    if (inputs.attributes && inputs.model) {
        md << "## Forecasted attributes\n\n";
        md << "| Rank | Attribute | Probability |\n|------|-----------|-------------|\n";
        const std::size_t top = std::min<std::size_t>(15, inputs.attributes->ranking.size());
        for (std::size_t i = 0; i < top; ++i) {
            int attr = inputs.attributes->ranking[i];
            md << "| " << (i + 1) << " | "
               << inputs.model->feature_names[static_cast<std::size_t>(attr)] << " | "
               << inputs.attributes->probabilities[static_cast<std::size_t>(attr)] << " |\n";
        }
        md << "\n";

        // Popularity-proportional weights for word-cloud style rendering.
        std::ostringstream cloud;
        cloud << "attribute,probability,weight\n";
        double top_p = 0.0;
        for (double v : inputs.attributes->probabilities) top_p = std::max(top_p, v);
        char buf[32];
        for (std::size_t i = 0; i < inputs.attributes->ranking.size(); ++i) {
            int attr = inputs.attributes->ranking[i];
            double p = inputs.attributes->probabilities[static_cast<std::size_t>(attr)];
            cloud << inputs.model->feature_names[static_cast<std::size_t>(attr)];
            std::snprintf(buf, sizeof(buf), "%.17g", p);
            cloud << "," << buf;
            std::snprintf(buf, sizeof(buf), "%.4f", top_p > 0 ? p / top_p : 0.0);
            cloud << "," << buf << "\n";
        }
        write_file(out_dir + "/wordcloud.csv", cloud.str());
    }

    write_file(out_dir + "/report.md", md.str());
}

}  // namespace trendcast
