// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#include "trendcast/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trendcast/error.hpp"
#include "trendcast/rng.hpp"

namespace trendcast {

namespace {

constexpr double kRidgeDamping = 1e-8;
constexpr double kTieTolerance = 1e-12;

void require_series(const std::vector<double>& series, std::size_t minimum,
                    const char* what) {
    if (series.size() < minimum)
        fail(ErrorKind::InvalidArgument, std::string(what) + " needs at least " +
                                             std::to_string(minimum) + " observations, got " +
                                             std::to_string(series.size()));
    for (double v : series)
        if (!std::isfinite(v))
            fail(ErrorKind::InvalidArgument, std::string(what) + ": series has non-finite values");
}

std::vector<double> difference(const std::vector<double>& series, int d) {
    std::vector<double> out = series;
    for (int pass = 0; pass < d; ++pass) {
        if (out.size() < 2)
            fail(ErrorKind::InvalidArgument, "series too short to difference");
        std::vector<double> next(out.size() - 1);
        for (std::size_t i = 1; i < out.size(); ++i) next[i - 1] = out[i] - out[i - 1];
        out = std::move(next);
    }
    return out;
}

// Integrates forecasts of the d-times differenced series back to the
// original scale, anchored at the tail of the observed series.
std::vector<double> integrate(const std::vector<double>& series, int d,
                              const std::vector<double>& diff_forecast) {
    std::vector<double> out = diff_forecast;
    for (int level = d - 1; level >= 0; --level) {
        double anchor = difference(series, level).back();
        for (double& v : out) {
            anchor += v;
            v = anchor;
        }
    }
    return out;
}

// Least squares with a rank check; rank-deficient designs fall back to a
// lightly damped ridge solve.
Eigen::VectorXd solve_least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                    bool* used_ridge) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() == x.cols() && x.rows() >= x.cols()) {
        if (used_ridge) *used_ridge = false;
        return qr.solve(y);
    }
    if (used_ridge) *used_ridge = true;
    Eigen::MatrixXd gram = x.transpose() * x;
    gram.diagonal().array() += kRidgeDamping;
    return gram.ldlt().solve(x.transpose() * y);
}

}  // namespace

ModelFamily parse_model_family(const std::string& name) {
    if (name == "mean") return ModelFamily::NaiveMean;
    if (name == "last") return ModelFamily::NaiveLast;
    if (name == "drift") return ModelFamily::NaiveDrift;
    if (name == "exp") return ModelFamily::Exp;
    if (name == "ar") return ModelFamily::Ar;
    if (name == "ars" || name == "ar+s") return ModelFamily::ArSeasonal;
    if (name == "var") return ModelFamily::Var;
    if (name == "arima") return ModelFamily::Arima;
    if (name == "tlnn") return ModelFamily::Tlnn;
    if (name == "ffnn") return ModelFamily::Ffnn;
    fail(ErrorKind::InvalidArgument, "unknown forecast model '" + name + "'");
}

const char* model_family_name(ModelFamily family) {
    switch (family) {
        case ModelFamily::NaiveMean: return "mean";
        case ModelFamily::NaiveLast: return "last";
        case ModelFamily::NaiveDrift: return "drift";
        case ModelFamily::Exp: return "exp";
        case ModelFamily::Ar: return "ar";
        case ModelFamily::ArSeasonal: return "ars";
        case ModelFamily::Var: return "var";
        case ModelFamily::Arima: return "arima";
        case ModelFamily::Tlnn: return "tlnn";
        case ModelFamily::Ffnn: return "ffnn";
    }
    return "unknown";
}

ForecastResult exp_forecast(const std::vector<double>& series, double alpha, int horizon) {
    require_series(series, 1, "exponential smoothing");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        fail(ErrorKind::InvalidArgument,
             "smoothing factor must lie in [0,1], got " + std::to_string(alpha));
    if (horizon < 0) fail(ErrorKind::InvalidArgument, "horizon must be nonnegative");
    double level = series[0];
    for (std::size_t t = 1; t < series.size(); ++t)
        level = alpha * series[t] + (1.0 - alpha) * level;
    ForecastResult out;
    out.model = "exp";
    out.hyperparams["alpha"] = alpha;
    out.horizon = horizon;
    out.predictions.assign(static_cast<std::size_t>(horizon), level);
    return out;
}

double exp_level_expanded(const std::vector<double>& series, double alpha) {
    require_series(series, 1, "exponential smoothing");
    const std::size_t n = series.size();
    double sum = 0.0;
    for (std::size_t t = 1; t < n; ++t)
        sum += alpha * std::pow(1.0 - alpha, static_cast<double>(n - 1 - t)) * series[t];
    sum += std::pow(1.0 - alpha, static_cast<double>(n - 1)) * series[0];
    return sum;
}

ForecastResult naive_mean(const std::vector<double>& series, int horizon) {
    require_series(series, 1, "naive mean");
    double mean = std::accumulate(series.begin(), series.end(), 0.0) /
                  static_cast<double>(series.size());
    ForecastResult out;
    out.model = "mean";
    out.horizon = horizon;
    out.predictions.assign(static_cast<std::size_t>(horizon), mean);
    return out;
}

ForecastResult naive_last(const std::vector<double>& series, int horizon) {
    require_series(series, 1, "naive last");
    ForecastResult out;
    out.model = "last";
    out.horizon = horizon;
    out.predictions.assign(static_cast<std::size_t>(horizon), series.back());
    return out;
}

ForecastResult naive_drift(const std::vector<double>& series, int horizon) {
    require_series(series, 2, "naive drift");
    const double last = series.back();
    const double slope = (last - series.front()) / static_cast<double>(series.size() - 1);
    ForecastResult out;
    out.model = "drift";
    out.horizon = horizon;
    out.predictions.resize(static_cast<std::size_t>(horizon));
    for (int h = 1; h <= horizon; ++h)
        out.predictions[static_cast<std::size_t>(h - 1)] = last + slope * h;
    return out;
}

namespace {

// Shared AR core on an already differenced series. Regressors are the
// intercept, lags 1..p and optionally the seasonal lag.
struct ArFit {
    Eigen::VectorXd coeffs;
    bool ridge = false;
    int p = 0;
    bool seasonal = false;
};

ArFit fit_ar_core(const std::vector<double>& z, int p, bool seasonal) {
    const int max_lag = seasonal ? std::max(p, kSeasonalPeriod) : p;
    const int n = static_cast<int>(z.size());
    const int rows = n - max_lag;
    if (rows < 1)
        fail(ErrorKind::InvalidArgument,
             "series too short for an autoregression with lag " + std::to_string(max_lag));
    const int cols = 1 + p + (seasonal ? 1 : 0);
    Eigen::MatrixXd x(rows, cols);
    Eigen::VectorXd y(rows);
    for (int i = 0; i < rows; ++i) {
        const int t = max_lag + i;
        y[i] = z[static_cast<std::size_t>(t)];
        x(i, 0) = 1.0;
        for (int j = 1; j <= p; ++j) x(i, j) = z[static_cast<std::size_t>(t - j)];
        if (seasonal) x(i, cols - 1) = z[static_cast<std::size_t>(t - kSeasonalPeriod)];
    }
    ArFit fit;
    fit.p = p;
    fit.seasonal = seasonal;
    fit.coeffs = solve_least_squares(x, y, &fit.ridge);
    return fit;
}

double ar_step(const ArFit& fit, const std::vector<double>& history) {
    const int n = static_cast<int>(history.size());
    double value = fit.coeffs[0];
    for (int j = 1; j <= fit.p; ++j)
        value += fit.coeffs[j] * history[static_cast<std::size_t>(n - j)];
    if (fit.seasonal)
        value += fit.coeffs[fit.coeffs.size() - 1] *
                 history[static_cast<std::size_t>(n - kSeasonalPeriod)];
    return value;
}

}  // namespace

ForecastResult ar_forecast(const std::vector<double>& series, int lags, bool seasonal,
                           int horizon, int diff) {
    if (lags < 1) fail(ErrorKind::InvalidArgument, "autoregression needs at least one lag");
    if (diff < 0) fail(ErrorKind::InvalidArgument, "differencing order must be nonnegative");
    const int max_lag = seasonal ? std::max(lags, kSeasonalPeriod) : lags;
    require_series(series, static_cast<std::size_t>(max_lag + diff + 1), "autoregression");

    std::vector<double> z = difference(series, diff);
    ArFit fit = fit_ar_core(z, lags, seasonal);

    std::vector<double> history = z;
    std::vector<double> diff_forecast;
    diff_forecast.reserve(static_cast<std::size_t>(horizon));
    for (int h = 0; h < horizon; ++h) {
        double next = ar_step(fit, history);
        history.push_back(next);
        diff_forecast.push_back(next);
    }

    ForecastResult out;
    out.model = seasonal ? "ars" : "ar";
    out.hyperparams["p"] = lags;
    out.hyperparams["d"] = diff;
    out.horizon = horizon;
    out.ridge_fallback = fit.ridge;
    out.coefficients.assign(fit.coeffs.data(), fit.coeffs.data() + fit.coeffs.size());
    out.predictions = diff > 0 ? integrate(series, diff, diff_forecast) : diff_forecast;
    return out;
}

std::vector<ForecastResult> var_forecast(const std::vector<std::vector<double>>& panel, int lags,
                                         int horizon) {
    if (panel.empty()) fail(ErrorKind::InvalidArgument, "empty panel");
    if (lags < 1) fail(ErrorKind::InvalidArgument, "vector autoregression needs at least one lag");
    const int k = static_cast<int>(panel.size());
    const std::size_t n = panel[0].size();
    for (const auto& series : panel) {
        if (series.size() != n)
            fail(ErrorKind::InvalidArgument, "panel series must share a length");
        require_series(series, static_cast<std::size_t>(lags + 1), "vector autoregression");
    }

    const int rows = static_cast<int>(n) - lags;
    const int cols = 1 + k * lags;
    Eigen::MatrixXd x(rows, cols);
    Eigen::MatrixXd y(rows, k);
    for (int i = 0; i < rows; ++i) {
        const int t = lags + i;
        x(i, 0) = 1.0;
        for (int j = 1; j <= lags; ++j)
            for (int s = 0; s < k; ++s)
                x(i, 1 + (j - 1) * k + s) = panel[static_cast<std::size_t>(s)]
                                                 [static_cast<std::size_t>(t - j)];
        for (int s = 0; s < k; ++s)
            y(i, s) = panel[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)];
    }

    bool ridge = false;
    Eigen::MatrixXd coeffs(cols, k);
    {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
        if (qr.rank() == x.cols() && x.rows() >= x.cols()) {
            coeffs = qr.solve(y);
        } else {
            ridge = true;
            Eigen::MatrixXd gram = x.transpose() * x;
            gram.diagonal().array() += kRidgeDamping;
            coeffs = gram.ldlt().solve(x.transpose() * y);
        }
    }

    std::vector<std::vector<double>> history(panel);
    std::vector<ForecastResult> results(static_cast<std::size_t>(k));
    for (int s = 0; s < k; ++s) {
        auto& r = results[static_cast<std::size_t>(s)];
        r.model = "var";
        r.hyperparams["p"] = lags;
        r.horizon = horizon;
        r.ridge_fallback = ridge;
        r.coefficients.reserve(static_cast<std::size_t>(cols));
        for (int c = 0; c < cols; ++c) r.coefficients.push_back(coeffs(c, s));
        r.predictions.reserve(static_cast<std::size_t>(horizon));
    }
    for (int h = 0; h < horizon; ++h) {
        const int t = static_cast<int>(history[0].size());
        Eigen::VectorXd next = Eigen::VectorXd::Zero(k);
        for (int s = 0; s < k; ++s) {
            double value = coeffs(0, s);
            for (int j = 1; j <= lags; ++j)
                for (int q = 0; q < k; ++q)
                    value += coeffs(1 + (j - 1) * k + q, s) *
                             history[static_cast<std::size_t>(q)][static_cast<std::size_t>(t - j)];
            next[s] = value;
        }
        for (int s = 0; s < k; ++s) {
            history[static_cast<std::size_t>(s)].push_back(next[s]);
            results[static_cast<std::size_t>(s)].predictions.push_back(next[s]);
        }
    }
    return results;
}

namespace {

struct CssModel {
    double intercept = 0.0;
    Eigen::VectorXd phi;  // AR coefficients
    Eigen::VectorXd psi;  // MA coefficients
};

// Residuals of the ARMA recursion with zero preconditioning: residuals
// before index p are treated as zero.
std::vector<double> css_residuals(const std::vector<double>& z, const CssModel& m) {
    const int p = static_cast<int>(m.phi.size());
    const int q = static_cast<int>(m.psi.size());
    const int n = static_cast<int>(z.size());
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    for (int t = p; t < n; ++t) {
        double pred = m.intercept;
        for (int i = 1; i <= p; ++i) pred += m.phi[i - 1] * z[static_cast<std::size_t>(t - i)];
        for (int j = 1; j <= q; ++j)
            if (t - j >= p) pred += m.psi[j - 1] * e[static_cast<std::size_t>(t - j)];
        e[static_cast<std::size_t>(t)] = z[static_cast<std::size_t>(t)] - pred;
    }
    return e;
}

// Mean-scaled conditional sum of squares. Scaling by the residual count
// leaves the minimizer unchanged and keeps the fixed descent step stable
// across series lengths.
double css_loss(const std::vector<double>& z, const CssModel& m) {
    double loss = 0.0;
    auto e = css_residuals(z, m);
    const int p = static_cast<int>(m.phi.size());
    const int count = static_cast<int>(e.size()) - p;
    for (int t = p; t < static_cast<int>(e.size()); ++t)
        loss += e[static_cast<std::size_t>(t)] * e[static_cast<std::size_t>(t)];
    return count > 0 ? loss / count : loss;
}

// Gradient of the conditional sum of squares. Residuals feed back through
// the MA terms, so sensitivities follow the same recursion.
void css_gradient(const std::vector<double>& z, const CssModel& m, double* g_intercept,
                  Eigen::VectorXd& g_phi, Eigen::VectorXd& g_psi) {
    const int p = static_cast<int>(m.phi.size());
    const int q = static_cast<int>(m.psi.size());
    const int n = static_cast<int>(z.size());
    const int dim = 1 + p + q;
    auto e = css_residuals(z, m);
    // de[t][param]
    Eigen::MatrixXd de = Eigen::MatrixXd::Zero(n, dim);
    for (int t = p; t < n; ++t) {
        de(t, 0) = -1.0;
        for (int i = 1; i <= p; ++i) de(t, i) = -z[static_cast<std::size_t>(t - i)];
        for (int j = 1; j <= q; ++j) {
            if (t - j < p) continue;
            de(t, 1 + p + j - 1) -= e[static_cast<std::size_t>(t - j)];
            de.row(t) -= m.psi[j - 1] * de.row(t - j);
        }
    }
    *g_intercept = 0.0;
    g_phi = Eigen::VectorXd::Zero(p);
    g_psi = Eigen::VectorXd::Zero(q);
    const int count = std::max(n - p, 1);
    for (int t = p; t < n; ++t) {
        const double scale = 2.0 * e[static_cast<std::size_t>(t)] / count;
        *g_intercept += scale * de(t, 0);
        for (int i = 0; i < p; ++i) g_phi[i] += scale * de(t, 1 + i);
        for (int j = 0; j < q; ++j) g_psi[j] += scale * de(t, 1 + p + j);
    }
}

}  // namespace

ForecastResult arima_forecast(const std::vector<double>& series, int p, int d, int q,
                              int horizon) {
    if (p < 0 || d < 0 || q < 0)
        fail(ErrorKind::InvalidArgument, "arima orders must be nonnegative");
    require_series(series, static_cast<std::size_t>(p + q + d + 1), "arima");
    if (static_cast<int>(series.size()) - d < p + q + 1)
        fail(ErrorKind::InvalidArgument, "series too short after differencing");

    std::vector<double> z = difference(series, d);
    const int n = static_cast<int>(z.size());

    CssModel model;
    model.phi = Eigen::VectorXd::Zero(p);
    model.psi = Eigen::VectorXd::Zero(q);
    bool ridge = false;

    if (q == 0) {
        // Without MA terms the CSS optimum is plain least squares; solve it
        // exactly rather than approximating with a fixed descent budget.
        const int rows = n - p;
        Eigen::MatrixXd x(rows, 1 + p);
        Eigen::VectorXd y(rows);
        for (int i = 0; i < rows; ++i) {
            const int t = p + i;
            y[i] = z[static_cast<std::size_t>(t)];
            x(i, 0) = 1.0;
            for (int j = 1; j <= p; ++j) x(i, j) = z[static_cast<std::size_t>(t - j)];
        }
        Eigen::VectorXd beta = solve_least_squares(x, y, &ridge);
        model.intercept = beta[0];
        for (int i = 0; i < p; ++i) model.phi[i] = beta[1 + i];
    } else {
        // Fixed-budget gradient descent from zero initialization.
        constexpr int kSteps = 2000;
        constexpr double kStep = 1e-2;
        for (int step = 0; step < kSteps; ++step) {
            double g0;
            Eigen::VectorXd g_phi, g_psi;
            css_gradient(z, model, &g0, g_phi, g_psi);
            model.intercept -= kStep * g0;
            model.phi -= kStep * g_phi;
            model.psi -= kStep * g_psi;
            if (!std::isfinite(model.intercept) || !model.phi.allFinite() ||
                !model.psi.allFinite())
                fail(ErrorKind::Numeric, "arima optimization diverged");
        }
        if (!std::isfinite(css_loss(z, model)))
            fail(ErrorKind::Numeric, "arima optimization diverged");
    }

    // Iterated forecast on the differenced scale; future shocks are zero.
    std::vector<double> history = z;
    std::vector<double> residuals = css_residuals(z, model);
    std::vector<double> diff_forecast;
    diff_forecast.reserve(static_cast<std::size_t>(horizon));
    for (int h = 0; h < horizon; ++h) {
        const int t = static_cast<int>(history.size());
        double pred = model.intercept;
        for (int i = 1; i <= p; ++i) pred += model.phi[i - 1] * history[static_cast<std::size_t>(t - i)];
        for (int j = 1; j <= q; ++j) {
            const int idx = t - j;
            if (idx >= p && idx < static_cast<int>(residuals.size()))
                pred += model.psi[j - 1] * residuals[static_cast<std::size_t>(idx)];
        }
        history.push_back(pred);
        diff_forecast.push_back(pred);
    }

    ForecastResult out;
    out.model = "arima";
    out.hyperparams["p"] = p;
    out.hyperparams["d"] = d;
    out.hyperparams["q"] = q;
    out.horizon = horizon;
    out.ridge_fallback = ridge;
    out.coefficients.push_back(model.intercept);
    for (int i = 0; i < p; ++i) out.coefficients.push_back(model.phi[i]);
    for (int j = 0; j < q; ++j) out.coefficients.push_back(model.psi[j]);
    out.predictions = d > 0 ? integrate(series, d, diff_forecast) : diff_forecast;
    return out;
}

// ---------------------------------------------------------------------------
// Neural forecasters

int nn_weight_count(int inputs, int hidden) { return hidden * (inputs + 1) + hidden + 1; }

namespace {

// Weight layout: hidden x (inputs+1) input-to-hidden block (bias last),
// then the hidden+1 output weights (bias last).
struct NnView {
    Eigen::Map<const Eigen::MatrixXd> w1;
    Eigen::Map<const Eigen::VectorXd> w2;
};

NnView nn_view(const Eigen::VectorXd& weights, int inputs, int hidden) {
    return {Eigen::Map<const Eigen::MatrixXd>(weights.data(), hidden, inputs + 1),
            Eigen::Map<const Eigen::VectorXd>(weights.data() + hidden * (inputs + 1), hidden + 1)};
}

double nn_predict_row(const Eigen::VectorXd& weights, int hidden, const Eigen::VectorXd& row) {
    const int inputs = static_cast<int>(row.size());
    NnView v = nn_view(weights, inputs, hidden);
    double out = v.w2[hidden];  // output bias
    for (int j = 0; j < hidden; ++j) {
        double z = v.w1(j, inputs);  // hidden bias
        for (int i = 0; i < inputs; ++i) z += v.w1(j, i) * row[i];
        out += v.w2[j] / (1.0 + std::exp(-z));
    }
    return out;
}

}  // namespace

double nn_loss(const NnDesign& design, const Eigen::VectorXd& weights) {
    const int rows = static_cast<int>(design.inputs.rows());
    double loss = 0.0;
    for (int r = 0; r < rows; ++r) {
        double err = nn_predict_row(weights, design.hidden, design.inputs.row(r).transpose()) -
                     design.targets[r];
        loss += err * err;
    }
    return loss / static_cast<double>(rows);
}

Eigen::VectorXd nn_gradient(const NnDesign& design, const Eigen::VectorXd& weights) {
    const int rows = static_cast<int>(design.inputs.rows());
    const int inputs = static_cast<int>(design.inputs.cols());
    const int hidden = design.hidden;
    NnView v = nn_view(weights, inputs, hidden);

    Eigen::MatrixXd g1 = Eigen::MatrixXd::Zero(hidden, inputs + 1);
    Eigen::VectorXd g2 = Eigen::VectorXd::Zero(hidden + 1);
    for (int r = 0; r < rows; ++r) {
        Eigen::VectorXd x = design.inputs.row(r).transpose();
        Eigen::VectorXd act(hidden);
        double out = v.w2[hidden];
        for (int j = 0; j < hidden; ++j) {
            double z = v.w1(j, inputs);
            for (int i = 0; i < inputs; ++i) z += v.w1(j, i) * x[i];
            act[j] = 1.0 / (1.0 + std::exp(-z));
            out += v.w2[j] * act[j];
        }
        const double scale = 2.0 * (out - design.targets[r]) / static_cast<double>(rows);
        g2[hidden] += scale;
        for (int j = 0; j < hidden; ++j) {
            g2[j] += scale * act[j];
            const double back = scale * v.w2[j] * act[j] * (1.0 - act[j]);
            for (int i = 0; i < inputs; ++i) g1(j, i) += back * x[i];
            g1(j, inputs) += back;
        }
    }
    Eigen::VectorXd grad(nn_weight_count(inputs, hidden));
    Eigen::Map<Eigen::MatrixXd>(grad.data(), hidden, inputs + 1) = g1;
    Eigen::Map<Eigen::VectorXd>(grad.data() + hidden * (inputs + 1), hidden + 1) = g2;
    return grad;
}

ForecastResult nn_forecast(const std::vector<double>& series, NnVariant variant, int hidden,
                           int horizon, std::uint64_t seed, int lags) {
    if (hidden < 1) fail(ErrorKind::InvalidArgument, "need at least one hidden unit");
    std::vector<int> lag_set;
    if (variant == NnVariant::Tlnn) {
        lag_set = {1, 2, kSeasonalPeriod};
    } else {
        if (lags < 1) fail(ErrorKind::InvalidArgument, "need at least one lag");
        for (int i = 1; i <= lags; ++i) lag_set.push_back(i);
    }
    const int max_lag = *std::max_element(lag_set.begin(), lag_set.end());
    require_series(series, static_cast<std::size_t>(max_lag + 1), "neural forecaster");

    const int n = static_cast<int>(series.size());
    const int rows = n - max_lag;
    const int inputs = static_cast<int>(lag_set.size());
    NnDesign design;
    design.hidden = hidden;
    design.inputs = Eigen::MatrixXd(rows, inputs);
    design.targets = Eigen::VectorXd(rows);
    for (int r = 0; r < rows; ++r) {
        const int t = max_lag + r;
        design.targets[r] = series[static_cast<std::size_t>(t)];
        for (int i = 0; i < inputs; ++i)
            design.inputs(r, i) = series[static_cast<std::size_t>(t - lag_set[static_cast<std::size_t>(i)])];
    }

    Rng rng(seed);
    Eigen::VectorXd weights(nn_weight_count(inputs, hidden));
    for (Eigen::Index i = 0; i < weights.size(); ++i) weights[i] = rng.uniform(-0.5, 0.5);

    constexpr int kEpochs = 5000;
    constexpr double kStep = 0.05;
    for (int epoch = 0; epoch < kEpochs; ++epoch) {
        weights -= kStep * nn_gradient(design, weights);
        if (!weights.allFinite()) fail(ErrorKind::Numeric, "neural network training diverged");
    }
    if (!std::isfinite(nn_loss(design, weights)))
        fail(ErrorKind::Numeric, "neural network training diverged");

    std::vector<double> history = series;
    ForecastResult out;
    out.model = variant == NnVariant::Tlnn ? "tlnn" : "ffnn";
    out.hyperparams["hidden"] = hidden;
    if (variant == NnVariant::Ffnn) out.hyperparams["p"] = lags;
    out.horizon = horizon;
    out.predictions.reserve(static_cast<std::size_t>(horizon));
    for (int h = 0; h < horizon; ++h) {
        const int t = static_cast<int>(history.size());
        Eigen::VectorXd x(inputs);
        for (int i = 0; i < inputs; ++i)
            x[i] = history[static_cast<std::size_t>(t - lag_set[static_cast<std::size_t>(i)])];
        double next = nn_predict_row(weights, hidden, x);
        history.push_back(next);
        out.predictions.push_back(next);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Hyperparameter selection

namespace {

double validation_mae(const std::vector<double>& predictions,
                      const std::vector<double>& validation) {
    double total = 0.0;
    for (std::size_t i = 0; i < validation.size(); ++i)
        total += std::abs(predictions[i] - validation[i]);
    return total / static_cast<double>(validation.size());
}

}  // namespace

ForecastResult forecast_with(ModelFamily family, const std::vector<double>& series,
                             const std::map<std::string, double>& hyperparams, int horizon,
                             std::uint64_t seed) {
    auto get = [&](const char* key, double fallback) {
        auto it = hyperparams.find(key);
        return it == hyperparams.end() ? fallback : it->second;
    };
    switch (family) {
        case ModelFamily::NaiveMean: return naive_mean(series, horizon);
        case ModelFamily::NaiveLast: return naive_last(series, horizon);
        case ModelFamily::NaiveDrift: return naive_drift(series, horizon);
        case ModelFamily::Exp: return exp_forecast(series, get("alpha", 0.5), horizon);
        case ModelFamily::Ar:
            return ar_forecast(series, static_cast<int>(get("p", 1)), false, horizon,
                               static_cast<int>(get("d", 0)));
        case ModelFamily::ArSeasonal:
            return ar_forecast(series, static_cast<int>(get("p", 1)), true, horizon,
                               static_cast<int>(get("d", 0)));
        case ModelFamily::Var: {
            auto results = var_forecast({series}, static_cast<int>(get("p", 1)), horizon);
            return results[0];
        }
        case ModelFamily::Arima:
            return arima_forecast(series, static_cast<int>(get("p", 1)),
                                  static_cast<int>(get("d", 0)), static_cast<int>(get("q", 0)),
                                  horizon);
        case ModelFamily::Tlnn:
            return nn_forecast(series, NnVariant::Tlnn, static_cast<int>(get("hidden", 4)),
                               horizon, seed);
        case ModelFamily::Ffnn:
            return nn_forecast(series, NnVariant::Ffnn, static_cast<int>(get("hidden", 4)),
                               horizon, seed, static_cast<int>(get("p", 3)));
    }
    fail(ErrorKind::InvalidArgument, "unhandled model family");
}

Selection select_hyperparams(ModelFamily family, const std::vector<double>& train,
                             const std::vector<double>& validation, const HyperGrids& grids,
                             std::uint64_t seed) {
    if (validation.empty()) fail(ErrorKind::InvalidArgument, "validation window is empty");
    const int horizon = static_cast<int>(validation.size());

    std::vector<std::map<std::string, double>> candidates;
    switch (family) {
        case ModelFamily::NaiveMean:
        case ModelFamily::NaiveLast:
        case ModelFamily::NaiveDrift:
            candidates.push_back({});
            break;
        case ModelFamily::Exp: {
            double step = grids.alpha_step > 0.0 ? grids.alpha_step : 0.01;
            for (double alpha = 0.0; alpha < 1.0 + step / 2; alpha += step)
                candidates.push_back({{"alpha", std::min(alpha, 1.0)}});
            break;
        }
        case ModelFamily::Ar:
        case ModelFamily::ArSeasonal:
            for (int p : grids.lag_grid)
                for (int d : grids.diff_grid)
                    candidates.push_back({{"p", static_cast<double>(p)},
                                          {"d", static_cast<double>(d)}});
            break;
        case ModelFamily::Var:
            for (int p : grids.lag_grid)
                candidates.push_back({{"p", static_cast<double>(p)}});
            break;
        case ModelFamily::Arima:
            for (int p : grids.lag_grid)
                for (int d : grids.diff_grid)
                    for (int q : grids.ma_grid)
                        candidates.push_back({{"p", static_cast<double>(p)},
                                              {"d", static_cast<double>(d)},
                                              {"q", static_cast<double>(q)}});
            break;
        case ModelFamily::Tlnn:
            for (int hidden : grids.hidden_grid)
                candidates.push_back({{"hidden", static_cast<double>(hidden)}});
            break;
        case ModelFamily::Ffnn:
            for (int p : grids.lag_grid)
                for (int hidden : grids.hidden_grid)
                    candidates.push_back({{"p", static_cast<double>(p)},
                                          {"hidden", static_cast<double>(hidden)}});
            break;
    }

    Selection best;
    bool have_best = false;
    for (const auto& candidate : candidates) {
        double mae;
        try {
            ForecastResult r = forecast_with(family, train, candidate, horizon, seed);
            mae = validation_mae(r.predictions, validation);
        } catch (const Error&) {
            continue;  // infeasible candidate (series too short, divergence)
        }
        if (!std::isfinite(mae)) continue;
        if (!have_best || mae < best.validation_mae - kTieTolerance) {
            best.hyperparams = candidate;
            best.validation_mae = mae;
            have_best = true;
        }
    }
    if (!have_best)
        fail(ErrorKind::Numeric, std::string("no feasible hyperparameters for ") +
                                     model_family_name(family));
    return best;
}

Selection select_var_hyperparams(const std::vector<std::vector<double>>& train_panel,
                                 const std::vector<std::vector<double>>& validation_panel,
                                 const HyperGrids& grids) {
    if (train_panel.empty() || validation_panel.size() != train_panel.size())
        fail(ErrorKind::InvalidArgument, "panel shape mismatch");
    const int horizon = static_cast<int>(validation_panel[0].size());
    Selection best;
    bool have_best = false;
    for (int p : grids.lag_grid) {
        double total = 0.0;
        std::size_t count = 0;
        try {
            auto results = var_forecast(train_panel, p, horizon);
            for (std::size_t s = 0; s < results.size(); ++s) {
                total += validation_mae(results[s].predictions, validation_panel[s]);
                ++count;
            }
        } catch (const Error&) {
            continue;
        }
        double mae = total / static_cast<double>(count);
        if (!std::isfinite(mae)) continue;
        if (!have_best || mae < best.validation_mae - kTieTolerance) {
            best.hyperparams = {{"p", static_cast<double>(p)}};
            best.validation_mae = mae;
            have_best = true;
        }
    }
    if (!have_best) fail(ErrorKind::Numeric, "no feasible lag order for var");
    return best;
}

}  // namespace trendcast
