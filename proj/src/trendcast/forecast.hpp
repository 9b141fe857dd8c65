// Copyright (C) 2026 trendcast contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace trendcast {

/// Forecast model families. "ars" is the autoregressor with the 12-month
/// seasonal lag; the NN variants differ in their lag design.
enum class ModelFamily {
    NaiveMean,
    NaiveLast,
    NaiveDrift,
    Exp,
    Ar,
    ArSeasonal,
    Var,
    Arima,
    Tlnn,
    Ffnn,
};

ModelFamily parse_model_family(const std::string& name);
const char* model_family_name(ModelFamily family);

struct ForecastResult {
    std::string model;
    std::map<std::string, double> hyperparams;
    int horizon = 0;
    std::vector<double> predictions;
    // Fitted linear coefficients where meaningful (intercept first, then
    // lags; VAR fills each series' own equation).
    std::vector<double> coefficients;
    bool ridge_fallback = false;  // singular design fell back to ridge
};

inline constexpr int kSeasonalPeriod = 12;

/// Simple exponential smoothing: level recursion l_0 = y_0,
/// l_t = alpha y_t + (1-alpha) l_{t-1}; flat multi-step forecast at l_n.
ForecastResult exp_forecast(const std::vector<double>& series, double alpha, int horizon);

/// The same one-step level by the expanded weighted sum instead of the
/// recursion; kept as an independent algebraic route for verification.
double exp_level_expanded(const std::vector<double>& series, double alpha);

ForecastResult naive_mean(const std::vector<double>& series, int horizon);
ForecastResult naive_last(const std::vector<double>& series, int horizon);
ForecastResult naive_drift(const std::vector<double>& series, int horizon);

/// OLS autoregression on lags 1..p (optionally plus the seasonal lag), with
/// `diff` prior differencing passes; multi-step by iterated substitution.
ForecastResult ar_forecast(const std::vector<double>& series, int lags, bool seasonal,
                           int horizon, int diff = 0);

/// Joint least-squares vector autoregression over a panel of equal-length
/// series; degenerates to ar_forecast for a single series.
std::vector<ForecastResult> var_forecast(const std::vector<std::vector<double>>& panel, int lags,
                                         int horizon);

/// AR(p)+MA(q) on the d-times differenced series by conditional
/// sum-of-squares; exact least squares when q = 0, fixed-budget gradient
/// descent otherwise. Forecasts are integrated back d times.
ForecastResult arima_forecast(const std::vector<double>& series, int p, int d, int q, int horizon);

enum class NnVariant { Tlnn, Ffnn };

/// Single-hidden-layer network with logistic activation and linear output,
/// trained by full-batch gradient descent (5000 epochs, step 0.05). FFNN uses
/// consecutive lags 1..lags; TLNN uses the fixed lag set {1, 2, 12}.
ForecastResult nn_forecast(const std::vector<double>& series, NnVariant variant, int hidden,
                           int horizon, std::uint64_t seed, int lags = 3);

/// Loss and gradient of the network on an explicit lag design; exposed so the
/// gradient can be checked against finite differences.
struct NnDesign {
    Eigen::MatrixXd inputs;   // rows x lags
    Eigen::VectorXd targets;  // rows
    int hidden = 0;
};
double nn_loss(const NnDesign& design, const Eigen::VectorXd& weights);
Eigen::VectorXd nn_gradient(const NnDesign& design, const Eigen::VectorXd& weights);
int nn_weight_count(int inputs, int hidden);

struct HyperGrids {
    double alpha_step = 0.01;
    std::vector<int> lag_grid = {1, 2, 3, 4, 5, 6};
    std::vector<int> diff_grid = {0, 1, 2};
    std::vector<int> ma_grid = {0, 1, 2, 3};
    std::vector<int> hidden_grid = {2, 4, 8};
};

struct Selection {
    std::map<std::string, double> hyperparams;
    double validation_mae = 0.0;
};

/// Grid search minimizing mean absolute error of iterated forecasts over the
/// validation window. Candidates run simplest-first and must improve by more
/// than 1e-12 to displace the incumbent, so ties keep the simpler model.
Selection select_hyperparams(ModelFamily family, const std::vector<double>& train,
                             const std::vector<double>& validation, const HyperGrids& grids,
                             std::uint64_t seed);

/// Fit on `series` with fixed hyperparameters and forecast `horizon` steps.
ForecastResult forecast_with(ModelFamily family, const std::vector<double>& series,
                             const std::map<std::string, double>& hyperparams, int horizon,
                             std::uint64_t seed);

/// VAR companion to select_hyperparams/forecast_with; selection scores the
/// aggregate validation MAE across the panel.
Selection select_var_hyperparams(const std::vector<std::vector<double>>& train_panel,
                                 const std::vector<std::vector<double>>& validation_panel,
                                 const HyperGrids& grids);

}  // namespace trendcast
