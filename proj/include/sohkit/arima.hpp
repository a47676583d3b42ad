#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sohkit/metrics.hpp"

namespace sohkit::arima {

struct ArimaOrder {
  int p = 0;
  int d = 0;
  int q = 0;
};

struct ArimaConfig {
  bool with_drift = false;  // estimate mu for d >= 1 (off by default)
};

struct ArimaModel {
  ArimaOrder order;
  double mu = 0.0;
  bool mu_estimated = false;
  std::vector<double> phi;
  std::vector<double> theta;
  std::vector<double> residuals;      // innovation sequence on the
                                      // differenced scale
  double sigma2 = 0.0;
  double css = 0.0;
  std::size_t n_diff = 0;             // differenced training length
  double diff_mean = 0.0;             // pre-sample value in the recursion
  std::vector<double> training_tail;  // last d original-scale values
  std::vector<double> z_tail;         // last p differenced values
  std::vector<double> resid_tail;     // last q residuals
};

struct ForecastTrace {
  std::vector<int> steps;  // index into the evaluated series
  std::vector<double> predicted;
  std::vector<double> observed;
  std::vector<bool> refit;
};

struct RollingConfig {
  double split = 0.66;        // training fraction
  bool refit_each_step = true;
  ArimaConfig model;
};

// Conditional-sum-of-squares fit: pre-sample residuals are zero and
// pre-sample lagged values equal the differenced-series mean.
ArimaModel fit_arima(const std::vector<double>& y, ArimaOrder order,
                     const ArimaConfig& cfg = {});

// h-step-ahead forecasts on the original scale (future residuals zero).
std::vector<double> forecast(const ArimaModel& model, int h);

// In-sample one-step predictions for fixed parameters; predictions[t]
// forecasts y[t] from y[0..t) and is defined for t >= d.
struct FilterResult {
  std::vector<double> residuals;   // differenced scale, length n - d
  std::vector<double> predicted;   // original scale, length n - d
  double css = 0.0;
};
FilterResult filter(const std::vector<double>& y, ArimaOrder order, double mu,
                    const std::vector<double>& phi,
                    const std::vector<double>& theta);

std::pair<ForecastTrace, eval::Metrics> rolling_forecast(
    const std::vector<double>& y, ArimaOrder order,
    const RollingConfig& cfg = {});

std::pair<ForecastTrace, eval::Metrics> persistence_forecast(
    const std::vector<double>& y, double split = 0.66);

// AIC pick over p <= pmax, q <= qmax at fixed d.
ArimaOrder auto_order(const std::vector<double>& y, int d, int pmax = 2,
                      int qmax = 2, const ArimaConfig& cfg = {});

// Conditional sum of squares for candidate parameters (guard-checked).
double css_objective(const std::vector<double>& z, ArimaOrder order, double mu,
                     const std::vector<double>& phi,
                     const std::vector<double>& theta);

// Schur-Cohn stability: AR polynomial roots outside the unit circle.
bool ar_stationary(const std::vector<double>& phi);
bool ma_invertible(const std::vector<double>& theta);

std::size_t min_fit_length(ArimaOrder order);

nlohmann::json to_json(const ArimaModel& model);
ArimaModel model_from_json(const nlohmann::json& j);

}  // namespace sohkit::arima
