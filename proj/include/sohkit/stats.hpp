#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace sohkit::stats {

// ---- differencing -----------------------------------------------------

// y_t = Y_t - Y_{t-1}, applied d times. Output length = input length - d.
std::vector<double> difference(const std::vector<double>& y, int d);

// Inverse of difference(). `history` holds the d original-scale values
// immediately before the splice point; the round trip
// inverse_difference(difference(Y, d), prefix(Y, d), d) == Y[d..] is exact.
std::vector<double> inverse_difference(const std::vector<double>& yhat,
                                       const std::vector<double>& history,
                                       int d);

// ---- correlograms ------------------------------------------------------

struct AcfPacf {
  std::vector<double> acf;   // index 0..max_lag, acf[0] == 1
  std::vector<double> pacf;  // pacf[0] == 1, pacf[1] == acf[1]
};

// acf uses the biased (1/n) estimator; pacf via Durbin-Levinson.
AcfPacf acf_pacf(const std::vector<double>& y, int max_lag);

// ---- ordinary least squares -------------------------------------------

struct OlsFit {
  std::vector<double> coef;
  std::vector<double> se;
  double ssr = 0.0;          // sum of squared residuals
  std::size_t n = 0;
  std::size_t k = 0;
};

// Householder QR; columns of X are regressors (column-major).
OlsFit ols(const std::vector<std::vector<double>>& x_cols,
           const std::vector<double>& y);

// ---- augmented Dickey-Fuller -------------------------------------------

struct AdfConfig {
  int max_lags = -1;  // -1: floor(12 * (n/100)^0.25); lag picked by AIC
};

struct AdfResult {
  double statistic = 0.0;
  int lags_used = 0;
  int n_used = 0;  // observations in the final regression
  std::map<double, double> critical_values;  // level -> cv (0.01/0.05/0.10)
  std::map<double, bool> stationary_at;      // statistic < cv
};

// Constant-only (no trend) ADF regression:
//   dy_t = c + g*y_{t-1} + sum_i d_i*dy_{t-i} + e_t,  statistic = g / se(g).
AdfResult adf_test(const std::vector<double>& y, const AdfConfig& cfg = {});

// Interpolated critical value for the constant-only test, keyed by the
// regression sample size. Exposed for table checks.
double adf_critical_value(double level, int n_used);

// ---- hypothesis tests ----------------------------------------------------

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::string method;  // "exact" | "normal-approx" | "t"
  std::size_t n_effective = 0;
  std::map<double, bool> reject_at;  // level -> p < level
};

enum class WilcoxonMode { automatic, exact, normal_approx };

// Paired signed-rank test. Zero differences are dropped; ties get average
// ranks; W = min(W+, W-). Exact two-sided p (full sign-assignment
// distribution) when n_effective <= 25 in automatic mode, otherwise a normal
// approximation with continuity and tie correction.
TestResult wilcoxon_signed_rank(const std::vector<double>& a,
                                const std::vector<double>& b,
                                WilcoxonMode mode = WilcoxonMode::automatic);

TestResult paired_t_test(const std::vector<double>& a,
                         const std::vector<double>& b);

// ---- standardization -----------------------------------------------------

struct StandardizeParams {
  std::vector<double> mean;
  std::vector<double> sd;  // population sd; 1.0 for flagged constant columns
  std::vector<bool> constant;
};

// Column-major input; each output column has mean 0 and population sd 1.
std::pair<std::vector<std::vector<double>>, StandardizeParams> standardize(
    const std::vector<std::vector<double>>& columns);

std::vector<std::vector<double>> unstandardize(
    const std::vector<std::vector<double>>& columns,
    const StandardizeParams& params);

// ---- distributions -------------------------------------------------------

double normal_cdf(double z);
double student_t_cdf(double t, double df);

// ---- small helpers -------------------------------------------------------

double mean(const std::vector<double>& v);
double sample_sd(const std::vector<double>& v);
double population_variance(const std::vector<double>& v);

}  // namespace sohkit::stats
