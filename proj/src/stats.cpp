#include "sohkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sohkit/adf_critical_values.hpp"
#include "sohkit/error.hpp"

namespace sohkit::stats {

namespace {
constexpr double kTiny = 1e-300;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double population_variance(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

// ---- differencing -----------------------------------------------------

std::vector<double> difference(const std::vector<double>& y, int d) {
  if (d < 0) raise(Errc::invalid_order, "negative differencing order");
  if (static_cast<int>(y.size()) <= d)
    raise(Errc::too_short, "series too short to difference " +
                               std::to_string(d) + " times");
  std::vector<double> cur = y;
  for (int r = 0; r < d; ++r) {
    std::vector<double> next(cur.size() - 1);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) next[i] = cur[i + 1] - cur[i];
    cur = std::move(next);
  }
  return cur;
}

std::vector<double> inverse_difference(const std::vector<double>& yhat,
                                       const std::vector<double>& history,
                                       int d) {
  if (d < 0) raise(Errc::invalid_order, "negative differencing order");
  if (d == 0) return yhat;
  if (static_cast<int>(history.size()) < d)
    raise(Errc::missing_history,
          "need " + std::to_string(d) + " trailing original-scale values");
  // history levels: level 0 = original scale, level k = k-th difference
  std::vector<std::vector<double>> levels(d);
  levels[0].assign(history.end() - d, history.end());
  for (int k = 1; k < d; ++k) {
    const auto& prev = levels[k - 1];
    levels[k].resize(prev.size() - 1);
    for (std::size_t i = 0; i + 1 < prev.size(); ++i)
      levels[k][i] = prev[i + 1] - prev[i];
  }
  std::vector<double> cur = yhat;
  for (int lvl = d; lvl >= 1; --lvl) {
    double prev = levels[lvl - 1].back();
    for (double& v : cur) {
      v += prev;
      prev = v;
    }
  }
  return cur;
}

// ---- correlograms ------------------------------------------------------

AcfPacf acf_pacf(const std::vector<double>& y, int max_lag) {
  const std::size_t n = y.size();
  if (max_lag < 1) raise(Errc::invalid_order, "max_lag must be >= 1");
  if (n <= static_cast<std::size_t>(max_lag))
    raise(Errc::too_short, "series shorter than max_lag + 1");
  const double m = mean(y);
  double c0 = 0.0;
  for (double v : y) c0 += (v - m) * (v - m);
  c0 /= static_cast<double>(n);
  if (c0 <= kTiny) raise(Errc::zero_variance, "series has zero variance");

  AcfPacf out;
  out.acf.assign(max_lag + 1, 0.0);
  out.acf[0] = 1.0;
  for (int k = 1; k <= max_lag; ++k) {
    double ck = 0.0;
    for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t)
      ck += (y[t] - m) * (y[t - k] - m);
    ck /= static_cast<double>(n);
    out.acf[k] = ck / c0;
  }

  // Durbin-Levinson
  out.pacf.assign(max_lag + 1, 0.0);
  out.pacf[0] = 1.0;
  std::vector<double> phi(max_lag + 1, 0.0), phi_prev(max_lag + 1, 0.0);
  for (int k = 1; k <= max_lag; ++k) {
    double num = out.acf[k];
    double den = 1.0;
    for (int j = 1; j < k; ++j) {
      num -= phi_prev[j] * out.acf[k - j];
      den -= phi_prev[j] * out.acf[j];
    }
    double pk = (std::fabs(den) > kTiny) ? num / den : 0.0;
    phi[k] = pk;
    for (int j = 1; j < k; ++j) phi[j] = phi_prev[j] - pk * phi_prev[k - j];
    out.pacf[k] = pk;
    phi_prev = phi;
  }
  return out;
}

// ---- ordinary least squares -------------------------------------------

OlsFit ols(const std::vector<std::vector<double>>& x_cols,
           const std::vector<double>& y) {
  const std::size_t k = x_cols.size();
  const std::size_t n = y.size();
  if (k == 0 || n == 0) raise(Errc::singular_regression, "empty regression");
  for (const auto& c : x_cols)
    if (c.size() != n)
      raise(Errc::length_mismatch, "regressor length mismatch");
  if (n <= k) raise(Errc::too_short, "more regressors than observations");

  // Householder QR on [X | y], column-major working copy.
  std::vector<std::vector<double>> a(x_cols);
  std::vector<double> b = y;
  std::vector<double> rdiag(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    double norm = 0.0;
    for (std::size_t i = j; i < n; ++i) norm += a[j][i] * a[j][i];
    norm = std::sqrt(norm);
    if (norm <= 1e-12)
      raise(Errc::singular_regression, "rank-deficient design matrix");
    if (a[j][j] > 0) norm = -norm;
    for (std::size_t i = j; i < n; ++i) a[j][i] /= norm;
    a[j][j] -= 1.0;
    for (std::size_t jj = j + 1; jj <= k; ++jj) {
      std::vector<double>& col = (jj < k) ? a[jj] : b;
      double s = 0.0;
      for (std::size_t i = j; i < n; ++i) s += a[j][i] * col[i];
      s /= a[j][j];
      for (std::size_t i = j; i < n; ++i) col[i] += s * a[j][i];
    }
    rdiag[j] = norm;
  }

  OlsFit fit;
  fit.n = n;
  fit.k = k;
  fit.coef.assign(k, 0.0);
  // back substitution: R * coef = Q'y (upper triangle of a, diag in rdiag)
  for (std::size_t jj = k; jj-- > 0;) {
    double s = b[jj];
    for (std::size_t c = jj + 1; c < k; ++c) s -= a[c][jj] * fit.coef[c];
    fit.coef[jj] = s / rdiag[jj];
  }
  // residual sum of squares: tail of transformed y
  double ssr = 0.0;
  for (std::size_t i = k; i < n; ++i) ssr += b[i] * b[i];
  fit.ssr = ssr;

  // (X'X)^-1 = R^-1 R^-T; invert R (upper triangular, diag rdiag)
  std::vector<std::vector<double>> rinv(k, std::vector<double>(k, 0.0));
  for (std::size_t j = 0; j < k; ++j) {
    rinv[j][j] = 1.0 / rdiag[j];
    for (std::size_t i = j; i-- > 0;) {
      double s = 0.0;
      for (std::size_t c = i + 1; c <= j; ++c) s += a[c][i] * rinv[j][c];
      rinv[j][i] = -s / rdiag[i];
    }
  }
  const double dof = static_cast<double>(n - k);
  const double s2 = ssr / dof;
  fit.se.assign(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    double v = 0.0;
    for (std::size_t j = i; j < k; ++j) v += rinv[j][i] * rinv[j][i];
    fit.se[i] = std::sqrt(s2 * v);
  }
  return fit;
}

// ---- augmented Dickey-Fuller -------------------------------------------

double adf_critical_value(double level, int n_used) {
  const double n = static_cast<double>(std::max(n_used, 1));
  for (const auto& row : detail::kAdfTauC) {
    if (std::fabs(row.level - level) < 1e-9)
      return row.b0 + row.b1 / n + row.b2 / (n * n) + row.b3 / (n * n * n);
  }
  raise(Errc::invalid_config, "no ADF critical values for level " +
                                  std::to_string(level));
}

namespace {

struct AdfRegression {
  OlsFit fit;
  int nobs;
};

// dy_t on [const, y_{t-1}, dy_{t-1..t-k}] with rows t = start..end of dy.
AdfRegression adf_regress(const std::vector<double>& y, int k, int start_lag) {
  const int n = static_cast<int>(y.size());
  std::vector<double> dy(n - 1);
  for (int t = 0; t + 1 < n; ++t) dy[t] = y[t + 1] - y[t];
  const int first = start_lag;                 // first usable dy index
  const int nobs = static_cast<int>(dy.size()) - first;
  std::vector<double> dep(dy.begin() + first, dy.end());
  std::vector<std::vector<double>> cols;
  cols.emplace_back(nobs, 1.0);
  std::vector<double> lagged(nobs);
  for (int i = 0; i < nobs; ++i) lagged[i] = y[first + i];
  cols.push_back(std::move(lagged));
  for (int j = 1; j <= k; ++j) {
    std::vector<double> c(nobs);
    for (int i = 0; i < nobs; ++i) c[i] = dy[first + i - j];
    cols.push_back(std::move(c));
  }
  return {ols(cols, dep), nobs};
}

}  // namespace

AdfResult adf_test(const std::vector<double>& y, const AdfConfig& cfg) {
  const int n = static_cast<int>(y.size());
  int max_lags = cfg.max_lags;
  if (max_lags < 0) {
    max_lags = static_cast<int>(
        std::floor(12.0 * std::pow(n / 100.0, 0.25)));
  }
  max_lags = std::max(0, std::min(max_lags, n / 2 - 2));
  if (n < 10 + max_lags) {
    // shrink the lag window for short series rather than failing outright
    max_lags = std::max(0, n - 10);
  }
  if (n < 10) raise(Errc::too_short, "ADF needs at least 10 observations");

  // lag order by AIC on a fixed estimation sample (rows from max_lags on)
  int best_k = 0;
  double best_aic = 0.0;
  for (int k = 0; k <= max_lags; ++k) {
    AdfRegression r = adf_regress(y, k, max_lags);
    const double nobs = static_cast<double>(r.nobs);
    const double aic =
        nobs * std::log(std::max(r.fit.ssr / nobs, kTiny)) + 2.0 * (k + 2);
    if (k == 0 || aic < best_aic - 1e-12) {
      best_aic = aic;
      best_k = k;
    }
  }

  AdfRegression final_fit = adf_regress(y, best_k, best_k);
  AdfResult res;
  res.lags_used = best_k;
  res.n_used = final_fit.nobs;
  res.statistic = final_fit.fit.coef[1] / final_fit.fit.se[1];
  for (double level : {0.01, 0.05, 0.10}) {
    const double cv = adf_critical_value(level, res.n_used);
    res.critical_values[level] = cv;
    res.stationary_at[level] = res.statistic < cv;
  }
  return res;
}

// ---- wilcoxon signed-rank ------------------------------------------------

namespace {

// Average ranks of |d|, doubled so ties (x.5 ranks) stay integral.
std::vector<long long> doubled_ranks(const std::vector<double>& absd) {
  const std::size_t n = absd.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return absd[a] < absd[b]; });
  std::vector<long long> r2(n, 0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && absd[idx[j + 1]] == absd[idx[i]]) ++j;
    // average of 1-based ranks i+1..j+1 is (i+j+2)/2; doubled -> i+j+2
    const long long sum2 = static_cast<long long>(i + j + 2);
    for (std::size_t t = i; t <= j; ++t) r2[idx[t]] = sum2;
    i = j + 1;
  }
  return r2;
}

// P(W2 <= w2) where W2 is the doubled signed-rank sum over all 2^n
// equally likely sign assignments (exact distribution by counting).
double exact_cdf_leq(const std::vector<long long>& r2, long long w2) {
  long long total = 0;
  for (long long r : r2) total += r;
  if (w2 < 0) return 0.0;
  if (w2 > total) w2 = total;
  std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
  count[0] = 1.0;
  long long reach = 0;
  for (long long r : r2) {
    reach += r;
    for (long long s = reach; s >= r; --s)
      count[static_cast<std::size_t>(s)] +=
          count[static_cast<std::size_t>(s - r)];
  }
  double acc = 0.0;
  for (long long s = 0; s <= w2; ++s) acc += count[static_cast<std::size_t>(s)];
  return std::ldexp(acc, -static_cast<int>(r2.size()));
}

}  // namespace

TestResult wilcoxon_signed_rank(const std::vector<double>& a,
                                const std::vector<double>& b,
                                WilcoxonMode mode) {
  if (a.size() != b.size())
    raise(Errc::length_mismatch, "paired samples differ in length");
  std::vector<double> d;
  d.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double di = a[i] - b[i];
    if (di != 0.0) d.push_back(di);
  }
  const std::size_t n = d.size();
  if (n == 0)
    raise(Errc::all_zero_differences, "all paired differences are zero");

  std::vector<double> absd(n);
  for (std::size_t i = 0; i < n; ++i) absd[i] = std::fabs(d[i]);
  const std::vector<long long> r2 = doubled_ranks(absd);

  long long w2_plus = 0, w2_total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    w2_total += r2[i];
    if (d[i] > 0) w2_plus += r2[i];
  }
  const long long w2_minus = w2_total - w2_plus;
  const long long w2_min = std::min(w2_plus, w2_minus);

  TestResult res;
  res.statistic = static_cast<double>(w2_min) / 2.0;
  res.n_effective = n;

  const bool use_exact =
      mode == WilcoxonMode::exact ||
      (mode == WilcoxonMode::automatic && n <= 25);
  if (use_exact) {
    res.method = "exact";
    res.p_value = std::min(1.0, 2.0 * exact_cdf_leq(r2, w2_min));
  } else {
    res.method = "normal-approx";
    const double dn = static_cast<double>(n);
    const double mean_w = dn * (dn + 1.0) / 4.0;
    double var_w = dn * (dn + 1.0) * (2.0 * dn + 1.0) / 24.0;
    // tie correction: sum over groups of (t^3 - t) / 48
    std::vector<double> sorted_abs = absd;
    std::sort(sorted_abs.begin(), sorted_abs.end());
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && sorted_abs[j + 1] == sorted_abs[i]) ++j;
      const double t = static_cast<double>(j - i + 1);
      var_w -= (t * t * t - t) / 48.0;
      i = j + 1;
    }
    const double w = static_cast<double>(w2_min) / 2.0;
    const double z = (w - mean_w + 0.5) / std::sqrt(std::max(var_w, kTiny));
    res.p_value = std::min(1.0, 2.0 * normal_cdf(z));
  }
  for (double level : {0.01, 0.05, 0.10})
    res.reject_at[level] = res.p_value < level;
  return res;
}

// ---- paired t ------------------------------------------------------------

TestResult paired_t_test(const std::vector<double>& a,
                         const std::vector<double>& b) {
  if (a.size() != b.size())
    raise(Errc::length_mismatch, "paired samples differ in length");
  const std::size_t n = a.size();
  if (n < 2) raise(Errc::too_short, "need at least two pairs");
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  const double m = mean(d);
  const double sd = sample_sd(d);
  if (sd <= 0.0)
    raise(Errc::zero_variance, "paired differences have zero variance");
  TestResult res;
  res.method = "t";
  res.n_effective = n;
  res.statistic = m / (sd / std::sqrt(static_cast<double>(n)));
  const double df = static_cast<double>(n - 1);
  res.p_value = 2.0 * (1.0 - student_t_cdf(std::fabs(res.statistic), df));
  res.p_value = std::min(1.0, std::max(0.0, res.p_value));
  for (double level : {0.01, 0.05, 0.10})
    res.reject_at[level] = res.p_value < level;
  return res;
}

// ---- standardization -----------------------------------------------------

std::pair<std::vector<std::vector<double>>, StandardizeParams> standardize(
    const std::vector<std::vector<double>>& columns) {
  StandardizeParams params;
  std::vector<std::vector<double>> out(columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const auto& col = columns[j];
    const double m = mean(col);
    double sd = std::sqrt(population_variance(col));
    const bool constant = sd <= 1e-12 * (std::fabs(m) + 1.0);
    if (constant) sd = 1.0;
    params.mean.push_back(m);
    params.sd.push_back(sd);
    params.constant.push_back(constant);
    out[j].resize(col.size());
    for (std::size_t i = 0; i < col.size(); ++i)
      out[j][i] = (col[i] - m) / sd;
  }
  return {std::move(out), std::move(params)};
}

std::vector<std::vector<double>> unstandardize(
    const std::vector<std::vector<double>>& columns,
    const StandardizeParams& params) {
  if (columns.size() != params.mean.size())
    raise(Errc::width_mismatch, "parameter width mismatch");
  std::vector<std::vector<double>> out(columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    out[j].resize(columns[j].size());
    for (std::size_t i = 0; i < columns[j].size(); ++i)
      out[j][i] = columns[j][i] * params.sd[j] + params.mean[j];
  }
  return out;
}

// ---- distributions -------------------------------------------------------

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / 1.4142135623730951);
}

namespace {

// regularized incomplete beta via Lentz continued fraction
double betacf(double a, double b, double x) {
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::fabs(d) < 1e-300) d = 1e-300;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = 1.0 + aa / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = 1.0 + aa / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return h;
}

double betai(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) -
                             std::lgamma(b) + a * std::log(x) +
                             b * std::log(1.0 - x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
  return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

double student_t_cdf(double t, double df) {
  const double x = df / (df + t * t);
  const double tail = 0.5 * betai(df / 2.0, 0.5, x);
  return t >= 0.0 ? 1.0 - tail : tail;
}

}  // namespace sohkit::stats
