#include "sohkit/arima.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <nlohmann/json.hpp>

#include "sohkit/error.hpp"
#include "sohkit/stats.hpp"

namespace sohkit::arima {

namespace {

constexpr double kGuardMargin = 1e-9;
constexpr double kPenalty = 1e30;

void validate_order(const ArimaOrder& o) {
  if (o.p < 0 || o.d < 0 || o.q < 0 || o.p > 5 || o.d > 5 || o.q > 5)
    raise(Errc::invalid_order, "orders must lie in [0, 5]");
  if (o.p + o.q < 1 && !(o.p == 0 && o.d == 1 && o.q == 0))
    raise(Errc::invalid_order, "need p + q >= 1 or (0,1,0)");
}

// Jury/Schur-Cohn: all roots of a[0] z^n + ... + a[n] strictly inside the
// unit circle iff every reflection coefficient satisfies |k| < 1.
bool roots_inside_unit_circle(std::vector<double> a) {
  while (a.size() > 1) {
    const double k = a.back() / a.front();
    if (!(std::fabs(k) < 1.0 - kGuardMargin)) return false;
    const std::size_t n = a.size() - 1;
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = a[i] - k * a[n - i];
    a = std::move(b);
  }
  return true;
}

// Residual recursion shared by the objective and the filter.
// zhat[t] = mu + sum phi_i * z[t-i] + sum theta_j * e[t-j]; pre-sample z
// terms equal `presample`, pre-sample residuals are zero.
double css_recursion(const std::vector<double>& z, double mu,
                     const std::vector<double>& phi,
                     const std::vector<double>& theta, double presample,
                     std::vector<double>* resid_out,
                     std::vector<double>* zhat_out) {
  const std::size_t m = z.size();
  const std::size_t p = phi.size();
  const std::size_t q = theta.size();
  std::vector<double> e(m, 0.0);
  double css = 0.0;
  for (std::size_t t = 0; t < m; ++t) {
    double zhat = mu;
    for (std::size_t i = 1; i <= p; ++i) {
      const double zv = (t >= i) ? z[t - i] : presample;
      zhat += phi[i - 1] * zv;
    }
    for (std::size_t j = 1; j <= q; ++j) {
      if (t >= j) zhat += theta[j - 1] * e[t - j];
    }
    e[t] = z[t] - zhat;
    css += e[t] * e[t];
    if (zhat_out) (*zhat_out)[t] = zhat;
  }
  if (resid_out) *resid_out = std::move(e);
  return css;
}

struct ParamLayout {
  bool has_mu = false;
  int p = 0;
  int q = 0;
  int dim() const { return (has_mu ? 1 : 0) + p + q; }
  void unpack(const std::vector<double>& x, double& mu,
              std::vector<double>& phi, std::vector<double>& theta) const {
    int at = 0;
    mu = has_mu ? x[at++] : 0.0;
    phi.assign(x.begin() + at, x.begin() + at + p);
    at += p;
    theta.assign(x.begin() + at, x.begin() + at + q);
  }
};

double objective(const std::vector<double>& z, const ParamLayout& layout,
                 double presample, const std::vector<double>& x) {
  double mu;
  std::vector<double> phi, theta;
  layout.unpack(x, mu, phi, theta);
  if (!ar_stationary(phi) || !ma_invertible(theta)) {
    double mag = 0.0;
    for (double v : x) mag += std::fabs(v);
    return kPenalty * (1.0 + mag);
  }
  return css_recursion(z, mu, phi, theta, presample, nullptr, nullptr);
}

double golden_section(const std::function<double(double)>& f, double lo,
                      double hi, int iters = 120) {
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && (b - a) > 1e-12; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

// Deterministic Nelder-Mead (fixed initial simplex, no randomness).
std::vector<double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, int max_iter) {
  const int n = static_cast<int>(x0.size());
  std::vector<std::vector<double>> pts(n + 1, x0);
  for (int i = 0; i < n; ++i)
    pts[i + 1][i] += (x0[i] >= 0.0 ? 0.2 : -0.2);
  std::vector<double> fv(n + 1);
  for (int i = 0; i <= n; ++i) fv[i] = f(pts[i]);

  for (int it = 0; it < max_iter; ++it) {
    std::vector<int> ord(n + 1);
    for (int i = 0; i <= n; ++i) ord[i] = i;
    std::sort(ord.begin(), ord.end(),
              [&](int a, int b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> spts(n + 1);
    std::vector<double> sfv(n + 1);
    for (int i = 0; i <= n; ++i) {
      spts[i] = pts[ord[i]];
      sfv[i] = fv[ord[i]];
    }
    pts = std::move(spts);
    fv = std::move(sfv);
    if (std::fabs(fv[n] - fv[0]) <= 1e-13 * (1.0 + std::fabs(fv[0]))) break;

    std::vector<double> centroid(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) centroid[j] += pts[i][j] / n;

    auto blend = [&](double coef) {
      std::vector<double> x(n);
      for (int j = 0; j < n; ++j)
        x[j] = centroid[j] + coef * (centroid[j] - pts[n][j]);
      return x;
    };

    std::vector<double> xr = blend(1.0);
    double fr = f(xr);
    if (fr < fv[0]) {
      std::vector<double> xe = blend(2.0);
      double fe = f(xe);
      if (fe < fr) {
        pts[n] = xe;
        fv[n] = fe;
      } else {
        pts[n] = xr;
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      pts[n] = xr;
      fv[n] = fr;
    } else {
      std::vector<double> xc = blend(fr < fv[n] ? 0.5 : -0.5);
      double fc = f(xc);
      if (fc < std::min(fr, fv[n])) {
        pts[n] = xc;
        fv[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          for (int j = 0; j < n; ++j)
            pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
          fv[i] = f(pts[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (fv[i] < fv[best]) best = i;
  return pts[best];
}

}  // namespace

bool ar_stationary(const std::vector<double>& phi) {
  if (phi.empty()) return true;
  std::vector<double> a(phi.size() + 1);
  a[0] = 1.0;
  for (std::size_t i = 0; i < phi.size(); ++i) a[i + 1] = -phi[i];
  return roots_inside_unit_circle(std::move(a));
}

bool ma_invertible(const std::vector<double>& theta) {
  if (theta.empty()) return true;
  std::vector<double> a(theta.size() + 1);
  a[0] = 1.0;
  for (std::size_t i = 0; i < theta.size(); ++i) a[i + 1] = theta[i];
  return roots_inside_unit_circle(std::move(a));
}

std::size_t min_fit_length(ArimaOrder order) {
  return static_cast<std::size_t>(10 + order.p + order.q + order.d);
}

double css_objective(const std::vector<double>& z, ArimaOrder order, double mu,
                     const std::vector<double>& phi,
                     const std::vector<double>& theta) {
  (void)order;
  if (!ar_stationary(phi) || !ma_invertible(theta))
    return std::numeric_limits<double>::infinity();
  return css_recursion(z, mu, phi, theta, stats::mean(z), nullptr, nullptr);
}

ArimaModel fit_arima(const std::vector<double>& y, ArimaOrder order,
                     const ArimaConfig& cfg) {
  validate_order(order);
  if (y.size() < min_fit_length(order))
    raise(Errc::too_short, "need at least " +
                               std::to_string(min_fit_length(order)) +
                               " observations");
  const std::vector<double> z = stats::difference(y, order.d);
  const double zmean = stats::mean(z);
  double zvar = 0.0;
  for (double v : z) zvar += (v - zmean) * (v - zmean);
  if (order.p + order.q > 0 && zvar <= 1e-300)
    raise(Errc::degenerate_series, "zero variance after differencing");

  ParamLayout layout;
  layout.has_mu = (order.d == 0) || cfg.with_drift;
  layout.p = order.p;
  layout.q = order.q;

  std::vector<double> best;
  const int dim = layout.dim();
  if (dim == 0) {
    best = {};
  } else if (dim == 1 && !layout.has_mu) {
    // single AR or MA coefficient: multi-start golden section
    auto f1 = [&](double v) {
      return objective(z, layout, zmean, std::vector<double>{v});
    };
    double best_v = 0.0;
    double best_f = f1(0.0);
    for (double lo : {-0.999, -0.5, 0.0, 0.5}) {
      const double v = golden_section(f1, lo, std::min(0.999, lo + 0.5));
      const double fval = f1(v);
      if (fval < best_f) {
        best_f = fval;
        best_v = v;
      }
    }
    // refine around the winner
    const double v = golden_section(
        f1, std::max(-0.999, best_v - 0.1), std::min(0.999, best_v + 0.1));
    if (f1(v) < best_f) best_v = v;
    best = {best_v};
  } else {
    auto fn = [&](const std::vector<double>& x) {
      return objective(z, layout, zmean, x);
    };
    std::vector<std::vector<double>> starts;
    std::vector<double> base(dim, 0.0);
    if (layout.has_mu) base[0] = zmean;
    starts.push_back(base);
    const int coef_dims = layout.p + layout.q;
    if (coef_dims <= 6) {
      for (int mask = 0; mask < (1 << coef_dims); ++mask) {
        std::vector<double> s = base;
        for (int b = 0; b < coef_dims; ++b)
          s[(layout.has_mu ? 1 : 0) + b] = (mask >> b & 1) ? 0.4 : -0.4;
        starts.push_back(std::move(s));
      }
    } else {
      for (int i = 0; i < coef_dims; ++i) {
        for (double v : {-0.4, 0.4}) {
          std::vector<double> s = base;
          s[(layout.has_mu ? 1 : 0) + i] = v;
          starts.push_back(std::move(s));
        }
      }
    }
    double best_f = std::numeric_limits<double>::infinity();
    for (const auto& s : starts) {
      std::vector<double> x = nelder_mead(fn, s, 300 * dim);
      const double fx = fn(x);
      if (fx < best_f) {
        best_f = fx;
        best = std::move(x);
      }
    }
  }

  ArimaModel model;
  model.order = order;
  model.mu_estimated = layout.has_mu;
  std::vector<double> phi, theta;
  double mu = 0.0;
  if (dim > 0) {
    layout.unpack(best, mu, phi, theta);
  }
  if (!ar_stationary(phi))
    raise(Errc::non_invertible, "AR polynomial violates stationarity");
  if (!ma_invertible(theta))
    raise(Errc::non_invertible, "MA polynomial violates invertibility");
  model.mu = mu;
  model.phi = phi;
  model.theta = theta;
  model.diff_mean = zmean;
  model.n_diff = z.size();
  std::vector<double> zhat(z.size(), 0.0);
  model.css = css_recursion(z, mu, phi, theta, zmean, &model.residuals, &zhat);
  const std::size_t nparam = static_cast<std::size_t>(dim);
  model.sigma2 =
      model.css / static_cast<double>(std::max<std::size_t>(
                      z.size() > nparam ? z.size() - nparam : 1, 1));
  model.training_tail.assign(y.end() - order.d, y.end());
  const std::size_t p = static_cast<std::size_t>(order.p);
  const std::size_t q = static_cast<std::size_t>(order.q);
  model.z_tail.assign(z.end() - std::min(p, z.size()), z.end());
  model.resid_tail.assign(model.residuals.end() - std::min(q, z.size()),
                          model.residuals.end());
  return model;
}

std::vector<double> forecast(const ArimaModel& model, int h) {
  if (h < 1) return {};
  const std::size_t p = model.phi.size();
  const std::size_t q = model.theta.size();
  // z history (most recent last) and residual history
  std::vector<double> z_hist = model.z_tail;
  std::vector<double> e_hist = model.resid_tail;
  std::vector<double> z_fore(h, 0.0);
  for (int j = 0; j < h; ++j) {
    double zhat = model.mu;
    for (std::size_t i = 1; i <= p; ++i) {
      double zv;
      if (i <= static_cast<std::size_t>(j)) {
        zv = z_fore[j - i];
      } else {
        const std::size_t back = i - j;  // 1-based into history tail
        zv = (back <= z_hist.size()) ? z_hist[z_hist.size() - back]
                                     : model.diff_mean;
      }
      zhat += model.phi[i - 1] * zv;
    }
    for (std::size_t i = 1; i <= q; ++i) {
      if (i > static_cast<std::size_t>(j)) {  // future residuals are zero
        const std::size_t back = i - j;
        if (back <= e_hist.size())
          zhat += model.theta[i - 1] * e_hist[e_hist.size() - back];
      }
    }
    z_fore[j] = zhat;
  }
  if (model.order.d == 0) return z_fore;
  return stats::inverse_difference(z_fore, model.training_tail, model.order.d);
}

FilterResult filter(const std::vector<double>& y, ArimaOrder order, double mu,
                    const std::vector<double>& phi,
                    const std::vector<double>& theta) {
  validate_order(order);
  if (static_cast<int>(y.size()) <= order.d + 1)
    raise(Errc::too_short, "series too short to filter");
  const std::vector<double> z = stats::difference(y, order.d);
  FilterResult out;
  std::vector<double> zhat(z.size(), 0.0);
  out.css = css_recursion(z, mu, phi, theta, stats::mean(z), &out.residuals,
                          &zhat);
  out.predicted.resize(z.size());
  const int d = order.d;
  for (std::size_t t = 0; t < z.size(); ++t) {
    // reconstruct the one-step original-scale prediction for y[t + d]
    double level = zhat[t];
    if (d >= 1) {
      // binomial reconstruction: d=1 -> +y[t]; d=2 -> +2y[t+1]-y[t]
      if (d == 1) {
        level += y[t];
      } else {
        std::vector<double> tail(y.begin() + t, y.begin() + t + d);
        level = stats::inverse_difference({zhat[t]}, tail, d)[0];
      }
    }
    out.predicted[t] = level;
  }
  return out;
}

std::pair<ForecastTrace, eval::Metrics> rolling_forecast(
    const std::vector<double>& y, ArimaOrder order, const RollingConfig& cfg) {
  validate_order(order);
  const std::size_t n = y.size();
  const std::size_t fit_min = min_fit_length(order);
  std::size_t train_n = static_cast<std::size_t>(
      std::llround(cfg.split * static_cast<double>(n)));
  train_n = std::max(train_n, fit_min);
  if (train_n >= n)
    raise(Errc::too_short, "no validation points after the split");

  ForecastTrace trace;
  ArimaModel model;
  bool have_model = false;
  for (std::size_t t = train_n; t < n; ++t) {
    const std::vector<double> head(y.begin(), y.begin() + t);
    bool refit = cfg.refit_each_step || !have_model;
    double pred;
    if (refit) {
      model = fit_arima(head, order, cfg.model);
      have_model = true;
      pred = forecast(model, 1)[0];
    } else {
      // keep coefficients, refresh state on the grown history
      FilterResult f = filter(head, order, model.mu, model.phi, model.theta);
      ArimaModel m2 = model;
      const std::vector<double> z = stats::difference(head, order.d);
      m2.n_diff = z.size();
      m2.training_tail.assign(head.end() - order.d, head.end());
      const std::size_t p = model.phi.size(), q = model.theta.size();
      m2.z_tail.assign(z.end() - std::min(p, z.size()), z.end());
      m2.resid_tail.assign(f.residuals.end() - std::min(q, f.residuals.size()),
                           f.residuals.end());
      pred = forecast(m2, 1)[0];
    }
    trace.steps.push_back(static_cast<int>(t));
    trace.predicted.push_back(pred);
    trace.observed.push_back(y[t]);
    trace.refit.push_back(refit);
  }
  return {trace, eval::score(trace.observed, trace.predicted)};
}

std::pair<ForecastTrace, eval::Metrics> persistence_forecast(
    const std::vector<double>& y, double split) {
  const std::size_t n = y.size();
  std::size_t train_n = static_cast<std::size_t>(
      std::llround(split * static_cast<double>(n)));
  train_n = std::max<std::size_t>(train_n, 1);
  if (train_n >= n)
    raise(Errc::too_short, "no validation points after the split");
  ForecastTrace trace;
  for (std::size_t t = train_n; t < n; ++t) {
    trace.steps.push_back(static_cast<int>(t));
    trace.predicted.push_back(y[t - 1]);
    trace.observed.push_back(y[t]);
    trace.refit.push_back(false);
  }
  return {trace, eval::score(trace.observed, trace.predicted)};
}

ArimaOrder auto_order(const std::vector<double>& y, int d, int pmax, int qmax,
                      const ArimaConfig& cfg) {
  ArimaOrder best{0, d, 0};
  double best_aic = std::numeric_limits<double>::infinity();
  for (int p = 0; p <= pmax; ++p) {
    for (int q = 0; q <= qmax; ++q) {
      ArimaOrder o{p, d, q};
      if (p + q < 1 && !(p == 0 && d == 1 && q == 0)) continue;
      if (y.size() < min_fit_length(o)) continue;
      try {
        ArimaModel m = fit_arima(y, o, cfg);
        const double m_n = static_cast<double>(m.n_diff);
        const int k = p + q + (m.mu_estimated ? 1 : 0);
        const double aic =
            m_n * std::log(std::max(m.css / m_n, 1e-300)) + 2.0 * (k + 1);
        if (aic < best_aic - 1e-12 ||
            (std::fabs(aic - best_aic) <= 1e-12 &&
             (p + q < best.p + best.q))) {
          best_aic = aic;
          best = o;
        }
      } catch (const Error&) {
        continue;
      }
    }
  }
  if (!std::isfinite(best_aic))
    raise(Errc::too_short, "no candidate order could be fitted");
  return best;
}

nlohmann::json to_json(const ArimaModel& model) {
  nlohmann::json j;
  j["format"] = "sohkit-arima-v1";
  j["order"] = {{"p", model.order.p}, {"d", model.order.d}, {"q", model.order.q}};
  j["mu"] = model.mu;
  j["mu_estimated"] = model.mu_estimated;
  j["phi"] = model.phi;
  j["theta"] = model.theta;
  j["sigma2"] = model.sigma2;
  j["css"] = model.css;
  j["n_diff"] = model.n_diff;
  j["diff_mean"] = model.diff_mean;
  j["training_tail"] = model.training_tail;
  j["z_tail"] = model.z_tail;
  j["resid_tail"] = model.resid_tail;
  return j;
}

ArimaModel model_from_json(const nlohmann::json& j) {
  if (!j.contains("format") || j["format"] != "sohkit-arima-v1")
    raise(Errc::bad_config, "not a sohkit ARIMA model document");
  ArimaModel m;
  m.order.p = j["order"]["p"];
  m.order.d = j["order"]["d"];
  m.order.q = j["order"]["q"];
  m.mu = j["mu"];
  m.mu_estimated = j["mu_estimated"];
  m.phi = j["phi"].get<std::vector<double>>();
  m.theta = j["theta"].get<std::vector<double>>();
  m.sigma2 = j["sigma2"];
  m.css = j["css"];
  m.n_diff = j["n_diff"];
  m.diff_mean = j["diff_mean"];
  m.training_tail = j["training_tail"].get<std::vector<double>>();
  m.z_tail = j["z_tail"].get<std::vector<double>>();
  m.resid_tail = j["resid_tail"].get<std::vector<double>>();
  return m;
}

}  // namespace sohkit::arima
