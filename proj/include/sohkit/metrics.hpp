#pragma once

#include <cstddef>
#include <vector>

namespace sohkit::eval {

// Forecast-quality scores. When the target is constant, evar/r2 are
// undefined: they are NaN and target_constant is set; rmse is still valid.
struct Metrics {
  double rmse = 0.0;
  double evar = 0.0;  // 1 - var(y - yhat) / var(y)
  double r2 = 0.0;    // 1 - SS_res / SS_tot
  std::size_t n = 0;
  bool target_constant = false;
};

Metrics score(const std::vector<double>& observed,
              const std::vector<double>& predicted);

}  // namespace sohkit::eval
