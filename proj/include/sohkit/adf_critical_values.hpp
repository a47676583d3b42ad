#pragma once

namespace sohkit::stats::detail {

// Response-surface coefficients for the constant-only (no trend) Dickey-Fuller
// t-distribution, MacKinnon (2010), one variable. Critical value at sample
// size n: b0 + b1/n + b2/n^2 + b3/n^3. Pinned here so results are bit-stable
// across releases.
inline constexpr const char* kAdfTableVersion = "mackinnon-2010-tau-c-v1";

struct AdfSurface {
  double level;
  double b0, b1, b2, b3;
};

inline constexpr AdfSurface kAdfTauC[3] = {
    {0.01, -3.43035, -6.5393, -16.786, -79.433},
    {0.05, -2.86154, -2.8903, -4.234, -40.040},
    {0.10, -2.56677, -1.5384, -2.809, 0.0},
};

}  // namespace sohkit::stats::detail
