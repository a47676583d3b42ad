#include "sohkit/error.hpp"

namespace sohkit {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::missing_column: return "MissingColumn";
    case Errc::empty_source: return "EmptySource";
    case Errc::mixed_serial: return "MixedSerial";
    case Errc::too_many_bad_rows: return "TooManyBadRows";
    case Errc::all_dropped: return "AllDropped";
    case Errc::insufficient_samples: return "InsufficientSamples";
    case Errc::nonpositive_c0: return "NonpositiveC0";
    case Errc::nonpositive_nominal: return "NonpositiveNominal";
    case Errc::too_short: return "TooShort";
    case Errc::zero_variance: return "ZeroVariance";
    case Errc::singular_regression: return "SingularRegression";
    case Errc::all_zero_differences: return "AllZeroDifferences";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::invalid_order: return "InvalidOrder";
    case Errc::non_invertible: return "NonInvertible";
    case Errc::degenerate_series: return "DegenerateSeries";
    case Errc::missing_history: return "MissingHistory";
    case Errc::empty_data: return "EmptyData";
    case Errc::width_mismatch: return "WidthMismatch";
    case Errc::too_few_rows: return "TooFewRows";
    case Errc::empty_grid: return "EmptyGrid";
    case Errc::zero_variance_target: return "ZeroVarianceTarget";
    case Errc::no_months: return "NoMonths";
    case Errc::no_eligible_batteries: return "NoEligibleBatteries";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::bad_config: return "BadConfig";
    case Errc::unknown_subcommand: return "UnknownSubcommand";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

}  // namespace sohkit
