#pragma once

#include <stdexcept>

namespace omptk {

/// A column handed to a projection update already lies (numerically) in the
/// span of the existing basis.
struct DegenerateColumn : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A matrix expected to have full column rank does not, at the configured
/// tolerance.
struct RankDeficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A selection ratio was requested against a numerically zero residual.
struct ZeroResidual : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The oracle-restricted pursuit selected an index outside the true support.
/// Indicates an implementation bug; must never fire.
struct GenieFailure : std::logic_error {
  using std::logic_error::logic_error;
};

/// Fixed-point iteration for a reference measurement curve did not converge.
struct NoFixedPoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The measurement count is at or below the scaling law; no valid threshold
/// plan exists.
struct BelowScaling : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid experiment or signal configuration.
struct ConfigInvalid : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Filesystem failure while reading or writing artifacts.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace omptk
