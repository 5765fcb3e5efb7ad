#pragma once

#include <stdexcept>
#include <string>

namespace volint {

/// Base class for recoverable estimation failures. Argument validation
/// errors use std::invalid_argument instead.
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fewer observations precede the forecast origin than the estimator needs.
class InsufficientHistory : public EstimationError {
public:
    using EstimationError::EstimationError;
};

/// The squared-return series has zero sample variance.
class DegenerateSeries : public EstimationError {
public:
    using EstimationError::EstimationError;
};

/// The local design matrix is (numerically) singular.
class SingularDesign : public EstimationError {
public:
    using EstimationError::EstimationError;
};

/// The query state lies outside the historical state range, or no
/// historical point falls inside the kernel window.
class NoCoverage : public EstimationError {
public:
    using EstimationError::EstimationError;
};

/// Real-data mode asked for a quantity that needs the true volatility.
class NotApplicable : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace volint
