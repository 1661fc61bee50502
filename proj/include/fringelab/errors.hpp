#pragma once

#include <stdexcept>
#include <string>

namespace fringelab {

/// Input violates a structural invariant (normalization, Hermiticity, PSD, sizes).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Both blocked paths carry zero population.
class DegenerateBlock : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A measure is mathematically undefined for the input (e.g. n = 1, I_max + I_min = 0).
class UndefinedMeasure : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A measure exists but its recipe does not apply (non-absorbable phases, mixed state).
class MeasureInapplicable : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The operation is not supported for this configuration (sweep of independent phases,
/// oracle dimension too large).
class UnsupportedOperation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace fringelab
