#pragma once

#include <stdexcept>
#include <string>

namespace smch {

/// Invalid parameters, schema violations, out-of-range indices.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// NaN/Inf encountered in a field or a result.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad magic, version or truncation in a binary snapshot.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A tracked quantity reached the periodic seam region.
class DomainContaminationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data does not satisfy the hypotheses of the breaking certificate.
class HypothesisViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedConfiguration : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A Picard iterate left the bounded regime inside the requested horizon.
class HorizonTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace smch
