#pragma once

#include <stdexcept>
#include <string>

namespace robmean {

/// Bad input: violated precondition on a size, radius, probability or grid.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the range where a bound is defined (e.g. a tail bound
/// queried below the mean).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The user's quantity q produced something unusable (NaN or infinity).
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

}  // namespace detail
}  // namespace robmean
