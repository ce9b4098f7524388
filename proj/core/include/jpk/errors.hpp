#pragma once

#include <stdexcept>
#include <string>

namespace jpk {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Requested order exceeds a transcribed coefficient table.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Adaptive quadrature failed to reach its tolerance.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A basis series hit k_max before its tail criterion was met.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace jpk
