#ifndef IVEXP_ERRORS_HPP
#define IVEXP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ivexp {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid value or violated method precondition (NaN bound, zero in a
// denominator interval, truncation order too small for the norm, ...).
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Operand dimensions do not match.
struct ShapeError : Error {
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// A matrix inverse could not be verified (residual norm >= 1).
struct SingularError : Error {
    explicit SingularError(const std::string& msg) : Error(msg) {}
};

// An iterative factorization failed to converge.
struct IterationError : Error {
    explicit IterationError(const std::string& msg) : Error(msg) {}
};

// Problem size exceeds an enumeration limit.
struct SizeError : Error {
    explicit SizeError(const std::string& msg) : Error(msg) {}
};

// A reference set claimed to be contained in an enclosure is not.
struct ContainmentError : Error {
    explicit ContainmentError(const std::string& msg) : Error(msg) {}
};

// Malformed input text.
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

} // namespace ivexp

#endif
