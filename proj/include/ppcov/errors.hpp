#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ppcov {

/// Malformed input: wrong dimensions, non-finite entries, empty data.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A distribution or algorithm parameter outside its admissible range.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised by the Cholesky factorization; carries the 0-based pivot that failed.
class NotPositiveDefinite : public std::runtime_error {
public:
    NotPositiveDefinite(std::size_t pivot, double value, const std::string& context = {})
        : std::runtime_error(make_message(pivot, value, context)), pivot_(pivot), value_(value) {}

    std::size_t pivot() const noexcept { return pivot_; }
    double pivot_value() const noexcept { return value_; }

private:
    static std::string make_message(std::size_t pivot, double value, const std::string& context) {
        std::string msg = "matrix is not positive definite (pivot " + std::to_string(pivot) +
                          " = " + std::to_string(value) + ")";
        if (!context.empty()) msg += ": " + context;
        return msg;
    }

    std::size_t pivot_;
    double value_;
};

}  // namespace ppcov
