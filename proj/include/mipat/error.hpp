#pragma once

#include <stdexcept>
#include <string>

namespace mipat {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user-supplied input: malformed text, out-of-range arguments, ragged
/// files, degenerate data. The CLI maps these to exit code 2.
class invalid_input : public error {
public:
    using error::error;
};

class dimension_mismatch : public invalid_input {
public:
    dimension_mismatch(std::size_t lhs, std::size_t rhs)
        : invalid_input("dimension mismatch: " + std::to_string(lhs) + " vs " + std::to_string(rhs)) {}
};

/// Checked integer arithmetic exceeded 64 bits.
class overflow : public invalid_input {
public:
    using invalid_input::invalid_input;
};

/// Data that cannot be analysed as given (constant column, singular
/// correlation submatrix, too few samples).
class degenerate_data : public invalid_input {
public:
    using invalid_input::invalid_input;
};

/// Cholesky pivot fell below tolerance.
class not_positive_definite : public degenerate_data {
public:
    using degenerate_data::degenerate_data;
};

/// Something that should be impossible for valid input happened (e.g. a
/// clearly negative information statistic). Exit code 1.
class numerical_error : public error {
public:
    using error::error;
};

} // namespace mipat
