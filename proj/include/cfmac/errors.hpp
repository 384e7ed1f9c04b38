#pragma once

#include <stdexcept>

namespace cfmac {

// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid argument values: empty vectors, nonpositive power, zero scaling, ...
struct domain_error : error {
    using error::error;
};

// The two-user machinery refuses channels with a zero gain instead of
// returning all-zero rates.
struct degenerate_channel_error : error {
    using error::error;
};

// Coefficient matrices must be full rank.
struct singular_matrix_error : error {
    using error::error;
};

// Numerical breakdown: failed Cholesky pivot, singular solve, search ceiling.
struct numeric_error : error {
    using error::error;
};

} // namespace cfmac
