#pragma once

#include <stdexcept>
#include <string>

namespace mbm {

// Covariance matrix failed Cholesky even after jitter escalation.
struct NotPositiveSemidefinite : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadratic variation denominator is zero (constant path).
struct DegeneratePath : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No grid index falls inside the local-estimation window.
struct EmptyWindow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested value lies outside the attainable range of Lambda.
struct LambdaOutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mbm
