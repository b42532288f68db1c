#pragma once

#include <string>
#include <vector>

#include "mbm/synth.hpp"

namespace mbm {

/// Coefficient vector a_0..a_q with vanishing moments up to order-1:
/// sum_j j^k a_j = 0 for k < order, sum_j j^order a_j != 0.
struct FilterSpec {
    std::vector<double> coeffs;
    int order = 0;

    int q() const { return static_cast<int>(coeffs.size()) - 1; }

    static FilterSpec difference();         // a(1) = (-1, 1), order 1
    static FilterSpec second_difference();  // a(2) = (1, -2, 1), order 2

    // Validates the vanishing-moment conditions and computes the order;
    // throws std::invalid_argument for vectors that are not a filter.
    static FilterSpec validate(std::vector<double> coeffs);

    // "a1" or "a2".
    static FilterSpec named(const std::string& name);
};

/// Generalized increment sum_j a_j * values[i+j].
double filter_increment(const PathSample& path, const FilterSpec& a, int i);

/// V(k)^n = sum of squared lag-k increments.
double quad_variation(const PathSample& path, int k);

/// S_n = V(1)^n / V(2)^n; throws DegeneratePath when V(2)^n = 0.
double ratio_stat(const PathSample& path);

struct HminEstimate {
    double raw;      // -ln(S_n) / (2 ln 2)
    double clamped;  // raw clamped into [1e-6, 1 - 1e-6]
};

HminEstimate hmin_estimate(const PathSample& path);

/// psi(x,y) = |x+y| / (|x| + |y|), scale- and sign-invariant.
double psi(double x, double y);

/// Correlation of filtered fBm increments at the given lag; independent of
/// n by self-similarity.
double rho_filter(double H, const FilterSpec& a, int lag);

/// Lambda(H) = E[psi(X,Y)] for standard bivariate normals with correlation
/// rho_filter(H, a, 1). psi is homogeneous of degree 0, so the radial part
/// of the Gaussian integral is exact and only the angular integral remains;
/// it is evaluated piecewise (split at the kinks of psi) by Gauss-Legendre.
double lambda_of_H(double H, const FilterSpec& a);

/// Monotone inversion of Lambda via a precomputed 512-point table plus
/// bisection. Read-only after construction.
class LambdaInverter {
public:
    explicit LambdaInverter(FilterSpec a);

    // H with |Lambda(H) - v| <= 1e-9; throws LambdaOutOfRange when v is not
    // attainable within H in [1e-4, 1 - 1e-4].
    double invert(double v) const;

    double lambda_lo() const { return table_.front(); }
    double lambda_hi() const { return table_.back(); }
    const FilterSpec& filter() const { return filter_; }

private:
    FilterSpec filter_;
    std::vector<double> grid_;   // H values
    std::vector<double> table_;  // Lambda at grid_
};

double lambda_inverse(double v, const FilterSpec& a);

struct LocalEstimateConfig {
    double t = 0.5;
    double alpha = 0.5;
    FilterSpec filter = FilterSpec::second_difference();
};

struct LocalEstimate {
    double h_hat = 0;
    int window_count = 0;
    bool flagged = false;  // Lambda inversion clamped to an endpoint
};

/// Ratio-type local estimator of h(t): averages psi over the window
/// {i : |i/n - t| <= n^-alpha} and inverts Lambda.
LocalEstimate local_estimate(const PathSample& path, const LocalEstimateConfig& cfg);
LocalEstimate local_estimate(const PathSample& path, const LocalEstimateConfig& cfg,
                             const LambdaInverter& inverter);

}  // namespace mbm
