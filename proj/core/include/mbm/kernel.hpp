#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mbm/hurst.hpp"

namespace mbm {

/// Normalization coefficient c_x, evaluated through the singularity-free
/// reformulation c_x^2 = pi * sinc(pi(1-2x)/2) * Gamma(2-2x) / x, which is
/// smooth across x = 1/2 and gives c_{1/2} = sqrt(2*pi) exactly.
double c_coef(double x);

/// Covariance R_h(t,s) of the process with Hurst function f.
double r_cov(const HurstFunction& f, double t, double s);

/// Covariance of the lag-k increments over [i/n,(i+k)/n] and [j/n,(j+k)/n].
double increment_cov(const HurstFunction& f, int n, int k, int i, int j);

/// Exact E[V(k)^n] = sum of increment variances.
double expected_qv(const HurstFunction& f, int n, int k);

/// Deterministic expectation ratio E[V(1)^n] / E[V(2)^n].
double u_ratio(const HurstFunction& f, int n);

/// Exact var(V(k)^n) = 2 * sum_{i,j} increment_cov(i,j)^2.
double qv_variance(const HurstFunction& f, int n, int k);

struct MomentReport {
    int n = 0;
    double ev1 = 0, ev2 = 0;
    std::optional<double> var1, var2;  // absent when the O(n^2) sums were skipped
    double u_ratio = 0;
    double hmin_target = 0;  // 2^{-2 h_min}

    static std::string csv_header();
    std::string csv_row() const;
};

MomentReport moment_report(const HurstFunction& f, int n, bool with_variance = false);

/// Precomputed per-grid-point h and c values for repeated kernel evaluation
/// on the uniform grid {i/n}. Read-only after construction.
class KernelGrid {
public:
    KernelGrid(const HurstFunction& f, int n);

    int n() const { return n_; }
    double r(int i, int j) const;              // R_h(i/n, j/n)
    double incr_cov(int k, int i, int j) const;
    double expected_qv(int k) const;
    double qv_variance(int k) const;           // deterministic under any worker count

private:
    int n_;
    std::vector<double> h_;  // h(i/n), i = 0..n
    std::vector<double> c_;  // c_{h(i/n)}
};

}  // namespace mbm
