#include "mbm/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "mbm/detail/format.hpp"
#include "mbm/detail/parallel.hpp"

namespace mbm {

namespace {

double sinc(double z) {
    if (z == 0.0) return 1.0;
    return std::sin(z) / z;
}

// c_x^2 = pi * sinc(pi(1-2x)/2) * Gamma(2-2x) / x
double c_sq(double x) {
    const double g = (x < 0.5) ? std::exp(std::lgamma(2.0 - 2.0 * x))
                               : std::tgamma(2.0 - 2.0 * x);
    return M_PI * sinc(M_PI * (1.0 - 2.0 * x) / 2.0) * g / x;
}

// R_h with the per-point values (h(t), c_{h(t)}) already known. Shared by
// the free function and KernelGrid so both produce bit-identical values.
double r_cov_impl(double t, double ht, double ct, double s, double hs, double cs) {
    const double hts = 0.5 * (ht + hs);
    const double cmid2 = (ht == hs) ? ct * ct : c_sq(hts);
    const double e = 2.0 * hts;
    return cmid2 / (2.0 * ct * cs) *
           (std::pow(std::abs(t), e) + std::pow(std::abs(s), e) -
            std::pow(std::abs(t - s), e));
}

// Increment covariance when h is the same at all four grid points: the
// stationary fBm form avoids the cancellation of the four-term R combination
// (the diagonal becomes an exact (k/n)^{2H}).
double incr_cov_stationary(double H, int n, int k, int i, int j) {
    const double e = 2.0 * H;
    const double in = static_cast<double>(n);
    const auto p = [&](int d) { return std::pow(std::abs(d) / in, e); };
    return 0.5 * (p(i - j + k) + p(i - j - k) - 2.0 * p(i - j));
}

void check_nk(int n, int k) {
    if (k < 1) throw std::domain_error("k must be >= 1");
    if (n < k) throw std::domain_error("n must be >= k");
}

}  // namespace

double c_coef(double x) {
    if (!(x > 0.0 && x < 1.0)) throw std::domain_error("c_coef: x must lie in (0,1)");
    return std::sqrt(c_sq(x));
}

double r_cov(const HurstFunction& f, double t, double s) {
    if (!(t >= 0.0 && t <= 1.0) || !(s >= 0.0 && s <= 1.0))
        throw std::domain_error("r_cov: t,s must lie in [0,1]");
    const double ht = f(t), hs = f(s);
    return r_cov_impl(t, ht, std::sqrt(c_sq(ht)), s, hs, std::sqrt(c_sq(hs)));
}

double increment_cov(const HurstFunction& f, int n, int k, int i, int j) {
    check_nk(n, k);
    if (i < 0 || j < 0 || i > n - k || j > n - k)
        throw std::domain_error("increment_cov: index out of range");
    const double in = static_cast<double>(n);
    const double h1 = f(i / in), h2 = f((i + k) / in);
    const double h3 = f(j / in), h4 = f((j + k) / in);
    if (h1 == h2 && h1 == h3 && h1 == h4) return incr_cov_stationary(h1, n, k, i, j);
    return r_cov(f, (i + k) / in, (j + k) / in) - r_cov(f, i / in, (j + k) / in) -
           r_cov(f, (i + k) / in, j / in) + r_cov(f, i / in, j / in);
}

KernelGrid::KernelGrid(const HurstFunction& f, int n) : n_(n) {
    if (n < 1) throw std::domain_error("KernelGrid: n must be >= 1");
    h_.resize(n + 1);
    c_.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        h_[i] = f(static_cast<double>(i) / n);
        c_[i] = std::sqrt(c_sq(h_[i]));
    }
}

double KernelGrid::r(int i, int j) const {
    const double in = static_cast<double>(n_);
    return r_cov_impl(i / in, h_[i], c_[i], j / in, h_[j], c_[j]);
}

double KernelGrid::incr_cov(int k, int i, int j) const {
    if (h_[i] == h_[i + k] && h_[i] == h_[j] && h_[i] == h_[j + k])
        return incr_cov_stationary(h_[i], n_, k, i, j);
    return r(i + k, j + k) - r(i, j + k) - r(i + k, j) + r(i, j);
}

double KernelGrid::expected_qv(int k) const {
    check_nk(n_, k);
    detail::KahanSum acc;
    for (int i = 0; i <= n_ - k; ++i) acc.add(incr_cov(k, i, i));
    return acc.value();
}

double KernelGrid::qv_variance(int k) const {
    check_nk(n_, k);
    const int m = n_ - k;  // indices 0..m
    // Fixed-size row blocks with per-block partial sums reduced in block
    // order, so the result does not depend on the worker count.
    constexpr int kBlock = 64;
    const int n_blocks = m / kBlock + 1;
    std::vector<double> partial(n_blocks, 0.0);
    detail::run_blocks(n_blocks, detail::worker_count(), [&](int b) {
        const int lo = b * kBlock;
        const int hi = std::min(lo + kBlock - 1, m);
        detail::KahanSum acc;
        for (int i = lo; i <= hi; ++i) {
            const double d = incr_cov(k, i, i);
            acc.add(d * d);
            for (int j = i + 1; j <= m; ++j) {
                const double r = incr_cov(k, i, j);
                acc.add(2.0 * r * r);
            }
        }
        partial[b] = acc.value();
    });
    detail::KahanSum total;
    for (double p : partial) total.add(p);
    return 2.0 * total.value();
}

double expected_qv(const HurstFunction& f, int n, int k) {
    check_nk(n, k);
    return KernelGrid(f, n).expected_qv(k);
}

double u_ratio(const HurstFunction& f, int n) {
    if (n < 2) throw std::domain_error("u_ratio: n must be >= 2");
    KernelGrid grid(f, n);
    return grid.expected_qv(1) / grid.expected_qv(2);
}

double qv_variance(const HurstFunction& f, int n, int k) {
    check_nk(n, k);
    return KernelGrid(f, n).qv_variance(k);
}

std::string MomentReport::csv_header() {
    return "n,k,ev1,ev2,var1,var2,u_ratio,hmin_target";
}

std::string MomentReport::csv_row() const {
    std::string row = std::to_string(n) + ",1," + detail::fmt17(ev1) + "," + detail::fmt17(ev2) + ",";
    if (var1) row += detail::fmt17(*var1);
    row += ",";
    if (var2) row += detail::fmt17(*var2);
    row += "," + detail::fmt17(u_ratio) + "," + detail::fmt17(hmin_target);
    return row;
}

MomentReport moment_report(const HurstFunction& f, int n, bool with_variance) {
    if (n < 2) throw std::domain_error("moment_report: n must be >= 2");
    KernelGrid grid(f, n);
    MomentReport rep;
    rep.n = n;
    rep.ev1 = grid.expected_qv(1);
    rep.ev2 = grid.expected_qv(2);
    rep.u_ratio = rep.ev1 / rep.ev2;
    rep.hmin_target = std::pow(2.0, -2.0 * f.h_min());
    if (with_variance) {
        rep.var1 = grid.qv_variance(1);
        rep.var2 = grid.qv_variance(2);
    }
    return rep;
}

}  // namespace mbm
