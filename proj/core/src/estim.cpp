#include "mbm/estim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mbm/detail/parallel.hpp"
#include "mbm/errors.hpp"

namespace mbm {

namespace {

constexpr double kHEdge = 1e-4;      // Lambda inversion domain margin
constexpr int kTableSize = 512;
constexpr int kGaussNodes = 64;

struct GaussLegendre {
    std::vector<double> nodes;    // on (-1,1)
    std::vector<double> weights;
};

// Nodes/weights by Newton iteration on the Legendre recurrence.
const GaussLegendre& gauss_legendre_64() {
    static const GaussLegendre gl = [] {
        GaussLegendre g;
        const int n = kGaussNodes;
        g.nodes.resize(n);
        g.weights.resize(n);
        for (int i = 0; i < n; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                pp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / pp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            g.nodes[i] = x;
            g.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        }
        return g;
    }();
    return gl;
}

double integrate_segment(double lo, double hi, double rho, double s) {
    const auto& gl = gauss_legendre_64();
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double acc = 0.0;
    for (int i = 0; i < kGaussNodes; ++i) {
        const double th = mid + half * gl.nodes[i];
        const double x = std::cos(th);
        const double y = rho * x + s * std::sin(th);
        acc += gl.weights[i] * psi(x, y);
    }
    return half * acc;
}

}  // namespace

FilterSpec FilterSpec::difference() {
    FilterSpec f;
    f.coeffs = {-1.0, 1.0};
    f.order = 1;
    return f;
}

FilterSpec FilterSpec::second_difference() {
    FilterSpec f;
    f.coeffs = {1.0, -2.0, 1.0};
    f.order = 2;
    return f;
}

FilterSpec FilterSpec::validate(std::vector<double> coeffs) {
    const int q = static_cast<int>(coeffs.size()) - 1;
    if (q < 1) throw std::invalid_argument("filter: needs at least two coefficients");
    int order = -1;
    for (int k = 0; k <= q; ++k) {
        double moment = 0.0, scale = 0.0;
        for (int j = 0; j <= q; ++j) {
            const double jk = (j == 0 && k == 0) ? 1.0 : std::pow(j, k);
            moment += coeffs[j] * jk;
            scale += std::abs(coeffs[j]) * jk;
        }
        if (std::abs(moment) > 1e-12 * scale) {
            order = k;
            break;
        }
    }
    if (order == 0)
        throw std::invalid_argument("filter: coefficients must sum to zero");
    if (order < 0)
        throw std::invalid_argument("filter: all moments vanish (zero vector?)");
    FilterSpec f;
    f.coeffs = std::move(coeffs);
    f.order = order;
    return f;
}

FilterSpec FilterSpec::named(const std::string& name) {
    if (name == "a1") return difference();
    if (name == "a2") return second_difference();
    throw std::invalid_argument("filter: unknown name '" + name + "' (expected a1 or a2)");
}

double filter_increment(const PathSample& path, const FilterSpec& a, int i) {
    const int q = a.q();
    if (i < 0 || i > path.n - q)
        throw std::domain_error("filter_increment: index out of range");
    double acc = 0.0;
    for (int j = 0; j <= q; ++j) acc += a.coeffs[j] * path.values[i + j];
    return acc;
}

double quad_variation(const PathSample& path, int k) {
    if (k < 1) throw std::domain_error("quad_variation: k must be >= 1");
    if (path.n < k) throw std::domain_error("quad_variation: n must be >= k");
    detail::KahanSum acc;
    for (int i = 0; i <= path.n - k; ++i) {
        const double d = path.values[i + k] - path.values[i];
        acc.add(d * d);
    }
    return acc.value();
}

double ratio_stat(const PathSample& path) {
    const double v2 = quad_variation(path, 2);
    if (v2 == 0.0) throw DegeneratePath("ratio_stat: V(2)^n is zero");
    return quad_variation(path, 1) / v2;
}

HminEstimate hmin_estimate(const PathSample& path) {
    const double s = ratio_stat(path);
    const double raw = -std::log(s) / (2.0 * std::log(2.0));
    return {raw, std::min(std::max(raw, 1e-6), 1.0 - 1e-6)};
}

double psi(double x, double y) {
    const double den = std::abs(x) + std::abs(y);
    if (den == 0.0) throw std::domain_error("psi: both arguments are zero");
    return std::abs(x + y) / den;
}

double rho_filter(double H, const FilterSpec& a, int lag) {
    if (!(H > 0.0 && H < 1.0)) throw std::domain_error("rho_filter: H must lie in (0,1)");
    if (lag < 0) throw std::domain_error("rho_filter: lag must be >= 0");
    const int q = a.q();
    auto gamma = [&](int k) {
        double acc = 0.0;
        for (int j = 0; j <= q; ++j)
            for (int jp = 0; jp <= q; ++jp)
                acc += a.coeffs[j] * a.coeffs[jp] *
                       std::pow(std::abs(k + jp - j), 2.0 * H);
        return -0.5 * acc;
    };
    return gamma(lag) / gamma(0);
}

double lambda_of_H(double H, const FilterSpec& a) {
    const double rho = rho_filter(H, a, 1);
    if (rho >= 1.0) return 1.0;
    if (rho <= -1.0) return 0.0;
    const double s = std::sqrt(1.0 - rho * rho);
    // psi(cos th, rho cos th + s sin th) is piecewise analytic; split the
    // circle at the kinks of |x|, |y| and |x+y|.
    std::vector<double> cuts = {0.0, 2.0 * M_PI};
    auto add_pair = [&](double th) {
        th = std::fmod(th + 2.0 * M_PI, 2.0 * M_PI);
        cuts.push_back(th);
        cuts.push_back(std::fmod(th + M_PI, 2.0 * M_PI));
    };
    add_pair(M_PI / 2.0);                       // x = 0
    add_pair(std::atan2(-rho, s));              // y = 0
    add_pair(std::atan2(-(1.0 + rho), s));      // x + y = 0
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] < 1e-14) continue;
        total += integrate_segment(cuts[i], cuts[i + 1], rho, s);
    }
    return total / (2.0 * M_PI);
}

LambdaInverter::LambdaInverter(FilterSpec a) : filter_(std::move(a)) {
    grid_.resize(kTableSize);
    table_.resize(kTableSize);
    for (int i = 0; i < kTableSize; ++i) {
        grid_[i] = kHEdge + (1.0 - 2.0 * kHEdge) * i / (kTableSize - 1);
        table_[i] = lambda_of_H(grid_[i], filter_);
    }
}

double LambdaInverter::invert(double v) const {
    if (!(v > table_.front() && v < table_.back()))
        throw LambdaOutOfRange("lambda_inverse: value outside attainable range");
    auto it = std::upper_bound(table_.begin(), table_.end(), v);
    std::size_t k = static_cast<std::size_t>(it - table_.begin());
    double lo = grid_[k - 1], hi = grid_[k];
    for (int i = 0; i < 60 && hi - lo > 1e-13; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (lambda_of_H(mid, filter_) < v)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double lambda_inverse(double v, const FilterSpec& a) {
    return LambdaInverter(a).invert(v);
}

LocalEstimate local_estimate(const PathSample& path, const LocalEstimateConfig& cfg,
                             const LambdaInverter& inverter) {
    if (!(cfg.t > 0.0 && cfg.t < 1.0))
        throw std::domain_error("local_estimate: t must lie in (0,1)");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw std::domain_error("local_estimate: alpha must lie in (0,1)");
    const FilterSpec& a = inverter.filter();
    const int q = a.q();
    const double bw = std::pow(path.n, -cfg.alpha);
    detail::KahanSum acc;
    int count = 0;
    for (int i = 0; i <= path.n - q - 1; ++i) {
        if (std::abs(static_cast<double>(i) / path.n - cfg.t) > bw) continue;
        acc.add(psi(filter_increment(path, a, i), filter_increment(path, a, i + 1)));
        ++count;
    }
    if (count == 0)
        throw EmptyWindow("local_estimate: no grid index within n^-alpha of t");
    const double mean = acc.value() / count;
    LocalEstimate est;
    est.window_count = count;
    try {
        est.h_hat = inverter.invert(mean);
    } catch (const LambdaOutOfRange&) {
        est.h_hat = (mean <= inverter.lambda_lo()) ? kHEdge : 1.0 - kHEdge;
        est.flagged = true;
    }
    return est;
}

LocalEstimate local_estimate(const PathSample& path, const LocalEstimateConfig& cfg) {
    return local_estimate(path, cfg, LambdaInverter(cfg.filter));
}

}  // namespace mbm
