#include "mbm/hurst.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mbm {

namespace {

constexpr double kPlateauBandCap = 0.1;
constexpr double kCuspBandCap = 0.1;

std::string fmt_param(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void bad_param(const std::string& key, const std::string& what) {
    throw std::invalid_argument("parameter-domain error: key " + key + ": " + what);
}

}  // namespace

double smoothstep5(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double smoothstep5_d1(double u) { return u * u * (30.0 + u * (-60.0 + 30.0 * u)); }
double smoothstep5_d2(double u) { return u * (60.0 + u * (-180.0 + 120.0 * u)); }

double MinSet::distance(double t) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& iv : intervals) {
        if (t >= iv.a && t <= iv.b) return 0.0;
        d = std::min(d, std::min(std::abs(t - iv.a), std::abs(t - iv.b)));
    }
    for (const auto& pt : points) d = std::min(d, std::abs(t - pt.x));
    return d;
}

bool MinSet::contains(double t, double tol) const { return distance(t) <= tol; }

HurstFunction HurstFunction::constant(double H) {
    if (!(H > 0.0 && H < 1.0)) bad_param("H", "must lie in (0,1)");
    HurstFunction f;
    f.family_ = HurstFamily::Constant;
    f.h_min_ = f.h_max_ = H;
    f.min_set_.intervals.push_back({0.0, 1.0});
    f.smoothness_ = Smoothness::Cinfinity;
    f.p1_ = H;
    f.spec_ = "const:H=" + fmt_param(H);
    return f;
}

HurstFunction HurstFunction::plateau(double h_min, double h_max, double a, double b) {
    if (!(h_min > 0.0 && h_min < 1.0)) bad_param("hmin", "must lie in (0,1)");
    if (!(h_max > h_min && h_max < 1.0)) bad_param("hmax", "must satisfy hmin < hmax < 1");
    if (!(a > 0.0 && a < 1.0)) bad_param("a", "must lie in (0,1)");
    if (!(b > a && b < 1.0)) bad_param("b", "must satisfy a < b < 1");
    HurstFunction f;
    f.family_ = HurstFamily::Plateau;
    f.h_min_ = h_min;
    f.h_max_ = h_max;
    f.min_set_.intervals.push_back({a, b});
    f.smoothness_ = Smoothness::Ctwo;
    f.p1_ = h_min;
    f.p2_ = h_max;
    f.p3_ = a;
    f.p4_ = b;
    f.spec_ = "plateau:hmin=" + fmt_param(h_min) + ",hmax=" + fmt_param(h_max) +
              ",a=" + fmt_param(a) + ",b=" + fmt_param(b);
    return f;
}

HurstFunction HurstFunction::cusp(double h_min, double x, int p, double c, double h_cap) {
    if (!(h_min > 0.0 && h_min < 1.0)) bad_param("hmin", "must lie in (0,1)");
    if (!(h_cap > h_min && h_cap < 1.0)) bad_param("cap", "must satisfy hmin < cap < 1");
    if (!(x > 0.0 && x < 1.0)) bad_param("x", "must lie in (0,1)");
    if (!(c > 0.0)) bad_param("c", "must be positive");
    if (p < 1) bad_param("p", "must be a positive integer");
    HurstFunction f;
    f.family_ = HurstFamily::Cusp;
    f.h_min_ = h_min;
    f.min_set_.points.push_back({x, p});
    // The cap crossing is glued C2 only for p >= 3; for p in {1,2} the raw
    // min() is kept and the class is declared accordingly.
    f.smoothness_ = (p >= 3) ? Smoothness::Ctwo : Smoothness::Ceta;
    f.p1_ = h_min;
    f.p2_ = x;
    f.p3_ = c;
    f.p4_ = h_cap;
    f.ip_ = p;
    f.spec_ = "cusp:hmin=" + fmt_param(h_min) + ",x=" + fmt_param(x) +
              ",p=" + std::to_string(p) + ",c=" + fmt_param(c) + ",cap=" + fmt_param(h_cap);
    // h is monotone in |t - x|, so the max over [0,1] sits at an endpoint.
    f.h_max_ = std::max(f(0.0), f(1.0));
    return f;
}

HurstFunction HurstFunction::sine(double base, double amp, int freq) {
    if (!(amp > 0.0)) bad_param("amp", "must be positive");
    if (!(base - amp > 0.0)) bad_param("base", "base - amp must be positive");
    if (!(base + amp < 1.0)) bad_param("base", "base + amp must be below 1");
    if (freq < 1) bad_param("freq", "must be a positive integer");
    HurstFunction f;
    f.family_ = HurstFamily::Sine;
    f.h_min_ = base - amp;
    f.h_max_ = base + amp;
    for (int j = 0; j <= freq; ++j)
        f.min_set_.points.push_back({static_cast<double>(j) / freq, 2});
    f.smoothness_ = Smoothness::Cinfinity;
    f.p1_ = base;
    f.p2_ = amp;
    f.ip_ = freq;
    f.spec_ = "sine:base=" + fmt_param(base) + ",amp=" + fmt_param(amp) +
              ",freq=" + std::to_string(freq);
    return f;
}

double HurstFunction::operator()(double t) const {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::domain_error("eval_h: t must lie in [0,1]");
    switch (family_) {
        case HurstFamily::Constant:
            return p1_;
        case HurstFamily::Plateau: {
            const double h_min = p1_, h_max = p2_, a = p3_, b = p4_;
            const double w = std::min({a, 1.0 - b, kPlateauBandCap});
            if (t >= a && t <= b) return h_min;
            if (t < a) {
                if (t <= a - w) return h_max;
                return h_min + (h_max - h_min) * smoothstep5((a - t) / w);
            }
            if (t >= b + w) return h_max;
            return h_min + (h_max - h_min) * smoothstep5((t - b) / w);
        }
        case HurstFamily::Cusp: {
            const double h_min = p1_, x = p2_, c = p3_, cap = p4_;
            const int p = ip_;
            const double r = std::abs(t - x);
            const double raw = h_min + c * std::pow(r, p);
            if (p <= 2) return std::min(raw, cap);
            // C2 blend from the raw cusp to the cap over [r_in, r_out].
            const double r0 = std::pow((cap - h_min) / c, 1.0 / p);
            const double w = std::min(kCuspBandCap, r0 / 2.0);
            const double r_out = r0, r_in = r0 - w;
            if (r <= r_in) return raw;
            if (r >= r_out) return cap;
            return raw + (cap - raw) * smoothstep5((r - r_in) / w);
        }
        case HurstFamily::Sine: {
            const double base = p1_, amp = p2_;
            const double freq = static_cast<double>(ip_);
            return base + amp * std::sin(2.0 * M_PI * freq * t - M_PI / 2.0);
        }
    }
    throw std::logic_error("unreachable");
}

HurstFunction HurstFunction::parse(std::string_view spec) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos)
        throw std::invalid_argument("hurst spec: expected '<family>:<key>=<value>,...', got '" +
                                    std::string(spec) + "'");
    const std::string family(spec.substr(0, colon));
    std::map<std::string, std::string> kv;
    std::stringstream rest{std::string(spec.substr(colon + 1))};
    std::string item;
    while (std::getline(rest, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("hurst spec: key '" + item + "': missing '='");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    auto take_real = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) bad_param(key, "missing");
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
            kv.erase(it);
            return v;
        } catch (const std::exception&) {
            bad_param(key, "not a real number: '" + it->second + "'");
        }
    };
    auto take_int = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) bad_param(key, "missing");
        try {
            std::size_t pos = 0;
            const int v = std::stoi(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
            kv.erase(it);
            return v;
        } catch (const std::exception&) {
            bad_param(key, "not an integer: '" + it->second + "'");
        }
    };
    auto finish = [&](HurstFunction f) {
        if (!kv.empty()) bad_param(kv.begin()->first, "unknown key");
        return f;
    };
    if (family == "const") return finish(constant(take_real("H")));
    if (family == "plateau") {
        const double hmin = take_real("hmin"), hmax = take_real("hmax");
        const double a = take_real("a"), b = take_real("b");
        return finish(plateau(hmin, hmax, a, b));
    }
    if (family == "cusp") {
        const double hmin = take_real("hmin"), x = take_real("x");
        const int p = take_int("p");
        const double c = take_real("c"), cap = take_real("cap");
        return finish(cusp(hmin, x, p, c, cap));
    }
    if (family == "sine") {
        const double base = take_real("base"), amp = take_real("amp");
        const int freq = take_int("freq");
        return finish(sine(base, amp, freq));
    }
    throw std::invalid_argument("hurst spec: unknown family '" + family + "'");
}

}  // namespace mbm
