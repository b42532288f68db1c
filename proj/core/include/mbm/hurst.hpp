#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mbm {

enum class HurstFamily { Constant, Plateau, Cusp, Sine };

// Declared regularity class of the family. Ceta marks families that are
// only Hoelder/C^1 at the cap crossing (cusp with p <= 2).
enum class Smoothness { Ceta, Ctwo, Cinfinity };

struct MinInterval {
    double a;
    double b;
};

struct MinPoint {
    double x;
    int order;  // order of the first non-vanishing one-sided derivative
};

// Level set of the minimum: disjoint closed intervals and/or isolated points.
struct MinSet {
    std::vector<MinInterval> intervals;
    std::vector<MinPoint> points;

    double distance(double t) const;
    bool contains(double t, double tol = 0.0) const;
};

/// Parametric Hurst function h : [0,1] -> (0,1) with analytically known
/// minimum, maximum and minimum-set structure.
class HurstFunction {
public:
    static HurstFunction constant(double H);
    static HurstFunction plateau(double h_min, double h_max, double a, double b);
    static HurstFunction cusp(double h_min, double x, int p, double c, double h_cap);
    static HurstFunction sine(double base, double amp, int freq);

    // Parses the mini-grammar, e.g. "plateau:hmin=0.3,hmax=0.7,a=0.4,b=0.6".
    static HurstFunction parse(std::string_view spec);

    // h(t); throws std::domain_error for t outside [0,1].
    double operator()(double t) const;

    HurstFamily family() const { return family_; }
    double h_min() const { return h_min_; }
    double h_max() const { return h_max_; }
    const MinSet& min_set() const { return min_set_; }
    Smoothness smoothness() const { return smoothness_; }

    // Canonical grammar string reproducing this family.
    const std::string& spec_string() const { return spec_; }

private:
    HurstFunction() = default;

    HurstFamily family_ = HurstFamily::Constant;
    double h_min_ = 0.5;
    double h_max_ = 0.5;
    MinSet min_set_;
    Smoothness smoothness_ = Smoothness::Cinfinity;
    std::string spec_;

    // family parameters
    double p1_ = 0, p2_ = 0, p3_ = 0, p4_ = 0;
    int ip_ = 0;
};

// C2 transition polynomial 6u^5 - 15u^4 + 10u^3 on [0,1] and its
// derivatives, exposed so tests can check gluing against the closed form.
double smoothstep5(double u);
double smoothstep5_d1(double u);
double smoothstep5_d2(double u);

}  // namespace mbm
