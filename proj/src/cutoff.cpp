#include "cutoff.hpp"

#include <array>
#include <cmath>

#include "common.hpp"
#include "quad1d.hpp"

namespace sascal::sphere {

namespace {

constexpr double kLo = 0.25;
constexpr double kHi = 0.75;

// Unnormalized bump: exp(-1/((s - 1/4)(3/4 - s))) inside (1/4, 3/4), else 0.
double bump(double s) {
    if (s <= kLo || s >= kHi) return 0.0;
    return std::exp(-1.0 / ((s - kLo) * (kHi - s)));
}

double bump_derivative(double s) {
    if (s <= kLo || s >= kHi) return 0.0;
    double q = (s - kLo) * (kHi - s);
    double qp = (kHi - s) - (s - kLo);
    return bump(s) * qp / (q * q);
}

// Cached cumulative profile on a fine grid over [1/4, 3/4], with the exact
// analytic derivative at every node; evaluation is cubic Hermite between
// nodes (derivatives are Fritsch-Carlson limited so the interpolant is
// monotone even across the ultra-flat collar region).
struct ProfileTable {
    static constexpr int kIntervals = 4096;
    std::array<double, kIntervals + 1> value;
    std::array<double, kIntervals + 1> slope;
    double mass;     // integral of the bump over its support
    double c1, c2;   // measured sup |eta'|, sup |eta''|

    ProfileTable() {
        const double h = (kHi - kLo) / kIntervals;
        // Per-interval 5-point Gauss-Legendre accumulation of the bump mass.
        static const double gx[5] = {-0.906179845938663992797626878299,
                                     -0.538469310105683091036314420700, 0.0,
                                     0.538469310105683091036314420700,
                                     0.906179845938663992797626878299};
        static const double gw[5] = {0.236926885056189087514264040720,
                                     0.478628670499366468041291514836,
                                     0.568888888888888888888888888889,
                                     0.478628670499366468041291514836,
                                     0.236926885056189087514264040720};
        long double acc = 0.0L;
        value[0] = 0.0;
        for (int i = 0; i < kIntervals; ++i) {
            double a = kLo + i * h, mid = a + 0.5 * h;
            long double part = 0.0L;
            for (int g = 0; g < 5; ++g) part += (long double)(gw[g] * bump(mid + 0.5 * h * gx[g]));
            acc += part * (long double)(0.5 * h);
            value[i + 1] = (double)acc;
        }
        mass = (double)acc;
        for (int i = 0; i <= kIntervals; ++i) {
            value[i] = value[i] / mass;
            slope[i] = bump(kLo + i * h) / mass;
        }
        value[kIntervals] = 1.0;
        // Monotonicity limiting: slope_i <= 3 * min(adjacent secants).
        for (int i = 0; i <= kIntervals; ++i) {
            double dl = (i > 0) ? (value[i] - value[i - 1]) / h : 1e300;
            double dr = (i < kIntervals) ? (value[i + 1] - value[i]) / h : 1e300;
            double cap = 3.0 * std::min(dl, dr);
            if (slope[i] > cap) slope[i] = cap;
        }
        c1 = 0.0;
        c2 = 0.0;
        for (int i = 0; i <= 8 * kIntervals; ++i) {
            double s = kLo + (kHi - kLo) * i / (8.0 * kIntervals);
            c1 = std::max(c1, std::fabs(bump(s) / mass));
            c2 = std::max(c2, std::fabs(bump_derivative(s) / mass));
        }
    }

    double eval(double s) const {
        if (s <= kLo) return 0.0;
        if (s >= kHi) return 1.0;
        const double h = (kHi - kLo) / kIntervals;
        int i = (int)((s - kLo) / h);
        if (i >= kIntervals) i = kIntervals - 1;
        double t = (s - (kLo + i * h)) / h;
        double v0 = value[i], v1 = value[i + 1], m0 = slope[i] * h, m1 = slope[i + 1] * h;
        double t2 = t * t, t3 = t2 * t;
        double y = (2 * t3 - 3 * t2 + 1) * v0 + (t3 - 2 * t2 + t) * m0 +
                   (-2 * t3 + 3 * t2) * v1 + (t3 - t2) * m1;
        if (y < 0.0) y = 0.0;
        if (y > 1.0) y = 1.0;
        return y;
    }
};

const ProfileTable& table() {
    static const ProfileTable t;
    return t;
}

}  // namespace

double cutoff_profile(double s) { return table().eval(s); }

double cutoff_profile_derivative(double s, int order) {
    if (order == 1) return bump(s) / table().mass;
    if (order == 2) return bump_derivative(s) / table().mass;
    throw argument_error("cutoff profile derivatives available for orders 1 and 2 only");
}

double cutoff_derivative_constant(int order) {
    if (order == 1) return table().c1;
    if (order == 2) return table().c2;
    throw argument_error("cutoff derivative constants available for orders 1 and 2 only");
}

double flattened_cutoff(const CutoffSpec& spec, double t) {
    if (!(spec.sigma < spec.tau)) throw argument_error("cutoff needs sigma < tau");
    return cutoff_profile((t - spec.sigma) / (spec.tau - spec.sigma));
}

double flattened_cutoff_derivative(const CutoffSpec& spec, double t, int order) {
    if (!(spec.sigma < spec.tau)) throw argument_error("cutoff needs sigma < tau");
    double w = spec.tau - spec.sigma;
    return cutoff_profile_derivative((t - spec.sigma) / w, order) / std::pow(w, order);
}

}  // namespace sascal::sphere
