#include "sphere.hpp"

#include <cmath>

#include "quad1d.hpp"

namespace sascal::sphere {

namespace {
constexpr double kPi = 3.14159265358979323846;

double clamp_pm1(double c) {
    if (c > 1.0) {
        if (c > 1.0 + 1e-15) throw argument_error("inner product exceeds 1 beyond round-off");
        return 1.0;
    }
    if (c < -1.0) {
        if (c < -1.0 - 1e-15) throw argument_error("inner product below -1 beyond round-off");
        return -1.0;
    }
    return c;
}
}  // namespace

void check_point(const Vec& x, double tol) {
    if (std::fabs(norm(x) - 1.0) > tol) throw argument_error("sphere point is not unit length");
}

void check_tangent(const Vec& x, const Vec& t, double tol) {
    if (std::fabs(dot(x, t)) > tol) throw argument_error("vector is not tangent at the base point");
}

double geodesic_distance(const Vec& x, const Vec& p) {
    return std::acos(clamp_pm1(dot(x, p)));
}

Vec radial_gradient(const Vec& x, const Vec& p) {
    double c = clamp_pm1(dot(x, p));
    double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    if (s < 1e-9) throw singularity_error("radial gradient at a pole (sin r < 1e-9)");
    return (1.0 / s) * (c * x - p);
}

Vec polar_point(const Vec& p, double r, const Vec& theta) {
    if (!(r > 0.0 && r < kPi)) throw argument_error("polar radius outside (0, pi)");
    return std::cos(r) * p + std::sin(r) * theta;
}

std::pair<double, Vec> polar_coordinates(const Vec& p, const Vec& x) {
    double r = geodesic_distance(x, p);
    double s = std::sin(r);
    if (s < 1e-9) throw singularity_error("polar coordinates at a pole (sin r < 1e-9)");
    Vec theta = (1.0 / s) * (x - std::cos(r) * p);
    return {r, theta};
}

Vec join_point(double rho, const Vec& z, const Vec& theta) {
    if (!(rho > 0.0 && rho < kPi / 2)) throw argument_error("join radius outside (0, pi/2)");
    int n1 = z.size();
    if (std::fabs(z[0]) > 1e-12 || std::fabs(z[1]) > 1e-12)
        throw argument_error("join chart: z must lie in the span of e_3..e_{n+1}");
    for (int i = 2; i < n1; ++i)
        if (std::fabs(theta[i]) > 1e-12)
            throw argument_error("join chart: theta must lie in the span of e_1, e_2");
    return std::cos(rho) * z + std::sin(rho) * theta;
}

double cos_r_identity(double rho, double t) { return std::cos(rho) * std::cos(t); }

double tube_radius(const Vec& x) {
    double s = 0.0;
    for (int i = 1; i + 1 < x.size(); ++i) s += x[i] * x[i];
    return std::sqrt(s);
}

double sphere_volume(int k) {
    if (k < 0) throw argument_error("sphere dimension must be nonnegative");
    // vol(S^k) = 2 pi^{(k+1)/2} / Gamma((k+1)/2), with half-integer Gamma in
    // closed form: Gamma(q) = (q-1)! and Gamma(q + 1/2) = (2q)! sqrt(pi) / (4^q q!).
    if (k % 2 == 1) {
        int q = (k + 1) / 2;
        double fact = 1.0;
        for (int i = 2; i < q; ++i) fact *= i;
        return 2.0 * std::pow(kPi, q) / fact;
    }
    int q = k / 2;
    double num = 1.0, den = 1.0;  // (2q)! / (4^q q!)
    for (int i = 1; i <= 2 * q; ++i) num *= i;
    for (int i = 1; i <= q; ++i) den *= 4.0 * i;
    return 2.0 * std::pow(kPi, q + 0.5) / (num * std::sqrt(kPi) / den);
}

CotIntegral cot_integral_bound(double q, double s) {
    if (!(q > 1.0)) throw argument_error("cotangent integral needs exponent q > 1");
    if (!(s > 0.0 && s <= kPi / 4)) throw argument_error("cotangent integral needs s in (0, pi/4]");
    auto f = [q](double r) { return std::pow(1.0 + std::fabs(std::cos(r) / std::sin(r)), q); };
    double integral = quad1d::integrate(f, s, kPi - s, 1e-11);
    double cq = std::pow(2.0, q) * (kPi / 2 + std::pow(kPi / 2, q) / (q - 1.0));
    return {integral, cq * std::pow(s, 1.0 - q)};
}

}  // namespace sascal::sphere
