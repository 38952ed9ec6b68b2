#pragma once

// Explicit geometry of the round sphere S^n sitting in ambient (n+1)-space:
// distances, the radial gradient field, polar and join coordinates, the
// distance proxy to the antipodal great circle, sphere volumes, and the
// elementary cotangent integral bound.

#include <utility>

#include "common.hpp"
#include "cutoff.hpp"

namespace sascal::sphere {

// Points and tangent vectors are plain ambient vectors; these helpers assert
// the defining relations where construction cannot guarantee them.
void check_point(const Vec& x, double tol = 1e-12);
void check_tangent(const Vec& x, const Vec& t, double tol = 1e-10);

double geodesic_distance(const Vec& x, const Vec& p);

// R = grad dist(., p) = (cos(r) x - p) / sin(r); unit and tangent at x.
Vec radial_gradient(const Vec& x, const Vec& p);

// Geodesic polar chart about p: F(r, theta) = cos(r) p + sin(r) theta.
Vec polar_point(const Vec& p, double r, const Vec& theta);
// Inverse: recovers (r, theta) of x about p; throws near the poles.
std::pair<double, Vec> polar_coordinates(const Vec& p, const Vec& x);

// Join chart: F(rho, z, theta) = cos(rho) z + sin(rho) theta with z a unit
// vector in the span of e_3..e_{n+1} and theta a unit vector in span{e_1,e_2}.
Vec join_point(double rho, const Vec& z, const Vec& theta);
// cos of the distance from F(rho, z, theta) to a pole p in S_perp at distance
// t from z: cos r = cos rho cos t.
double cos_r_identity(double rho, double t);

// d_C(x) = sqrt(x_2^2 + ... + x_n^2): vanishes exactly on the great circle
// through e_1 and e_{n+1}, and equals sin(dist(x, C)).
double tube_radius(const Vec& x);

double sphere_volume(int k);

struct CotIntegral {
    double integral;  // numeric value of the cotangent integral over [s, pi - s]
    double bound;     // C_q s^{1-q} with C_q = 2^q (pi/2 + (pi/2)^q / (q-1))
};
CotIntegral cot_integral_bound(double q, double s);

}  // namespace sascal::sphere
