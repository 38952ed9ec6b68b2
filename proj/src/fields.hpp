#pragma once

// Unit tangent vector fields on S^n as evaluable objects. The canonical
// fields (Hopf, radial) carry analytic covariant derivatives; everything else
// is differentiated by central differences along great circles.

#include <functional>
#include <vector>

#include "common.hpp"
#include "linalg.hpp"

namespace sascal::fields {

struct UnitField {
    int n = 0;                                            // sphere dimension
    std::function<Vec(const Vec&)> eval;                  // x -> V(x), unit tangent
    std::function<Vec(const Vec&, const Vec&)> derive;    // optional analytic (x, X) -> nabla_X V
};

// The adapted frame and first-order data of the section x -> (x, V(x)):
// e_0 = V(x), (e_1..e_d) an orthonormal basis of V^perp inside T_x S^n,
// b_beta = <nabla_V V, e_beta>, M_{beta,alpha} = <nabla_{e_alpha} V, e_beta>.
struct GraphBlocks {
    Vec b;
    linalg::Matrix M;
    std::vector<Vec> frame;  // frame[0] = V, frame[1..d]
};

// H(x) = Jx for the fixed orthogonal complex structure J on R^{2m+2} with
// J e_{n+1} = e_1, J e_1 = -e_{n+1}, J e_{2j} = e_{2j+1}, J e_{2j+1} = -e_{2j}.
UnitField hopf_field(int m);
Vec hopf_complex_structure(const Vec& x);  // plain J x on ambient vectors

// R = grad dist(., p); nabla_R R = 0 and nabla_X R = cot(r) X on R^perp.
UnitField radial_field(const Vec& p);

// Central-difference covariant derivative along the great circle
// t -> cos(t) x + sin(t) X, corrected by the sphere's second fundamental form
// and projected back onto the tangent space.
Vec covariant_derivative(const UnitField& f, const Vec& x, const Vec& X, double step);

// Builds the adapted frame (Gram-Schmidt over projected ambient axes with a
// deterministic permutation fallback, oriented so det[V, e_1..e_d, x] > 0)
// and assembles (b, M), preferring the analytic derivative when present.
GraphBlocks graph_blocks(const UnitField& f, const Vec& x, double step);

// Normalized linear interpolation between unit vectors.
Vec nlerp(const Vec& u, const Vec& v, double t);

// Tangent-projects and normalizes a raw ambient evaluator; throws a
// nonvanishing error naming the point when the projection drops below floor.
UnitField normalized_field(int n, std::function<Vec(const Vec&)> raw, double floor);

}  // namespace sascal::fields
