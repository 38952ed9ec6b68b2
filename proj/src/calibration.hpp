#pragma once

// The Sasaki calibration on the unit tangent bundle of an odd sphere:
// exact coefficient data, orthonormal Sasaki frames, evaluation of the
// (d+1)-form on frames and planes, and graph densities of unit fields.

#include <cstdint>
#include <utility>
#include <vector>

#include "common.hpp"
#include "fields.hpp"
#include "linalg.hpp"

namespace sascal::calibration {

// Exact rational coefficients C_{2j} = binom(m, j) / binom(2m, 2j) together
// with the normalizing constant c = 4^m / binom(2m, m) and the fiber volume
// I0 = pi * binom(2m, m) / 4^m.
struct Coefficients {
    int m = 0;
    int d = 0;
    std::vector<std::int64_t> num;  // numerator of C_{2j}, j = 0..m
    std::vector<std::int64_t> den;  // denominator (reduced, positive)
    std::vector<double> c2j;        // C_{2j} as doubles, what evaluation uses
    std::int64_t c_num = 0;         // c as a reduced fraction
    std::int64_t c_den = 0;
    double c_value = 0.0;
    double i0 = 0.0;
};

Coefficients coefficients(int m);

// A point of the unit tangent bundle and a tangent vector there, in the
// horizontal/vertical splitting (xi, eta) with <xi,x> = 0, <eta,v> = 0,
// <xi,v> + <x,eta> = 0.
struct BundlePoint {
    Vec x;
    Vec v;
};

struct BundleTangent {
    Vec xi;
    Vec eta;
};

// Orthonormal Sasaki frame A = (v, -x), B_i = (e_i, 0), C_i = (0, e_i) for an
// oriented orthonormal basis (e_i) of {x, v}^perp.
struct SasakiFrame {
    BundlePoint base;
    BundleTangent A;
    std::vector<BundleTangent> B;
    std::vector<BundleTangent> C;
    std::vector<Vec> e;
};

void check_bundle_point(const BundlePoint& y);
void check_bundle_tangent(const BundlePoint& y, const BundleTangent& t, double tol = 1e-8);

// Sasaki inner product of two tangents at y via the connection map
// K(xi, eta) = eta + <xi, v> x.
double sasaki_inner(const BundlePoint& y, const BundleTangent& a, const BundleTangent& b);

SasakiFrame sasaki_frame(const BundlePoint& y);

// A d-plane given by its B- and C-coordinate matrices in a Sasaki frame:
// column l of (B, C) holds the B_i- and C_i-coordinates of the l-th spanning
// vector. Theta is a sum of mixed-row determinants weighted by C_{2j}.
struct DPlane {
    linalg::Matrix B;
    linalg::Matrix C;
};

double theta_eval(const Coefficients& coeff, const DPlane& plane);

// Direct subset-sum of mixed-row determinants, the slow cross-check for the
// polynomial extraction inside theta_eval.
double theta_subset_sum(const Coefficients& coeff, const DPlane& plane);

// omega = a wedge Theta evaluated on d+1 Sasaki coordinate columns. The
// coordinate matrix has 2d+1 rows: row 0 the A-coordinate, rows 1..d the
// B-coordinates, rows d+1..2d the C-coordinates.
double omega_on_coordinates(const Coefficients& coeff, const linalg::Matrix& coords);

double omega_eval(const Coefficients& coeff, const SasakiFrame& frame,
                  const std::vector<BundleTangent>& vectors);

// Phi_d(M) = sum_j C_{2j} sigma_{2j}(M), the calibration's value on the
// un-normalized graph tuple of a field with shape operator matrix M.
double phi_d(const Coefficients& coeff, const linalg::Matrix& M);

// Graph density sqrt(det G) in block form: dens = sqrt(det(I + M^T M)) *
// sqrt(1 + b^T (I + M M^T)^{-1} b).
double graph_density(const fields::GraphBlocks& blocks);

// Same quantity from the full (d+1)x(d+1) Gram determinant, kept separate as
// a numerical cross-check.
double graph_density_gram(const fields::GraphBlocks& blocks);

// dens(V)(x) - Phi_d(M(x)) >= 0, zero exactly on calibrated graphs.
double calibration_defect(const fields::UnitField& f, const Vec& x, double step = 1e-5);

// (|b|, Frobenius distance of M from its trace part): both vanish exactly on
// calibrated graphs (b = 0, M = lambda I).
std::pair<double, double> rigidity_residual(const fields::GraphBlocks& blocks);

// The fiberwise antipodal map (x, v) -> (x, -v) with differential
// (xi, eta) -> (xi, -eta); the calibration is invariant under it.
std::pair<BundlePoint, BundleTangent> antipodal_pushforward(const BundlePoint& y,
                                                            const BundleTangent& t);

}  // namespace sascal::calibration
