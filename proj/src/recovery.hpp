#pragma once

// The recovery sequence on an odd sphere S^n, n = 2m+1 >= 5: unit fields V_k
// that agree with the Hopf field near the poles of the axis through
// p = e_{n+1}, with the radial field of p away from them, and interpolate
// through an explicit repair construction along the tube around the circle
// C = {x_2 = ... = x_n = 0}. Every intermediate quantity is exposed for
// floor scans.

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "common.hpp"
#include "cutoff.hpp"
#include "fields.hpp"

namespace sascal::recovery {

struct RecoveryParams {
    int m = 0;
    int n = 0;
    int d = 0;
    double r_k = 0.0;      // cap-smoothing scale
    double s_k = 0.0;      // cap radius, s_k = r_k^{1/d}
    double eps_k = 0.0;    // tube scale, s_k / 20
    double vartheta = 0.5; // tilt amplitude
    double delta = 0.2;    // supplement mixing weight
    double tau_rho = 0.05; // collinearity cutoff scale, delta / 4
    double disc_threshold = 1e-4;  // discriminant cutoff scale
    double lift_margin = 0.5;      // antipodal-gap cutoff scale for phase lifting
    double cutoff_shift = 0.0;     // lower cutoff thresholds shift down by this fraction of width

    sphere::CutoffSpec cut(double sigma, double tau) const;
    double chi(double sigma, double tau, double t) const;
};

// Validates m >= 2, 0 < r_k, 18 eps_k^2 <= 1/2 and s_k + 2 r_k < pi/4.
RecoveryParams make_params(int m, double r_k);

enum class RegionTag {
    CapPlus,
    CapMinus,
    ShellPlus,
    ShellMinus,
    TubeNearPlus,
    TubeNearMinus,
    TubeFar,
    Exterior,
};

const char* region_name(RegionTag tag);
RegionTag region_classify(const RecoveryParams& params, const Vec& x);

// Every floor-bearing intermediate of one field evaluation. Quantities not
// reached on the taken branch stay NaN.
struct Diagnostics {
    static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

    RegionTag region = RegionTag::Exterior;
    double r_plus = 0.0, r_minus = 0.0, d_C = 0.0;
    double mu_plus = 0.0, mu_minus = 0.0, beta = 0.0, psi = 0.0, nu = 0.0;
    double mu = 0.0, beta_hat = 0.0, zeta = 0.0;
    double norm_Q = kUnset, rho = kUnset, disc = kUnset;
    double theta_cut = kUnset, g_gap = kUnset, eta_lift = kUnset, phase = kUnset;
    double norm_Btilde = kUnset, norm_Wtperp = kUnset, dot_W_Wperp = kUnset;
    double chord_Wsharp = kUnset, denom_S = kUnset, norm_Vtilde = kUnset;
    double align_re = kUnset, align_im = kUnset;  // the aligned square root, where chosen
    int gamma_branch = -1;  // 0 reference, 1 lifted blend, 2 principal fallback
    bool exact_radial = false;
    bool exact_hopf = false;
};

struct FieldValue {
    Vec V;
    Diagnostics diag;
};

// Full evaluation of V_k at x with diagnostics. Throws nonvanishing_error
// only when a normalization genuinely degenerates; the documented floors are
// assessed over region-stratified samples by nonvanishing_scan.
FieldValue evaluate(const RecoveryParams& params, const Vec& x);

// W_k = Q_k / |Q_k| on the tube, Q_k the projection of e_2 off x and H.
Vec tube_field_Wk(const RecoveryParams& params, const Vec& x);

// The phase-aligned supplement B_k, orthogonal to H and to the radial
// transverse direction u; defined where psi > 0 and d_C > 0.
Vec supplement_Bk(const RecoveryParams& params, const Vec& x);

// S_k = (R + vartheta psi_k W_k^sharp) / |...|, defined away from the poles.
Vec tilted_field_Sk(const RecoveryParams& params, const Vec& x);

// V_k as a unit field (finite-difference derivatives).
fields::UnitField recovery_field(const RecoveryParams& params);

// Draws a point from one region (full support; rejection where needed).
Vec sample_region(const RecoveryParams& params, RegionTag tag, RandomStream& rs);

// Minima of all floor-bearing diagnostics over a region-stratified sample.
struct ScanResult {
    long long samples = 0;
    double min_norm_Q = 1e300;
    double min_norm_Btilde = 1e300;
    double min_norm_Wtperp = 1e300;
    double min_dot_W_Wperp = 1e300;
    double min_chord_Wsharp = 1e300;
    double min_denom_S = 1e300;
    double min_norm_Vtilde_offcap = 1e300;
    bool all_floors_hold = false;
};

ScanResult nonvanishing_scan(const RecoveryParams& params, long long per_region, std::uint64_t seed);

// Walks short great-circle paths through the phase-aligned region and counts
// sign flips of the aligned root between consecutive steps (0 when the
// branch choice is continuous).
int branch_flip_count(const RecoveryParams& params, std::uint64_t seed, int paths, int steps);

}  // namespace sascal::recovery
