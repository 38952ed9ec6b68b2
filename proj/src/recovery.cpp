#include "recovery.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "sphere.hpp"

namespace sascal::recovery {

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec pole(int n) { return Vec::basis(n + 1, n); }

std::string point_string(const Vec& x) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < x.size(); ++i) {
        if (i) os << ", ";
        os << x[i];
    }
    os << ")";
    return os.str();
}

// Evaluation only refuses to divide by a vanishing norm; the documented
// floors are assessed over region-stratified samples by nonvanishing_scan,
// so a floor violation surfaces as data rather than as an aborted run.
void division_guard(double value, const char* what, const Vec& x) {
    if (value < 1e-12) {
        std::ostringstream os;
        os << what << " = " << value << " vanished at x = " << point_string(x);
        throw nonvanishing_error(os.str());
    }
}

}  // namespace

sphere::CutoffSpec RecoveryParams::cut(double sigma, double tau) const {
    return sphere::CutoffSpec{sigma - cutoff_shift * (tau - sigma), tau};
}

double RecoveryParams::chi(double sigma, double tau, double t) const {
    return sphere::flattened_cutoff(cut(sigma, tau), t);
}

RecoveryParams make_params(int m, double r_k) {
    if (m < 2) throw argument_error("make_params: m must be >= 2");
    if (!(r_k > 0.0)) throw argument_error("make_params: r_k must be positive");
    RecoveryParams p;
    p.m = m;
    p.n = 2 * m + 1;
    p.d = 2 * m;
    if (p.n + 1 > kMaxAmbient) throw argument_error("make_params: ambient dimension too large");
    p.r_k = r_k;
    p.s_k = std::pow(r_k, 1.0 / p.d);
    p.eps_k = p.s_k / 20.0;
    if (!(18.0 * p.eps_k * p.eps_k <= 0.5)) {
        throw argument_error("make_params: tube-width condition 18 eps^2 <= 1/2 fails");
    }
    if (!(p.s_k + 2.0 * p.r_k < kPi / 4.0)) {
        throw argument_error("make_params: cap condition s + 2r < pi/4 fails");
    }
    return p;
}

const char* region_name(RegionTag tag) {
    switch (tag) {
        case RegionTag::CapPlus: return "cap+";
        case RegionTag::CapMinus: return "cap-";
        case RegionTag::ShellPlus: return "shell+";
        case RegionTag::ShellMinus: return "shell-";
        case RegionTag::TubeNearPlus: return "tube-near+";
        case RegionTag::TubeNearMinus: return "tube-near-";
        case RegionTag::TubeFar: return "tube-far";
        case RegionTag::Exterior: return "exterior";
    }
    return "?";
}

namespace {

RegionTag classify_scalars(const RecoveryParams& pr, double r_plus, double r_minus, double d_C) {
    if (r_plus < pr.s_k) return RegionTag::CapPlus;
    if (r_minus < pr.s_k) return RegionTag::CapMinus;
    if (r_plus < pr.s_k + pr.r_k) return RegionTag::ShellPlus;
    if (r_minus < pr.s_k + pr.r_k) return RegionTag::ShellMinus;
    if (d_C < 3.0 * pr.eps_k) {
        if (r_plus <= pr.s_k + 2.0 * pr.r_k) return RegionTag::TubeNearPlus;
        if (r_minus <= pr.s_k + 2.0 * pr.r_k) return RegionTag::TubeNearMinus;
        return RegionTag::TubeFar;
    }
    return RegionTag::Exterior;
}

void fill_cutoffs(const RecoveryParams& pr, const Vec& x, Diagnostics& dg) {
    dg.r_plus = sphere::geodesic_distance(x, pole(pr.n));
    dg.r_minus = kPi - dg.r_plus;
    dg.d_C = sphere::tube_radius(x);
    dg.region = classify_scalars(pr, dg.r_plus, dg.r_minus, dg.d_C);

    double s = pr.s_k, r = pr.r_k, eps = pr.eps_k;
    dg.mu_plus = pr.chi(s, s + r, dg.r_plus);
    dg.mu_minus = pr.chi(s, s + r, dg.r_minus);
    dg.beta = pr.chi(eps, 2.0 * eps, dg.d_C);
    dg.psi = 1.0 - pr.chi(2.0 * eps, 3.0 * eps, dg.d_C);
    double nu_p = 1.0 - pr.chi(s + r, s + 2.0 * r, dg.r_plus);
    double nu_m = 1.0 - pr.chi(s + r, s + 2.0 * r, dg.r_minus);
    dg.nu = 1.0 - (1.0 - nu_p) * (1.0 - nu_m);
    dg.mu = dg.mu_plus * dg.mu_minus * dg.beta;
    dg.beta_hat = dg.nu * dg.beta;
}

struct TubeChain {
    Vec W;
    Vec B;        // zero-dimensional when the point sits on the circle
    Vec W_perp;   // likewise
    Vec W_sharp;
    bool has_supplement = false;
};

// The repaired transverse construction on the tube: W_k from the projected
// axis e_2, the phase-aligned supplement B_k, the supplemented direction
// W_k^perp, and the interpolant W_k^sharp. Fills every floor diagnostic.
TubeChain tube_chain(const RecoveryParams& pr, const Vec& x, const Vec& H, const Vec& R,
                     Diagnostics& dg) {
    int n = pr.n;
    TubeChain ch;

    Vec wT = Vec::basis(n + 1, 1) - x[1] * x;
    Vec Q = wT - dot(wT, H) * H;
    double nq = norm(Q);
    dg.norm_Q = nq;
    division_guard(nq, "tube frame projection |Q|", x);
    ch.W = (1.0 / nq) * Q;

    if (dg.d_C == 0.0) {
        // On the circle itself the transverse radial direction degenerates;
        // beta = 0 there, so the interpolant collapses to W exactly.
        ch.W_sharp = ch.W;
        dg.chord_Wsharp = 1.0;
        return ch;
    }

    Vec R_perp = R - dot(R, H) * H;
    double nrp = norm(R_perp);
    if (!(nrp > 0.0)) {
        throw singularity_error("tube frame: transverse radial direction vanished off the circle");
    }
    Vec u = (1.0 / nrp) * R_perp;

    Vec V_u = ch.W - dot(ch.W, u) * u;
    double rho = norm(V_u);
    dg.rho = rho;
    dg.zeta = pr.chi(pr.tau_rho, 2.0 * pr.tau_rho, rho);

    auto supplement_leg = [&](int idx) {
        Vec eT = Vec::basis(n + 1, idx) - x[idx] * x;
        Vec b0 = eT - dot(eT, H) * H - dot(eT, u) * u;
        if (dg.zeta == 0.0) return b0;
        Vec vhat = (1.0 / rho) * V_u;  // zeta > 0 keeps rho above its cutoff scale
        Vec b1 = b0 - dot(b0, vhat) * vhat;
        return (1.0 - dg.zeta) * b0 + dg.zeta * b1;
    };
    Vec b4 = supplement_leg(3);
    Vec b5 = supplement_leg(4);

    double a_g = dot(b4, b4), d_g = dot(b5, b5), c_g = dot(b4, b5);
    double disc = (a_g - d_g) * (a_g - d_g) + 4.0 * c_g * c_g;
    dg.disc = disc;
    dg.theta_cut = pr.chi(pr.disc_threshold, 2.0 * pr.disc_threshold, disc);

    double q2 = x[0] * x[0] + x[n] * x[n];  // = 1 - d_C^2, positive on the tube
    if (q2 < 1e-12) {
        throw singularity_error("tube frame: phase reference vanished inside the tube");
    }
    double iq = 1.0 / std::sqrt(q2);
    std::complex<double> gref(x[0] * iq, x[n] * iq);

    std::complex<double> gamma = gref;
    dg.gamma_branch = 0;
    if (dg.psi > 0.0 && disc > pr.disc_threshold) {
        double isd = 1.0 / std::sqrt(disc);
        std::complex<double> vsig((a_g - d_g) * isd, 2.0 * c_g * isd);
        double half = 0.5 * std::atan2(vsig.imag(), vsig.real());
        std::complex<double> root(std::cos(half), std::sin(half));

        double sg2 = x[3] * x[3] + x[4] * x[4];
        if (sg2 < 1e-24) {
            dg.gamma_branch = 2;  // alignment reference degenerate: keep the principal branch
        } else {
            double is = 1.0 / std::sqrt(sg2);
            std::complex<double> sigma(x[3] * is, x[4] * is);
            if ((root * std::conj(gref * sigma)).real() < 0.0) root = -root;
            dg.gamma_branch = 1;
        }
        dg.align_re = root.real();
        dg.align_im = root.imag();

        std::complex<double> qk = root * std::conj(gref);
        double g = std::abs(gref + root);
        dg.g_gap = g;
        double eta = 1.0 - pr.chi(pr.lift_margin, 2.0 * pr.lift_margin, g);
        dg.eta_lift = eta;

        double phase = 0.0;
        if (eta < 1.0) {
            std::complex<double> blend =
                (1.0 - dg.theta_cut) * std::complex<double>(1.0, 0.0) + dg.theta_cut * qk;
            division_guard(std::abs(blend), "phase interpolant norm", x);
            phase += (1.0 - eta) * std::atan2(blend.imag(), blend.real());
        }
        if (eta > 0.0) {
            double lift = std::atan2(qk.imag(), qk.real());
            if (lift <= 0.0) lift += 2.0 * kPi;
            phase += eta * dg.theta_cut * lift;
        }
        dg.phase = phase;
        gamma = std::complex<double>(std::cos(phase), std::sin(phase)) * gref;
    }

    Vec Btilde = gamma.real() * b4 + gamma.imag() * b5;
    double nb = norm(Btilde);
    dg.norm_Btilde = nb;
    division_guard(nb, "supplement norm |B~|", x);
    ch.B = (1.0 / nb) * Btilde;

    Vec Wt = V_u + pr.delta * ch.B;
    double nwt = norm(Wt);
    dg.norm_Wtperp = nwt;
    division_guard(nwt, "supplemented transverse norm |W~perp|", x);
    ch.W_perp = (1.0 / nwt) * Wt;
    ch.has_supplement = true;

    dg.dot_W_Wperp = dot(ch.W, ch.W_perp);

    Vec Ns = (1.0 - dg.beta_hat) * ch.W + dg.beta_hat * ch.W_perp;
    double chord = norm(Ns);
    dg.chord_Wsharp = chord;
    division_guard(chord, "interpolant chord", x);
    ch.W_sharp = (1.0 / chord) * Ns;
    return ch;
}

// S_k away from the poles; returns the radial field untouched where psi = 0.
Vec tilted_sk(const RecoveryParams& pr, const Vec& x, Diagnostics& dg) {
    Vec R = sphere::radial_gradient(x, pole(pr.n));
    if (dg.psi == 0.0) {
        dg.denom_S = 1.0;
        return R;
    }
    Vec H = fields::hopf_complex_structure(x);
    TubeChain ch = tube_chain(pr, x, H, R, dg);
    Vec num = R + (pr.vartheta * dg.psi) * ch.W_sharp;
    double dn = norm(num);
    dg.denom_S = dn;
    division_guard(dn, "tilt denominator", x);
    return (1.0 / dn) * num;
}

void check_input(const RecoveryParams& pr, const Vec& x, const char* what) {
    if (x.size() != pr.n + 1) {
        throw argument_error(std::string(what) + ": wrong ambient dimension");
    }
    if (std::fabs(norm(x) - 1.0) > 1e-9) {
        throw argument_error(std::string(what) + ": point is not on the unit sphere");
    }
}

}  // namespace

RegionTag region_classify(const RecoveryParams& pr, const Vec& x) {
    check_input(pr, x, "region_classify");
    double r_plus = sphere::geodesic_distance(x, pole(pr.n));
    return classify_scalars(pr, r_plus, kPi - r_plus, sphere::tube_radius(x));
}

FieldValue evaluate(const RecoveryParams& pr, const Vec& x) {
    check_input(pr, x, "evaluate");
    Diagnostics dg;
    fill_cutoffs(pr, x, dg);

    if (dg.region == RegionTag::CapPlus || dg.region == RegionTag::CapMinus) {
        dg.exact_hopf = true;
        return {fields::hopf_complex_structure(x), dg};
    }

    Vec S = tilted_sk(pr, x, dg);
    if (dg.psi == 0.0 && dg.mu == 1.0) {
        // Off the tube and away from both smoothing balls the field is the
        // radial gradient itself, not a numerical approximation of it.
        dg.exact_radial = true;
        dg.norm_Vtilde = 1.0;
        return {S, dg};
    }

    Vec H = fields::hopf_complex_structure(x);
    Vec Vt = (1.0 - dg.mu) * H + dg.mu * S;
    // Rounding amplified through the supplement normalizations can leave a
    // spurious radial component; scrub it so the value is exactly tangent.
    Vt = Vt - dot(Vt, x) * x;
    double nv = norm(Vt);
    dg.norm_Vtilde = nv;
    division_guard(nv, "blended field norm |V~|", x);
    return {(1.0 / nv) * Vt, dg};
}

Vec tube_field_Wk(const RecoveryParams& pr, const Vec& x) {
    check_input(pr, x, "tube_field_Wk");
    if (sphere::tube_radius(x) >= 3.0 * pr.eps_k) {
        throw argument_error("tube_field_Wk: point lies outside the tube");
    }
    Vec H = fields::hopf_complex_structure(x);
    Vec wT = Vec::basis(pr.n + 1, 1) - x[1] * x;
    Vec Q = wT - dot(wT, H) * H;
    double nq = norm(Q);
    division_guard(nq, "tube frame projection |Q|", x);
    return (1.0 / nq) * Q;
}

Vec supplement_Bk(const RecoveryParams& pr, const Vec& x) {
    check_input(pr, x, "supplement_Bk");
    Diagnostics dg;
    fill_cutoffs(pr, x, dg);
    if (!(dg.psi > 0.0) || !(dg.d_C > 0.0)) {
        throw argument_error("supplement_Bk: defined only where psi > 0 and off the circle");
    }
    Vec H = fields::hopf_complex_structure(x);
    Vec R = sphere::radial_gradient(x, pole(pr.n));
    TubeChain ch = tube_chain(pr, x, H, R, dg);
    if (!ch.has_supplement) {
        throw argument_error("supplement_Bk: defined only where psi > 0 and off the circle");
    }
    return ch.B;
}

Vec tilted_field_Sk(const RecoveryParams& pr, const Vec& x) {
    check_input(pr, x, "tilted_field_Sk");
    Diagnostics dg;
    fill_cutoffs(pr, x, dg);
    return tilted_sk(pr, x, dg);
}

fields::UnitField recovery_field(const RecoveryParams& pr) {
    fields::UnitField f;
    f.n = pr.n;
    f.eval = [pr](const Vec& x) { return evaluate(pr, x).V; };
    return f;
}

Vec sample_region(const RecoveryParams& pr, RegionTag tag, RandomStream& rs) {
    int n = pr.n;
    Vec p = pole(n);
    double s = pr.s_k, r = pr.r_k, eps = pr.eps_k;

    // Polar draw about +-p with the exact sin^{n-1} radial density.
    auto polar_about = [&](double r_lo, double r_hi, bool plus) {
        double rr;
        double top = std::sin(r_hi);
        do {
            rr = r_lo + (r_hi - r_lo) * rs.uniform();
        } while (std::pow(std::sin(rr) / top, n - 1) < rs.uniform());
        Vec theta(n + 1);
        {
            Vec g = rs.unit_sphere(n);
            for (int i = 0; i < n; ++i) theta[i] = g[i];
        }
        Vec base = plus ? p : -p;
        return std::cos(rr) * base + std::sin(rr) * theta;
    };

    // Joint tube draw: transverse radius with density ~ c^{d-1}, a uniform
    // direction on the transverse sphere, and an angle along the circle.
    auto tube_point = [&](double c, double alpha) {
        Vec z_small = rs.unit_sphere(n - 1);
        Vec x(n + 1);
        double ring = std::sqrt(1.0 - c * c);
        x[0] = ring * std::sin(alpha);
        x[n] = ring * std::cos(alpha);
        for (int i = 1; i < n; ++i) x[i] = c * z_small[i - 1];
        return x;
    };

    switch (tag) {
        case RegionTag::CapPlus: return polar_about(0.0, s, true);
        case RegionTag::CapMinus: return polar_about(0.0, s, false);
        case RegionTag::ShellPlus: return polar_about(s, s + r, true);
        case RegionTag::ShellMinus: return polar_about(s, s + r, false);
        case RegionTag::TubeNearPlus:
        case RegionTag::TubeNearMinus: {
            double c = 3.0 * eps * std::pow(rs.uniform(), 1.0 / pr.d);
            double band = s + r + r * rs.uniform();
            double target = (tag == RegionTag::TubeNearPlus) ? band : kPi - band;
            double ca = std::cos(target) / std::sqrt(1.0 - c * c);
            double alpha = std::acos(std::min(1.0, std::max(-1.0, ca)));
            if (rs.uniform() < 0.5) alpha = -alpha;
            return tube_point(c, alpha);
        }
        case RegionTag::TubeFar: {
            for (;;) {
                double c = 3.0 * eps * std::pow(rs.uniform(), 1.0 / pr.d);
                double alpha = kPi * (2.0 * rs.uniform() - 1.0);
                Vec x = tube_point(c, alpha);
                double r_plus = sphere::geodesic_distance(x, p);
                if (r_plus > s + 2.0 * r && kPi - r_plus > s + 2.0 * r) return x;
            }
        }
        case RegionTag::Exterior: {
            for (;;) {
                Vec x = rs.unit_sphere(n + 1);
                if (region_classify(pr, x) == RegionTag::Exterior) return x;
            }
        }
    }
    throw argument_error("sample_region: unknown region tag");
}

ScanResult nonvanishing_scan(const RecoveryParams& pr, long long per_region, std::uint64_t seed) {
    if (per_region <= 0) throw argument_error("nonvanishing_scan: per_region must be positive");
    ScanResult out;
    RegionTag tags[8] = {RegionTag::CapPlus,      RegionTag::CapMinus,     RegionTag::ShellPlus,
                         RegionTag::ShellMinus,   RegionTag::TubeNearPlus, RegionTag::TubeNearMinus,
                         RegionTag::TubeFar,      RegionTag::Exterior};
    auto fold = [](double& acc, double v) {
        if (!std::isnan(v) && v < acc) acc = v;
    };
    for (int t = 0; t < 8; ++t) {
        RandomStream rs(mix_seed(seed, 100 + t, 0));
        for (long long i = 0; i < per_region; ++i) {
            Vec x = sample_region(pr, tags[t], rs);
            FieldValue fv = evaluate(pr, x);
            const Diagnostics& dg = fv.diag;
            ++out.samples;
            fold(out.min_norm_Q, dg.norm_Q);
            fold(out.min_norm_Btilde, dg.norm_Btilde);
            fold(out.min_norm_Wtperp, dg.norm_Wtperp);
            fold(out.min_dot_W_Wperp, dg.dot_W_Wperp);
            fold(out.min_chord_Wsharp, dg.chord_Wsharp);
            fold(out.min_denom_S, dg.denom_S);
            if (!dg.exact_hopf) fold(out.min_norm_Vtilde_offcap, dg.norm_Vtilde);
        }
    }
    out.all_floors_hold = out.min_norm_Q >= 0.5 && out.min_norm_Btilde >= 0.25 &&
                          out.min_norm_Wtperp >= 0.5 * pr.delta &&
                          out.min_dot_W_Wperp >= -pr.delta / 3.0 - 1e-9 &&
                          out.min_chord_Wsharp >= std::sqrt((1.0 - pr.delta / 3.0) / 2.0) - 1e-9 &&
                          out.min_denom_S >= 1.0 - pr.vartheta - 1e-12 &&
                          out.min_norm_Vtilde_offcap >= 0.0249;
    return out;
}

int branch_flip_count(const RecoveryParams& pr, std::uint64_t seed, int paths, int steps) {
    if (paths <= 0 || steps <= 1) throw argument_error("branch_flip_count: need paths > 0, steps > 1");
    RandomStream rs(mix_seed(seed, 777, 0));
    int flips = 0;
    for (int pth = 0; pth < paths; ++pth) {
        Vec x0 = sample_region(pr, RegionTag::TubeFar, rs);
        Vec T = rs.unit_sphere(pr.n + 1);
        T = T - dot(T, x0) * x0;
        double nt = norm(T);
        if (nt < 1e-6) continue;
        T = (1.0 / nt) * T;
        double step = (0.5 * pr.eps_k) / steps;  // stay well inside the tube

        bool have_prev = false;
        std::complex<double> prev;
        for (int i = 0; i < steps; ++i) {
            double t = i * step;
            Vec x = std::cos(t) * x0 + std::sin(t) * T;
            x = (1.0 / norm(x)) * x;
            FieldValue fv = evaluate(pr, x);
            if (fv.diag.gamma_branch == 1) {
                std::complex<double> root(fv.diag.align_re, fv.diag.align_im);
                if (have_prev && (root * std::conj(prev)).real() < 0.0) ++flips;
                prev = root;
                have_prev = true;
            } else {
                have_prev = false;
            }
        }
    }
    return flips;
}

}  // namespace sascal::recovery
