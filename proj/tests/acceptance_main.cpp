// Acceptance gate: ten timed criteria covering the exact coefficient tables,
// the radial mass identities, calibrated lower bounds, the comass bound,
// algebraic property tests, radial-field geometry, recovery-field floors,
// the recovery excess trend, annulus scaling, and fault detection. Prints
// one line per criterion; the exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "calibration.hpp"
#include "common.hpp"
#include "experiments.hpp"
#include "fields.hpp"
#include "linalg.hpp"
#include "quad1d.hpp"
#include "quadrature.hpp"
#include "recovery.hpp"
#include "sphere.hpp"

using namespace sascal;
using experiments::CheckRow;
using experiments::Options;
using experiments::Report;
using fields::GraphBlocks;
using fields::UnitField;
using linalg::Matrix;

namespace {

constexpr double kPi = 3.14159265358979323846;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, pattern);
    vsnprintf(buf, sizeof(buf), pattern, ap);
    va_end(ap);
    return std::string(buf);
}

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = (int)x.size();
    for (int i = 0; i < n; ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

const CheckRow* find_row(const Report& rep, const std::string& name, double r_k = -1.0) {
    for (const auto& row : rep.rows) {
        if (row.stratum == name && (r_k < 0.0 || row.r_k == r_k)) return &row;
    }
    return nullptr;
}

int count_failures(const Report& rep, std::string* example) {
    int bad = 0;
    for (const auto& row : rep.rows) {
        if (!row.pass) {
            if (bad == 0 && example) *example = row.stratum;
            ++bad;
        }
    }
    return bad;
}

struct Criterion {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& why) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += why;
        }
    }
};

// 1: exact rational mass constants and the Beta-integral identity.
Criterion criterion_1() {
    Criterion c;
    auto c2 = calibration::coefficients(2);
    auto c3 = calibration::coefficients(3);
    c.require(c2.c_num == 8 && c2.c_den == 3, "mass constant for m=2 is not 8/3");
    c.require(c3.c_num == 16 && c3.c_den == 5, "mass constant for m=3 is not 16/5");
    c.require(c2.num == std::vector<std::int64_t>{1, 1, 1} &&
                  c2.den == std::vector<std::int64_t>{1, 3, 1},
              "coefficient table for m=2 is wrong");
    double worst = 0.0;
    for (const auto& co : {c2, c3}) {
        int d = co.d;
        for (int j = 0; j <= co.m; ++j) {
            auto f = [&](double t) {
                return std::pow(std::cos(t), d - 2 * j) * std::pow(std::sin(t), 2 * j);
            };
            double moment = 2.0 * quad1d::integrate(f, 0.0, kPi / 2.0, 1e-13, 1e-300) / co.i0;
            worst = std::max(worst, std::fabs(moment - co.c2j[j]));
        }
    }
    c.require(worst <= 1e-12, fmt("beta moment residual %.3e > 1e-12", worst));
    if (c.pass) c.detail = fmt("c(2;1)=8/3, c(3;1)=16/5, beta residual %.1e", worst);
    return c;
}

// 2: radial mass by 1d reduction and by plain Monte Carlo.
Criterion criterion_2(const Options& opt) {
    Criterion c;
    double target = 8.0 * kPi * kPi * kPi / 3.0;
    double mass = quadrature::radial_reduction(
        [](double r) { return 1.0 / std::pow(std::sin(r), 4); }, 5);
    double rel = std::fabs(mass - target) / target;
    c.require(rel <= 1e-10, fmt("radial reduction off by %.3e", rel));

    UnitField f = fields::radial_field(Vec::basis(6, 5));
    auto dens = [&](const Vec& x) {
        return calibration::graph_density(fields::graph_blocks(f, x, 1e-5));
    };
    auto mc = quadrature::integrate_mc(dens, 5, 1000000, opt.seed, opt.threads);
    double z = std::fabs(mc.estimate - target) / mc.std_err;
    c.require(z <= 3.0, fmt("monte carlo z-score %.2f > 3", z));
    if (c.pass) c.detail = fmt("reduction rel %.1e, mc z=%.2f", rel, z);
    return c;
}

// 3: calibrated mass lower bound for three competitor fields.
Criterion criterion_3(const Options& base) {
    Criterion c;
    Options opt = base;
    opt.experiment = "lowerbound";
    opt.samples = 1000000;
    opt.field_names = {"hopf", "rotated", "perturbed"};
    Report rep = experiments::cmd_lowerbound(opt);
    std::string example;
    int bad = count_failures(rep, &example);
    c.require(bad == 0, fmt("%d rows failed, first: %s", bad, example.c_str()));
    if (c.pass) c.detail = fmt("%zu rows pass at N=1e6", rep.rows.size());
    return c;
}

// 4: comass bound on random frames, diagonal planes, antipodal symmetry.
Criterion criterion_4(const Options& base) {
    Criterion c;
    Options opt = base;
    opt.experiment = "comass";
    opt.samples = 100000;
    Report rep = experiments::cmd_comass(opt);
    std::string example;
    int bad = count_failures(rep, &example);
    c.require(bad == 0, fmt("%d rows failed, first: %s", bad, example.c_str()));
    const CheckRow* mo = find_row(rep, "max_omega");
    c.require(mo != nullptr, "max_omega row missing");
    if (c.pass) c.detail = fmt("max |omega| = %.12f over 1e5 frames", mo->estimate);
    return c;
}

// 5: algebraic identity property tests, one thousand instances each.
Criterion criterion_5(const Options& opt) {
    Criterion c;
    {
        RandomStream rs(mix_seed(opt.seed, 901, 0));
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            int d = (i % 2 == 0) ? 4 : 6;
            double lambda = 4.0 * rs.uniform() - 2.0;
            Vec u(d);
            for (int k = 0; k < d; ++k) u[k] = rs.gauss();
            u = (0.3 + 1.7 * rs.uniform()) * (1.0 / norm(u)) * u;
            Vec xi = rs.unit_sphere(d);
            auto r = linalg::rank_one_deficit(lambda, u, xi, d);
            worst = std::max(worst, std::fabs(r.deficit - r.predicted) /
                                        std::max(1.0, std::fabs(r.predicted)));
        }
        c.require(worst <= 1e-10, fmt("rank-one identity residual %.3e", worst));
    }
    {
        RandomStream rs(mix_seed(opt.seed, 902, 0));
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            int r = 2 + (int)(rs.uniform() * 4.0);
            int cc = 2 + (int)(rs.uniform() * 5.0);
            Matrix a(r, cc);
            for (int p = 0; p < r; ++p) {
                for (int q = 0; q < cc; ++q) a.at(p, q) = 3.0 * rs.uniform() - 1.5;
            }
            double g = linalg::gram_det(a);
            double s = linalg::gram_det_minor_sum(a);
            worst = std::max(worst, std::fabs(g - s) / std::max(1.0, std::fabs(s)));
        }
        c.require(worst <= 1e-10, fmt("gram vs minor-sum residual %.3e", worst));
    }
    {
        RandomStream rs(mix_seed(opt.seed, 903, 0));
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            GraphBlocks gb;
            gb.b = Vec(4);
            for (int k = 0; k < 4; ++k) gb.b[k] = 2.0 * rs.uniform() - 1.0;
            gb.M = Matrix(4, 4);
            for (int p = 0; p < 4; ++p) {
                for (int q = 0; q < 4; ++q) gb.M.at(p, q) = 3.0 * rs.uniform() - 1.5;
            }
            double a = calibration::graph_density(gb);
            double b = calibration::graph_density_gram(gb);
            worst = std::max(worst, std::fabs(a - b) / std::max(1.0, std::fabs(b)));
        }
        c.require(worst <= 1e-10, fmt("schur vs gram density residual %.3e", worst));
    }
    {
        RandomStream rs(mix_seed(opt.seed, 904, 0));
        double worst = 0.0;
        for (int d : {4, 6}) {
            auto coeff = calibration::coefficients(d / 2);
            for (int i = 0; i < 500; ++i) {
                calibration::DPlane plane{Matrix(d, d), Matrix(d, d)};
                for (int p = 0; p < d; ++p) {
                    for (int q = 0; q < d; ++q) {
                        plane.B.at(p, q) = rs.gauss();
                        plane.C.at(p, q) = rs.gauss();
                    }
                }
                double te = calibration::theta_eval(coeff, plane);
                double ts = calibration::theta_subset_sum(coeff, plane);
                worst = std::max(worst, std::fabs(te - ts) / std::max(1.0, std::fabs(ts)));
            }
        }
        c.require(worst <= 1e-10, fmt("theta subset-sum residual %.3e", worst));
    }
    {
        RandomStream rs(mix_seed(opt.seed, 905, 0));
        int ok = 0;
        for (int i = 0; i < 1000; ++i) {
            int r = 3 + (int)(rs.uniform() * 3.0);
            int cc = 3 + (int)(rs.uniform() * 3.0);
            Matrix b(r, cc);
            for (int p = 0; p < r; ++p) {
                for (int q = 0; q < cc; ++q) b.at(p, q) = 3.0 * rs.uniform() - 1.5;
            }
            Vec u(r), v(r);
            for (int k = 0; k < r; ++k) {
                u[k] = rs.gauss();
                v[k] = rs.gauss();
            }
            u = (1.0 / std::max(1.0, norm(u))) * u;
            v = (i % 3 == 0) ? Vec(r) : (1.0 / std::max(1.0, norm(v))) * v;
            Vec exi = rs.unit_sphere(cc), eeta = rs.unit_sphere(cc);
            if (linalg::minor_bound_checks(b, u, v, exi, eeta, 1.5)) ++ok;
        }
        c.require(ok == 1000, fmt("minor bound failed on %d of 1000 instances", 1000 - ok));
    }
    if (c.pass) c.detail = "five identity families, 1000 instances each, rel 1e-10";
    return c;
}

// 6: radial field geometry under finite differences.
Criterion criterion_6(const Options& opt) {
    Criterion c;
    Vec pole = Vec::basis(6, 5);
    UnitField exact = fields::radial_field(pole);
    UnitField fd{exact.n, exact.eval, nullptr};

    RandomStream rs(mix_seed(opt.seed, 906, 0));
    double worst_defect = 0.0, worst_rig = 0.0, worst_center = 0.0;
    for (int i = 0; i < 10000; ++i) {
        Vec theta = reject(rs.unit_sphere(6), pole);
        theta = (1.0 / norm(theta)) * theta;
        double r = 0.3 + (kPi - 0.6) * rs.uniform();
        Vec x = sphere::polar_point(pole, r, theta);
        worst_defect = std::max(worst_defect, std::fabs(calibration::calibration_defect(fd, x)));
        GraphBlocks gb = fields::graph_blocks(fd, x, 1e-5);
        auto [nb, nm] = calibration::rigidity_residual(gb);
        worst_rig = std::max(worst_rig, std::max(nb, nm));
        Vec center = std::cos(r) * x - std::sin(r) * exact.eval(x);
        worst_center = std::max(worst_center, norm(center - pole));
    }
    c.require(worst_defect <= 1e-6, fmt("defect %.3e > 1e-6", worst_defect));
    c.require(worst_rig <= 1e-6, fmt("rigidity residual %.3e > 1e-6", worst_rig));
    c.require(worst_center <= 1e-9, fmt("center recovery %.3e > 1e-9", worst_center));

    double worst_ric = 0.0;
    for (int i = 0; i < 1000; ++i) {
        Vec theta = reject(rs.unit_sphere(6), pole);
        theta = (1.0 / norm(theta)) * theta;
        double r = 0.4 + (kPi - 0.8) * rs.uniform();
        auto lam = [&](double t) {
            Vec x = sphere::polar_point(pole, t, theta);
            GraphBlocks gb = fields::graph_blocks(fd, x, 3e-6);
            double tr = 0.0;
            for (int k = 0; k < 4; ++k) tr += gb.M.at(k, k);
            return tr / 4.0;
        };
        double h = 3e-4;
        double lp = (lam(r + h) - lam(r - h)) / (2.0 * h);
        double l = lam(r);
        worst_ric = std::max(worst_ric, std::fabs(lp + l * l + 1.0));
    }
    c.require(worst_ric <= 1e-5, fmt("riccati residual %.3e > 1e-5", worst_ric));
    if (c.pass) {
        c.detail = fmt("defect %.1e, rigidity %.1e, riccati %.1e, center %.1e",
                       worst_defect, worst_rig, worst_ric, worst_center);
    }
    return c;
}

// 7: nonvanishing floors of the recovery construction.
Criterion criterion_7(const Options& opt) {
    Criterion c;
    for (double rk : {1e-2, 1e-3}) {
        auto pr = recovery::make_params(2, rk);
        auto sc = recovery::nonvanishing_scan(pr, 1250, opt.seed);
        std::string tag = fmt("r_k=%g: ", rk);
        c.require(sc.min_norm_Q >= 0.5, tag + fmt("|Q| min %.4f < 0.5", sc.min_norm_Q));
        c.require(sc.min_norm_Btilde >= 0.25,
                  tag + fmt("supplement min %.4f < 0.25", sc.min_norm_Btilde));
        c.require(sc.min_norm_Wtperp >= 0.1,
                  tag + fmt("transverse part min %.4f < 0.1", sc.min_norm_Wtperp));
        c.require(sc.min_dot_W_Wperp >= -1.0 / 15.0,
                  tag + fmt("alignment min %.4f < -1/15", sc.min_dot_W_Wperp));
        c.require(sc.min_norm_Vtilde_offcap >= 0.0249,
                  tag + fmt("blend norm min %.4f < 0.0249", sc.min_norm_Vtilde_offcap));
        c.require(sc.all_floors_hold, tag + "scan reports a floor violation");
    }
    if (c.pass) c.detail = "all floors hold on 1e4 stratified samples per radius";
    return c;
}

// 8: recovery excess is positive, decreasing, with bounded s_k ratio spread.
Criterion criterion_8(const Options& base) {
    Criterion c;
    Options opt = base;
    opt.experiment = "recovery";
    opt.samples = 100000;
    Report rep = experiments::cmd_recovery(opt);
    std::string example;
    int bad = count_failures(rep, &example);
    c.require(bad == 0, fmt("%d rows failed, first: %s", bad, example.c_str()));
    if (c.pass) {
        std::string ex;
        for (const auto& row : rep.rows) {
            if (row.stratum == "excess") ex += fmt("%s%.2e", ex.empty() ? "" : ", ", row.estimate);
        }
        c.detail = "excess " + ex;
    }
    return c;
}

// 9: annulus energies scale with the expected log-log slopes.
Criterion criterion_9(const Options& opt) {
    Criterion c;
    std::vector<double> rks = {0.02, 0.035566, 0.063246, 0.112468, 0.2};
    std::vector<double> e1, e2;
    for (double rk : rks) {
        auto ae = quadrature::annulus_energies(2, rk / 2.0, rk, 200000, opt.seed, opt.threads);
        e1.push_back(ae.cot_power.estimate);
        e2.push_back(ae.sec_power.estimate);
    }
    double s1 = loglog_slope(rks, e1);
    double s2 = loglog_slope(rks, e2);
    c.require(std::fabs(s1 - 1.0) <= 0.3, fmt("first energy slope %.3f not in 1 +- 0.3", s1));
    c.require(std::fabs(s2 - 2.0) <= 0.3, fmt("second energy slope %.3f not in 2 +- 0.3", s2));
    if (c.pass) c.detail = fmt("slopes %.3f and %.3f over a decade", s1, s2);
    return c;
}

// 10: every injected fault is detected by at least one failing check row.
Criterion criterion_10(const Options& base) {
    Criterion c;
    std::string caught;
    for (const char* fault : {"c2", "vartheta", "cutoff"}) {
        Options opt = base;
        opt.experiment = "verify";
        opt.samples = 1000;
        opt.fault = fault;
        Report rep = experiments::cmd_verify(opt);
        std::string example;
        int bad = count_failures(rep, &example);
        c.require(bad > 0, fmt("fault '%s' was not detected", fault));
        if (bad > 0) {
            caught += fmt("%s%s->%s(%d)", caught.empty() ? "" : ", ", fault,
                          example.c_str(), bad);
        }
    }
    if (c.pass) c.detail = caught;
    return c;
}

}  // namespace

int main() {
    Options opt;  // defaults: seed 20240817, hardware threads
    const double budget[10] = {1.0, 30.0, 120.0, 60.0, 30.0, 60.0, 120.0, 900.0, 120.0, 60.0};
    std::function<Criterion()> runners[10] = {
        [&] { return criterion_1(); },   [&] { return criterion_2(opt); },
        [&] { return criterion_3(opt); }, [&] { return criterion_4(opt); },
        [&] { return criterion_5(opt); }, [&] { return criterion_6(opt); },
        [&] { return criterion_7(opt); }, [&] { return criterion_8(opt); },
        [&] { return criterion_9(opt); }, [&] { return criterion_10(opt); },
    };

    int failures = 0;
    for (int i = 0; i < 10; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        Criterion c;
        try {
            c = runners[i]();
        } catch (const std::exception& e) {
            c.pass = false;
            c.detail = std::string("exception: ") + e.what();
        }
        double elapsed = seconds_since(t0);
        if (elapsed > budget[i]) {
            c.pass = false;
            c.detail += fmt("%sover %.0fs budget", c.detail.empty() ? "" : "; ", budget[i]);
        }
        if (!c.pass) ++failures;
        std::printf("criterion %d: %s (%s) [%.2fs]\n", i + 1, c.pass ? "PASS" : "FAIL",
                    c.detail.c_str(), elapsed);
        std::fflush(stdout);
    }
    return failures;
}
