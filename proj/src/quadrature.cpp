#include "quadrature.hpp"

#include <cmath>

#include "parallel.hpp"
#include "quad1d.hpp"
#include "sphere.hpp"

namespace sascal::quadrature {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr long long kChunk = 4096;

struct Accum {
    long double sum = 0.0L;
    long double sum_sq = 0.0L;
};

// Chunked mean estimator: draw() must produce one weighted sample value per
// call using only the supplied stream. The reduction runs in index order.
MCResult chunked_mean(long long N, std::uint64_t seed, std::uint64_t stream_id, int threads,
                      double scale, const std::function<double(RandomStream&)>& draw) {
    if (N <= 0) throw argument_error("monte carlo: sample count must be positive");
    long long nchunks = (N + kChunk - 1) / kChunk;
    std::vector<Accum> acc(nchunks);
    parallel_chunks(
        nchunks,
        [&](long long ci) {
            RandomStream rs(mix_seed(seed, stream_id, (std::uint64_t)ci));
            long long lo = ci * kChunk;
            long long hi = std::min<long long>(N, lo + kChunk);
            Accum a;
            for (long long i = lo; i < hi; ++i) {
                double v = draw(rs);
                a.sum += v;
                a.sum_sq += (long double)v * v;
            }
            acc[ci] = a;
        },
        threads);

    long double S = 0.0L, Q = 0.0L;
    for (const Accum& a : acc) {
        S += a.sum;
        Q += a.sum_sq;
    }
    long double mean = S / N;
    long double var = Q / N - mean * mean;
    if (var < 0.0L) var = 0.0L;
    MCResult out;
    out.estimate = scale * (double)mean;
    out.std_err = scale * std::sqrt((double)(var / N));
    out.samples = N;
    return out;
}

}  // namespace

std::vector<Vec> sample_uniform(int n, int count, std::uint64_t seed) {
    if (n < 1 || count < 0) throw argument_error("sample_uniform: bad arguments");
    std::vector<Vec> pts;
    pts.reserve(count);
    RandomStream rs(mix_seed(seed, 5, 0));
    for (int i = 0; i < count; ++i) pts.push_back(rs.unit_sphere(n + 1));
    return pts;
}

MCResult integrate_mc(const std::function<double(const Vec&)>& f, int n, long long N,
                      std::uint64_t seed, int threads) {
    if (n < 1) throw argument_error("integrate_mc: n must be >= 1");
    double vol = sphere::sphere_volume(n);
    return chunked_mean(N, seed, 11, threads, vol,
                        [&](RandomStream& rs) { return f(rs.unit_sphere(n + 1)); });
}

namespace {

// One weighted proposal for a single recovery stratum: returns w such that
// E[w f] equals the integral of f over the stratum. Weight zero marks a
// rejected proposal; f is never evaluated there.
double stratum_sample(const recovery::RecoveryParams& pr, recovery::RegionTag tag,
                      RandomStream& rs, const std::function<double(const Vec&)>& f) {
    using recovery::RegionTag;
    int n = pr.n;
    double s = pr.s_k, r = pr.r_k, eps = pr.eps_k;
    Vec p = Vec::basis(n + 1, n);
    double vol_ring = sphere::sphere_volume(n - 1);
    double vol_cross = sphere::sphere_volume(n - 2);

    auto polar_weighted = [&](double r_lo, double width, bool plus) {
        double rr = r_lo + width * rs.uniform();
        Vec theta(n + 1);
        Vec g = rs.unit_sphere(n);
        for (int i = 0; i < n; ++i) theta[i] = g[i];
        Vec base = plus ? p : -p;
        Vec x = std::cos(rr) * base + std::sin(rr) * theta;
        double w = vol_ring * width * std::pow(std::sin(rr), n - 1);
        return w * f(x);
    };

    auto tube_point = [&](double c, double alpha) {
        Vec z_small = rs.unit_sphere(n - 1);
        Vec x(n + 1);
        double ring = std::sqrt(1.0 - c * c);
        x[0] = ring * std::sin(alpha);
        x[n] = ring * std::cos(alpha);
        for (int i = 1; i < n; ++i) x[i] = c * z_small[i - 1];
        return x;
    };
    double tube_prefactor = vol_cross * std::pow(3.0 * eps, pr.d) / pr.d;

    switch (tag) {
        case RegionTag::CapPlus: return polar_weighted(0.0, s, true);
        case RegionTag::CapMinus: return polar_weighted(0.0, s, false);
        case RegionTag::ShellPlus: return polar_weighted(s, r, true);
        case RegionTag::ShellMinus: return polar_weighted(s, r, false);
        case RegionTag::TubeNearPlus:
        case RegionTag::TubeNearMinus: {
            double c = 3.0 * eps * std::pow(rs.uniform(), 1.0 / pr.d);
            double band = s + r + r * rs.uniform();
            double target = (tag == RegionTag::TubeNearPlus) ? band : kPi - band;
            double ring = std::sqrt(1.0 - c * c);
            double ca = std::min(1.0, std::max(-1.0, std::cos(target) / ring));
            double alpha = std::acos(ca);
            double sin_alpha = std::sin(alpha);
            if (rs.uniform() < 0.5) alpha = -alpha;
            Vec x = tube_point(c, alpha);
            double w = tube_prefactor * 2.0 * r * std::sin(band) / (ring * sin_alpha);
            return w * f(x);
        }
        case RegionTag::TubeFar: {
            double c = 3.0 * eps * std::pow(rs.uniform(), 1.0 / pr.d);
            double alpha = kPi * (2.0 * rs.uniform() - 1.0);
            Vec x = tube_point(c, alpha);
            double r_plus = sphere::geodesic_distance(x, p);
            if (r_plus <= s + 2.0 * r || kPi - r_plus <= s + 2.0 * r) return 0.0;
            return tube_prefactor * 2.0 * kPi * f(x);
        }
        case RegionTag::Exterior: {
            Vec x = rs.unit_sphere(n + 1);
            if (recovery::region_classify(pr, x) != RegionTag::Exterior) return 0.0;
            return sphere::sphere_volume(n) * f(x);
        }
    }
    throw argument_error("stratum_sample: unknown region tag");
}

}  // namespace

StratifiedResult integrate_stratified(const std::function<double(const Vec&)>& f,
                                      const recovery::RecoveryParams& pr, long long per_stratum,
                                      std::uint64_t seed, int threads, bool include_exterior) {
    using recovery::RegionTag;
    RegionTag tags[8] = {RegionTag::CapPlus,      RegionTag::CapMinus,     RegionTag::ShellPlus,
                         RegionTag::ShellMinus,   RegionTag::TubeNearPlus, RegionTag::TubeNearMinus,
                         RegionTag::TubeFar,      RegionTag::Exterior};
    StratifiedResult out;
    double var_sum = 0.0;
    for (int t = 0; t < 8; ++t) {
        if (tags[t] == RegionTag::Exterior && !include_exterior) continue;
        MCResult mc = chunked_mean(per_stratum, seed, 20 + (std::uint64_t)t, threads, 1.0,
                                   [&](RandomStream& rs) {
                                       return stratum_sample(pr, tags[t], rs, f);
                                   });
        out.strata.push_back(StratumResult{recovery::region_name(tags[t]), mc});
        out.estimate += mc.estimate;
        var_sum += mc.std_err * mc.std_err;
        out.samples += mc.samples;
    }
    out.std_err = std::sqrt(var_sum);
    return out;
}

double radial_reduction(const std::function<double(double)>& f, int n) {
    if (n < 2) throw argument_error("radial_reduction: n must be >= 2");
    double inner = quad1d::integrate(
        [&](double r) { return f(r) * std::pow(std::sin(r), n - 1); }, 0.0, kPi, 1e-12, 1e-250);
    return sphere::sphere_volume(n - 1) * inner;
}

double exterior_radial_integral(const recovery::RecoveryParams& pr,
                                const std::function<double(double)>& f) {
    int n = pr.n, d = pr.d;
    double edge = pr.s_k + pr.r_k;
    double band = sphere::sphere_volume(n - 1) *
                  quad1d::integrate([&](double r) { return f(r) * std::pow(std::sin(r), n - 1); },
                                    edge, kPi - edge, 1e-12, 1e-250);

    // Tube portion in transverse-radius coordinates: the volume element is
    // c^{d-1} dc d(alpha) dvol on the cross sphere, and the band restriction
    // keeps alpha away from the poles of the circle.
    double cos_edge = std::cos(edge);
    auto inner = [&](double c) {
        double ring = std::sqrt(1.0 - c * c);
        double alpha0 = std::acos(std::min(1.0, cos_edge / ring));
        double along = quad1d::integrate(
            [&](double alpha) { return f(std::acos(ring * std::cos(alpha))); }, alpha0,
            kPi - alpha0, 1e-10, 1e-250);
        return 2.0 * along * std::pow(c, d - 1);
    };
    double tube = sphere::sphere_volume(n - 2) *
                  quad1d::integrate(inner, 0.0, 3.0 * pr.eps_k, 1e-9, 1e-250);
    return band - tube;
}

AnnulusResult annulus_energies(int m, double rho_lo, double rho_hi, long long N,
                               std::uint64_t seed, int threads) {
    if (m < 2) throw argument_error("annulus_energies: m must be >= 2");
    if (!(0.0 < rho_lo && rho_lo < rho_hi && rho_hi < 0.5)) {
        throw argument_error("annulus_energies: need 0 < rho_lo < rho_hi < 1/2");
    }
    int d = 2 * m;
    double scale = 2.0 * kPi * sphere::sphere_volume(d - 2);
    double rho_span = rho_hi * rho_hi - rho_lo * rho_lo;

    // One draw: rho with density ~ rho on the annulus, then the polar angle t
    // toward the near pole with a truncated Cauchy of scale rho on [0, pi/2].
    // Both integrands are symmetric under r -> pi - r, hence the factor 2.
    auto draw = [&](RandomStream& rs, bool cot_power) {
        double rho = std::sqrt(rho_lo * rho_lo + rho_span * rs.uniform());
        double w_rho = std::pow(std::cos(rho), d - 1) * std::sin(rho) * rho_span / (2.0 * rho);
        double amax = std::atan((kPi / 2.0) / rho);
        double t = rho * std::tan(amax * rs.uniform());
        double w_t = (t * t + rho * rho) * amax / rho;
        double r = std::acos(std::cos(rho) * std::cos(t));
        double cot = std::cos(r) / std::sin(r);
        double val = cot_power ? std::pow(std::fabs(cot), d) : std::pow(1.0 + cot * cot, m - 1);
        return 2.0 * w_rho * w_t * std::pow(std::sin(t), d - 2) * val;
    };

    AnnulusResult out;
    out.cot_power = chunked_mean(N, seed, 31, threads, scale,
                                 [&](RandomStream& rs) { return draw(rs, true); });
    out.sec_power = chunked_mean(N, seed, 32, threads, scale,
                                 [&](RandomStream& rs) { return draw(rs, false); });
    return out;
}

}  // namespace sascal::quadrature
