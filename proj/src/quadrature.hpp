#pragma once

// Monte Carlo and deterministic integration over spheres: plain uniform
// sampling, region-stratified sampling adapted to the recovery construction
// (exact proposal densities per stratum), radial reductions, and the tube
// annulus energies used for scaling checks. All Monte Carlo paths draw fixed
// 4096-sample chunks with per-chunk seeds, so results are bit-identical for
// any thread count.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "common.hpp"
#include "recovery.hpp"

namespace sascal::quadrature {

struct MCResult {
    double estimate = 0.0;
    double std_err = 0.0;
    long long samples = 0;
};

// Deterministic stream of uniform points on S^n.
std::vector<Vec> sample_uniform(int n, int count, std::uint64_t seed);

// Integral of f over S^n by uniform Monte Carlo. threads = 0 picks the
// hardware thread count, 1 forces serial execution (same result bits).
MCResult integrate_mc(const std::function<double(const Vec&)>& f, int n, long long N,
                      std::uint64_t seed, int threads = 0);

struct StratumResult {
    std::string name;
    MCResult mc;
};

struct StratifiedResult {
    double estimate = 0.0;
    double std_err = 0.0;
    long long samples = 0;
    std::vector<StratumResult> strata;
};

// Integral of f over S^n split across the recovery regions, each with its own
// exact-density proposal. per_stratum counts proposals per region. When
// include_exterior is false the exterior stratum is left out (callers replace
// it with the deterministic radial integral below).
StratifiedResult integrate_stratified(const std::function<double(const Vec&)>& f,
                                      const recovery::RecoveryParams& params,
                                      long long per_stratum, std::uint64_t seed,
                                      int threads = 0, bool include_exterior = true);

// vol(S^{n-1}) * Integral_0^pi f(r) sin^{n-1}(r) dr by adaptive quadrature.
double radial_reduction(const std::function<double(double)>& f, int n);

// Integral of a radial integrand f(r) over the exterior region, computed as
// the full radial band minus the tube portion (both deterministic).
double exterior_radial_integral(const recovery::RecoveryParams& params,
                                const std::function<double(double)>& f);

// The two tube-annulus energies over {rho_lo <= rho <= rho_hi} around the
// great subsphere: Integral |cot r|^d and Integral (1 + cot^2 r)^{m-1}.
// The polar angle toward the near pole is importance-sampled with a
// truncated Cauchy profile of scale rho, which keeps weights bounded.
struct AnnulusResult {
    MCResult cot_power;
    MCResult sec_power;
};
AnnulusResult annulus_energies(int m, double rho_lo, double rho_hi, long long N,
                               std::uint64_t seed, int threads = 0);

}  // namespace sascal::quadrature
