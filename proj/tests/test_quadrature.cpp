#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "quadrature.hpp"
#include "recovery.hpp"

using namespace sascal;

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kVolS5 = kPi * kPi * kPi;
}

TEST_CASE("uniform sampling is deterministic and on the sphere") {
    auto pts = quadrature::sample_uniform(5, 200, 12345);
    REQUIRE(pts.size() == 200);
    for (const auto& x : pts) {
        CHECK(norm(x) == doctest::Approx(1.0).epsilon(1e-13));
    }
    auto again = quadrature::sample_uniform(5, 200, 12345);
    for (size_t i = 0; i < pts.size(); ++i) {
        CHECK(norm(pts[i] - again[i]) == 0.0);
    }
    auto other = quadrature::sample_uniform(5, 1, 12346);
    CHECK(norm(pts[0] - other[0]) > 1e-3);
}

TEST_CASE("monte carlo integrates constants exactly") {
    auto r = quadrature::integrate_mc([](const Vec&) { return 1.0; }, 5, 50000, 99);
    CHECK(r.samples == 50000);
    CHECK(r.estimate == doctest::Approx(kVolS5).epsilon(1e-12));
    CHECK(r.std_err <= 1e-12);
}

TEST_CASE("monte carlo matches a moment integral") {
    // Integral of x_0^2 over S^5 is vol(S^5)/6.
    auto f = [](const Vec& x) { return x[0] * x[0]; };
    auto r = quadrature::integrate_mc(f, 5, 200000, 424242);
    CHECK(std::fabs(r.estimate - kVolS5 / 6.0) <= 4.0 * r.std_err);
    CHECK(r.std_err > 0.0);
    CHECK(r.std_err < 0.05);
}

TEST_CASE("monte carlo bits do not depend on thread count") {
    auto f = [](const Vec& x) { return std::exp(x[1]) + x[3] * x[3]; };
    auto serial = quadrature::integrate_mc(f, 5, 100000, 777, 1);
    auto parallel = quadrature::integrate_mc(f, 5, 100000, 777, 0);
    CHECK(serial.estimate == parallel.estimate);
    CHECK(serial.std_err == parallel.std_err);
    auto repeat = quadrature::integrate_mc(f, 5, 100000, 777, 3);
    CHECK(serial.estimate == repeat.estimate);
}

TEST_CASE("radial reduction reproduces closed forms") {
    double vol = quadrature::radial_reduction([](double) { return 1.0; }, 5);
    CHECK(vol == doctest::Approx(kVolS5).epsilon(1e-12));
    double mass = quadrature::radial_reduction(
        [](double r) { return 1.0 / std::pow(std::sin(r), 4); }, 5);
    CHECK(mass == doctest::Approx(8.0 * kVolS5 / 3.0).epsilon(1e-10));
}

TEST_CASE("stratified sampling partitions the sphere") {
    auto params = recovery::make_params(2, 1e-2);
    auto one = [](const Vec&) { return 1.0; };
    auto full = quadrature::integrate_stratified(one, params, 3000, 31337);
    CHECK(full.samples > 0);
    CHECK(std::fabs(full.estimate - kVolS5) <= 3.0 * full.std_err + 1e-9);

    auto partial = quadrature::integrate_stratified(one, params, 3000, 31337, 0, false);
    CHECK(partial.estimate < full.estimate);
    double exterior = quadrature::exterior_radial_integral(params, [](double) { return 1.0; });
    CHECK(exterior > 0.0);
    CHECK(std::fabs(partial.estimate + exterior - kVolS5) <=
          3.0 * partial.std_err + 1e-9);

    // Strata report their own names and sample counts.
    CHECK(full.strata.size() == partial.strata.size() + 1);
    for (const auto& s : full.strata) {
        CHECK(!s.name.empty());
        CHECK(s.mc.samples == 3000);
    }
}

TEST_CASE("stratified bits do not depend on thread count") {
    auto params = recovery::make_params(2, 1e-2);
    auto f = [](const Vec& x) { return 1.0 + x[0] * x[1]; };
    auto serial = quadrature::integrate_stratified(f, params, 2000, 555, 1);
    auto parallel = quadrature::integrate_stratified(f, params, 2000, 555, 0);
    CHECK(serial.estimate == parallel.estimate);
    CHECK(serial.std_err == parallel.std_err);
}

TEST_CASE("annulus energies are positive and deterministic") {
    auto a = quadrature::annulus_energies(2, 0.01, 0.02, 20000, 2024, 1);
    CHECK(a.cot_power.estimate > 0.0);
    CHECK(a.sec_power.estimate > 0.0);
    auto b = quadrature::annulus_energies(2, 0.01, 0.02, 20000, 2024, 0);
    CHECK(a.cot_power.estimate == b.cot_power.estimate);
    CHECK(a.sec_power.estimate == b.sec_power.estimate);
}
