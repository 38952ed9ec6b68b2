#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "calibration.hpp"
#include "common.hpp"
#include "fields.hpp"
#include "linalg.hpp"
#include "sphere.hpp"

using namespace sascal;
using calibration::BundlePoint;
using calibration::BundleTangent;
using calibration::DPlane;

namespace {

constexpr double kPi = 3.14159265358979323846;

BundlePoint random_bundle_point(RandomStream& rs, int ambient) {
    Vec x = rs.unit_sphere(ambient);
    Vec v = reject(rs.unit_sphere(ambient), x);
    v = (1.0 / norm(v)) * v;
    return {x, v};
}

// A tangent at y satisfying <xi,x> = 0, <eta,v> = 0, <xi,v> + <x,eta> = 0.
BundleTangent random_bundle_tangent(RandomStream& rs, const BundlePoint& y) {
    int ambient = y.x.size();
    Vec xi = reject(rs.unit_sphere(ambient), y.x);
    Vec eta = reject(rs.unit_sphere(ambient), y.v);
    eta = eta - (dot(y.x, eta) + dot(xi, y.v)) * y.x;
    return {xi, eta};
}

}  // namespace

TEST_CASE("rational coefficient tables") {
    auto c2 = calibration::coefficients(2);
    CHECK(c2.m == 2);
    CHECK(c2.d == 4);
    REQUIRE(c2.num.size() == 3);
    CHECK(c2.num == std::vector<std::int64_t>{1, 1, 1});
    CHECK(c2.den == std::vector<std::int64_t>{1, 3, 1});
    CHECK(c2.c2j[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(c2.c_num == 8);
    CHECK(c2.c_den == 3);
    CHECK(c2.c_value == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
    CHECK(c2.i0 == doctest::Approx(3.0 * kPi / 8.0).epsilon(1e-15));

    auto c3 = calibration::coefficients(3);
    CHECK(c3.d == 6);
    CHECK(c3.num == std::vector<std::int64_t>{1, 1, 1, 1});
    CHECK(c3.den == std::vector<std::int64_t>{1, 5, 5, 1});
    CHECK(c3.c_num == 16);
    CHECK(c3.c_den == 5);
    CHECK(c3.i0 == doctest::Approx(5.0 * kPi / 16.0).epsilon(1e-15));

    CHECK_THROWS_AS(calibration::coefficients(1), argument_error);
    CHECK_THROWS_AS(calibration::coefficients(15), argument_error);
}

TEST_CASE("bundle point and tangent validation") {
    RandomStream rs(61);
    BundlePoint y = random_bundle_point(rs, 6);
    CHECK_NOTHROW(calibration::check_bundle_point(y));
    BundleTangent t = random_bundle_tangent(rs, y);
    CHECK_NOTHROW(calibration::check_bundle_tangent(y, t));

    BundlePoint bad = y;
    bad.v = y.x;
    CHECK_THROWS_AS(calibration::check_bundle_point(bad), argument_error);

    BundleTangent skew = t;
    skew.eta = skew.eta + 0.5 * y.v;
    CHECK_THROWS_AS(calibration::check_bundle_tangent(y, skew), argument_error);
}

TEST_CASE("sasaki frame is orthonormal") {
    RandomStream rs(67);
    for (int it = 0; it < 20; ++it) {
        BundlePoint y = random_bundle_point(rs, 6);
        auto fr = calibration::sasaki_frame(y);
        REQUIRE(fr.B.size() == 4);
        REQUIRE(fr.C.size() == 4);
        REQUIRE(fr.e.size() == 4);

        std::vector<BundleTangent> all;
        all.push_back(fr.A);
        for (const auto& b : fr.B) all.push_back(b);
        for (const auto& c : fr.C) all.push_back(c);
        for (size_t a = 0; a < all.size(); ++a) {
            CHECK_NOTHROW(calibration::check_bundle_tangent(y, all[a]));
            for (size_t b = 0; b <= a; ++b) {
                double want = (a == b) ? 1.0 : 0.0;
                double got = calibration::sasaki_inner(y, all[a], all[b]);
                CHECK(std::fabs(got - want) <= 1e-12);
            }
        }
        for (const auto& e : fr.e) {
            CHECK(std::fabs(dot(e, y.x)) <= 1e-12);
            CHECK(std::fabs(dot(e, y.v)) <= 1e-12);
        }
    }
}

TEST_CASE("theta on diagonal planes and subset agreement") {
    auto coeff = calibration::coefficients(2);
    // Equal-angle diagonal planes evaluate to exactly one.
    for (double t : {0.0, 0.3, 0.7, 1.1, kPi / 2}) {
        DPlane plane{linalg::Matrix(4, 4), linalg::Matrix(4, 4)};
        for (int i = 0; i < 4; ++i) {
            plane.B.at(i, i) = std::cos(t);
            plane.C.at(i, i) = std::sin(t);
        }
        CHECK(std::fabs(calibration::theta_eval(coeff, plane) - 1.0) <= 1e-13);
    }
    // Polynomial evaluation agrees with explicit subset enumeration.
    RandomStream rs(71);
    for (int it = 0; it < 100; ++it) {
        DPlane plane{linalg::Matrix(4, 4), linalg::Matrix(4, 4)};
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                plane.B.at(i, j) = rs.gauss();
                plane.C.at(i, j) = rs.gauss();
            }
        }
        double a = calibration::theta_eval(coeff, plane);
        double b = calibration::theta_subset_sum(coeff, plane);
        CHECK(std::fabs(a - b) <= 1e-10 * std::max(1.0, std::fabs(b)));
    }
}

TEST_CASE("omega on pinned coordinate planes") {
    auto coeff = calibration::coefficients(2);
    // Rows: 0 = A, 1..4 = B, 5..8 = C; columns span the plane.
    auto plane_with = [&](const std::vector<int>& rows) {
        linalg::Matrix coords(9, 5);
        for (int l = 0; l < 5; ++l) coords.at(rows[l], l) = 1.0;
        return calibration::omega_on_coordinates(coeff, coords);
    };
    CHECK(plane_with({0, 1, 2, 3, 4}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(plane_with({0, 5, 6, 7, 8}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(plane_with({0, 1, 2, 7, 8}) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    // Without the Reeb direction the form vanishes.
    CHECK(plane_with({1, 2, 3, 4, 5}) == doctest::Approx(0.0));

    CHECK_THROWS_AS(calibration::omega_on_coordinates(coeff, linalg::Matrix(9, 4)),
                    argument_error);
}

TEST_CASE("omega via frame matches coordinate evaluation") {
    auto coeff = calibration::coefficients(2);
    RandomStream rs(73);
    for (int it = 0; it < 30; ++it) {
        BundlePoint y = random_bundle_point(rs, 6);
        auto fr = calibration::sasaki_frame(y);
        linalg::Matrix coords(9, 5);
        std::vector<BundleTangent> tangents;
        for (int l = 0; l < 5; ++l) {
            Vec xi(6), eta(6);
            for (int r = 0; r < 9; ++r) coords.at(r, l) = rs.gauss();
            auto acc = [&](const BundleTangent& t, double w) {
                xi = xi + w * t.xi;
                eta = eta + w * t.eta;
            };
            acc(fr.A, coords.at(0, l));
            for (int i = 0; i < 4; ++i) acc(fr.B[i], coords.at(1 + i, l));
            for (int i = 0; i < 4; ++i) acc(fr.C[i], coords.at(5 + i, l));
            tangents.push_back({xi, eta});
        }
        double via_frame = calibration::omega_eval(coeff, fr, tangents);
        double via_coords = calibration::omega_on_coordinates(coeff, coords);
        CHECK(std::fabs(via_frame - via_coords) <= 1e-10 * std::max(1.0, std::fabs(via_coords)));
    }
}

TEST_CASE("comass bound on random orthonormal frames") {
    auto coeff = calibration::coefficients(2);
    RandomStream rs(79);
    for (int it = 0; it < 200; ++it) {
        linalg::Matrix coords(9, 5);
        for (int l = 0; l < 5; ++l) {
            Vec col(9);
            for (int r = 0; r < 9; ++r) col[r] = rs.gauss();
            for (int p = 0; p < l; ++p) {
                Vec prev(9);
                for (int r = 0; r < 9; ++r) prev[r] = coords.at(r, p);
                col = col - dot(col, prev) * prev;
            }
            col = (1.0 / norm(col)) * col;
            for (int r = 0; r < 9; ++r) coords.at(r, l) = col[r];
        }
        CHECK(std::fabs(calibration::omega_on_coordinates(coeff, coords)) <= 1.0 + 1e-9);
    }
}

TEST_CASE("hopf field density, mass ratio, and rigidity data") {
    auto coeff = calibration::coefficients(2);
    auto h = fields::hopf_field(2);
    RandomStream rs(83);
    for (int it = 0; it < 25; ++it) {
        Vec x = rs.unit_sphere(6);
        auto gb = fields::graph_blocks(h, x, 1e-5);
        CHECK(calibration::graph_density(gb) == doctest::Approx(4.0).epsilon(1e-9));
        CHECK(calibration::phi_d(coeff, gb.M) == doctest::Approx(8.0 / 3.0).epsilon(1e-9));
        double defect = calibration::calibration_defect(h, x);
        CHECK(defect == doctest::Approx(4.0 - 8.0 / 3.0).epsilon(1e-7));
        auto [nb, nm] = calibration::rigidity_residual(gb);
        CHECK(nb <= 1e-9);
        // The shape operator is a complex structure: distance 2 from scalar matrices.
        CHECK(nm == doctest::Approx(2.0).epsilon(1e-9));
    }
}

TEST_CASE("radial field density and calibration defect") {
    Vec p = Vec::basis(6, 5);
    auto f = fields::radial_field(p);
    RandomStream rs(89);
    for (int it = 0; it < 25; ++it) {
        Vec theta = reject(rs.unit_sphere(6), p);
        theta = (1.0 / norm(theta)) * theta;
        double r = 0.3 + (kPi - 0.6) * rs.uniform();
        Vec x = sphere::polar_point(p, r, theta);
        auto gb = fields::graph_blocks(f, x, 1e-5);
        double want = 1.0 / std::pow(std::sin(r), 4);
        CHECK(calibration::graph_density(gb) == doctest::Approx(want).epsilon(1e-10));
        CHECK(calibration::calibration_defect(f, x) <= 1e-8);
        auto [nb, nm] = calibration::rigidity_residual(gb);
        CHECK(nb <= 1e-9);
        CHECK(nm <= 1e-9);
    }
}

TEST_CASE("density via schur formula equals gram determinant") {
    auto raw = [](const Vec& x) {
        Vec w = fields::hopf_complex_structure(x);
        w[1] += 0.4 * x[0] * x[2];
        w[3] += 0.2 * x[5];
        return w;
    };
    auto f = fields::normalized_field(5, raw, 0.3);
    RandomStream rs(97);
    for (int it = 0; it < 50; ++it) {
        Vec x = rs.unit_sphere(6);
        auto gb = fields::graph_blocks(f, x, 1e-5);
        double a = calibration::graph_density(gb);
        double b = calibration::graph_density_gram(gb);
        CHECK(std::fabs(a - b) <= 1e-10 * std::max(1.0, std::fabs(b)));
    }
}

TEST_CASE("fiber antipodal map preserves the sasaki metric") {
    RandomStream rs(101);
    for (int it = 0; it < 50; ++it) {
        BundlePoint y = random_bundle_point(rs, 6);
        BundleTangent t = random_bundle_tangent(rs, y);
        auto [y2, t2] = calibration::antipodal_pushforward(y, t);
        CHECK(norm(y2.x - y.x) == doctest::Approx(0.0));
        CHECK(norm(y2.v + y.v) == doctest::Approx(0.0));
        CHECK_NOTHROW(calibration::check_bundle_tangent(y2, t2));
        double before = calibration::sasaki_inner(y, t, t);
        double after = calibration::sasaki_inner(y2, t2, t2);
        CHECK(std::fabs(before - after) <= 1e-12 * std::max(1.0, before));
    }
}
