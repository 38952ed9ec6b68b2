#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "linalg.hpp"

using namespace sascal;
using linalg::Matrix;

namespace {

Matrix diag4(double a, double b, double c, double d) {
    Matrix m(4, 4);
    m.at(0, 0) = a;
    m.at(1, 1) = b;
    m.at(2, 2) = c;
    m.at(3, 3) = d;
    return m;
}

// Block-diagonal complex structure on R^4.
Matrix skew_j4() {
    Matrix j(4, 4);
    j.at(0, 1) = -1.0;
    j.at(1, 0) = 1.0;
    j.at(2, 3) = -1.0;
    j.at(3, 2) = 1.0;
    return j;
}

}  // namespace

TEST_CASE("determinants of pinned matrices") {
    CHECK(linalg::det(diag4(3, 2, 1, 1)) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(linalg::det(Matrix::identity(5)) == doctest::Approx(1.0).epsilon(1e-15));
    Matrix m(2, 2);
    m.at(0, 0) = 1.0;
    m.at(0, 1) = 2.0;
    m.at(1, 0) = 3.0;
    m.at(1, 1) = 4.0;
    CHECK(linalg::det(m) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(linalg::det(skew_j4()) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("matrix product and transpose") {
    RandomStream rs(7);
    Matrix a(3, 4), b(4, 2);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 4; ++j) a.at(i, j) = rs.gauss();
    }
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 2; ++j) b.at(i, j) = rs.gauss();
    }
    Matrix ab = linalg::multiply(a, b);
    Matrix btat = linalg::multiply(linalg::transpose(b), linalg::transpose(a));
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 3; ++j) {
            CHECK(ab.at(j, i) == doctest::Approx(btat.at(i, j)).epsilon(1e-13));
        }
    }
}

TEST_CASE("linear solve") {
    Matrix a(2, 2);
    a.at(0, 0) = 2.0;
    a.at(0, 1) = 1.0;
    a.at(1, 0) = 1.0;
    a.at(1, 1) = 3.0;
    Vec b(2);
    b[0] = 5.0;
    b[1] = 10.0;
    Vec x = linalg::lu_solve(a, b);
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(x[1] == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("singular values and exterior power norms") {
    Matrix m(3, 3);
    m.at(0, 0) = 3.0;
    m.at(1, 1) = 2.0;
    m.at(2, 2) = 1.0;
    auto sv = linalg::singular_values(m);
    REQUIRE(sv.size() == 3);
    CHECK(sv[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(sv[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(sv[2] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(linalg::exterior_power_norm(m, 2) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(linalg::exterior_power_norm(m, 1) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(linalg::exterior_power_norm(m, 3) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("principal minor sums of the complex structure") {
    Matrix j = skew_j4();
    CHECK(linalg::sigma_minors(j, 1) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(linalg::sigma_minors(j, 2) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(linalg::sigma_minors(j, 3) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(linalg::sigma_minors(j, 4) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gram determinant against the minor-square expansion") {
    CHECK(linalg::gram_det(Matrix::identity(4)) == doctest::Approx(16.0).epsilon(1e-13));
    CHECK(linalg::gram_det_minor_sum(Matrix::identity(4)) ==
          doctest::Approx(16.0).epsilon(1e-13));
    RandomStream rs(11);
    for (int it = 0; it < 50; ++it) {
        int r = 2 + (int)(rs.uniform() * 4.0);
        int c = 2 + (int)(rs.uniform() * 5.0);
        Matrix m(r, c);
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < c; ++j) m.at(i, j) = 3.0 * rs.uniform() - 1.5;
        }
        double g = linalg::gram_det(m);
        double s = linalg::gram_det_minor_sum(m);
        CHECK(std::fabs(g - s) <= 1e-10 * std::max(1.0, std::fabs(s)));
    }
}

TEST_CASE("binomial coefficients") {
    CHECK(linalg::binomial(0, 0) == doctest::Approx(1.0));
    CHECK(linalg::binomial(6, 3) == doctest::Approx(20.0));
    CHECK(linalg::binomial(4, 2) == doctest::Approx(6.0));
    CHECK(linalg::binomial(12, 6) == doctest::Approx(924.0));
}

TEST_CASE("rank-one density deficit") {
    Vec u = Vec::basis(4, 0);
    Vec xi = Vec::basis(4, 0);
    auto r = linalg::rank_one_deficit(0.0, u, xi, 4);
    CHECK(r.deficit == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.predicted == doctest::Approx(1.0).epsilon(1e-15));

    RandomStream rs(13);
    for (int it = 0; it < 50; ++it) {
        int d = (it % 2 == 0) ? 4 : 6;
        double lambda = 4.0 * rs.uniform() - 2.0;
        Vec uu(d);
        for (int k = 0; k < d; ++k) uu[k] = rs.gauss();
        Vec xx = rs.unit_sphere(d);
        auto rr = linalg::rank_one_deficit(lambda, uu, xx, d);
        CHECK(std::fabs(rr.deficit - rr.predicted) <=
              1e-10 * std::max(1.0, std::fabs(rr.predicted)));
    }

    CHECK_THROWS_AS(linalg::rank_one_deficit(0.0, u, xi, 5), argument_error);
    Vec long_xi = Vec::basis(4, 0);
    long_xi[0] = 2.0;
    CHECK_THROWS_AS(linalg::rank_one_deficit(0.0, u, long_xi, 4), argument_error);
}

TEST_CASE("principal direction of a symmetric 2x2") {
    auto p = linalg::principal_direction_2x2(3.0, 1.0, 1.0);
    CHECK(p.lambda_max == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-14));
    CHECK(p.u0 >= 0.0);
    CHECK(p.u0 * p.u0 + p.u1 * p.u1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(3.0 * p.u0 + 1.0 * p.u1 == doctest::Approx(p.lambda_max * p.u0).epsilon(1e-12));
    CHECK(1.0 * p.u0 + 1.0 * p.u1 == doctest::Approx(p.lambda_max * p.u1).epsilon(1e-12));
    CHECK_THROWS_AS(linalg::principal_direction_2x2(1.0, 0.0, 1.0), singularity_error);
}

TEST_CASE("per-minor Hadamard bound") {
    RandomStream rs(17);
    for (int it = 0; it < 100; ++it) {
        int r = 3 + (int)(rs.uniform() * 3.0);
        int c = 3 + (int)(rs.uniform() * 3.0);
        Matrix b(r, c);
        for (int i = 0; i < r; ++i) {
            for (int j = 0; j < c; ++j) b.at(i, j) = 2.0 * rs.uniform() - 1.0;
        }
        Vec u(r), v(r);
        for (int k = 0; k < r; ++k) {
            u[k] = 0.5 * rs.gauss();
            v[k] = 0.5 * rs.gauss();
        }
        Vec xi = rs.unit_sphere(c);
        Vec eta = rs.unit_sphere(c);
        CHECK(linalg::minor_bound_checks(b, u, v, xi, eta, 1.0));
    }
}

TEST_CASE("matrix dimension guard") {
    CHECK_THROWS_AS(Matrix(13, 2), argument_error);
    CHECK_THROWS_AS(Matrix(2, -1), argument_error);
}
