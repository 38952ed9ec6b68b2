#include "calibration.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "sphere.hpp"

namespace sascal::calibration {

namespace {

std::int64_t binom64(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    __int128 acc = 1;
    for (int i = 1; i <= k; ++i) {
        acc = acc * (n - k + i) / i;
    }
    if (acc > INT64_MAX) throw argument_error("binom64: overflow");
    return (std::int64_t)acc;
}

// Monomial coefficients of p(t) = det(C + t B), extracted from values at
// Chebyshev nodes by a long double Vandermonde solve.
std::vector<double> det_pencil_coefficients(const linalg::Matrix& B, const linalg::Matrix& C) {
    int d = B.rows();
    int npts = d + 1;
    std::vector<long double> t(npts), p(npts);
    for (int i = 0; i < npts; ++i) {
        t[i] = std::cos((long double)M_PI * (2.0L * i + 1.0L) / (2.0L * npts));
        linalg::Matrix A(d, d);
        for (int r = 0; r < d; ++r) {
            for (int c = 0; c < d; ++c) {
                A.at(r, c) = C.at(r, c) + (double)t[i] * B.at(r, c);
            }
        }
        p[i] = linalg::det(A);
    }

    std::vector<std::vector<long double>> V(npts, std::vector<long double>(npts + 1));
    for (int i = 0; i < npts; ++i) {
        long double pw = 1.0L;
        for (int j = 0; j < npts; ++j) {
            V[i][j] = pw;
            pw *= t[i];
        }
        V[i][npts] = p[i];
    }
    for (int col = 0; col < npts; ++col) {
        int piv = col;
        for (int r = col + 1; r < npts; ++r) {
            if (std::fabs((double)V[r][col]) > std::fabs((double)V[piv][col])) piv = r;
        }
        std::swap(V[col], V[piv]);
        if (V[col][col] == 0.0L) throw singularity_error("det_pencil_coefficients: node collision");
        for (int r = 0; r < npts; ++r) {
            if (r == col) continue;
            long double f = V[r][col] / V[col][col];
            for (int c = col; c <= npts; ++c) V[r][c] -= f * V[col][c];
        }
    }
    std::vector<double> coeffs(npts);
    for (int j = 0; j < npts; ++j) coeffs[j] = (double)(V[j][npts] / V[j][j]);
    return coeffs;
}

void check_square_pair(const Coefficients& coeff, const DPlane& plane, const char* what) {
    int d = coeff.d;
    if (plane.B.rows() != d || plane.B.cols() != d || plane.C.rows() != d || plane.C.cols() != d) {
        std::ostringstream os;
        os << what << ": plane matrices must be " << d << "x" << d;
        throw argument_error(os.str());
    }
}

}  // namespace

Coefficients coefficients(int m) {
    if (m < 2) throw argument_error("coefficients: m must be >= 2");
    if (m > 14) throw argument_error("coefficients: m too large for exact integer arithmetic");
    Coefficients out;
    out.m = m;
    out.d = 2 * m;
    std::int64_t vandermonde = 0;
    for (int j = 0; j <= m; ++j) {
        std::int64_t nu = binom64(m, j);
        std::int64_t de = binom64(2 * m, 2 * j);
        std::int64_t g = std::gcd(nu, de);
        out.num.push_back(nu / g);
        out.den.push_back(de / g);
        out.c2j.push_back((double)(nu / g) / (double)(de / g));
        vandermonde += binom64(2 * j, j) * binom64(2 * m - 2 * j, m - j);
    }
    std::int64_t four_m = 1;
    for (int j = 0; j < m; ++j) four_m *= 4;
    if (vandermonde != four_m) {
        throw tolerance_error("coefficients: convolution identity failed, coefficient table corrupt");
    }
    std::int64_t central = binom64(2 * m, m);
    std::int64_t g = std::gcd(four_m, central);
    out.c_num = four_m / g;
    out.c_den = central / g;
    out.c_value = (double)out.c_num / (double)out.c_den;
    out.i0 = M_PI * (double)central / (double)four_m;
    return out;
}

void check_bundle_point(const BundlePoint& y) {
    if (y.x.size() != y.v.size()) throw argument_error("bundle point: dimension mismatch");
    if (y.x.size() < 3) throw argument_error("bundle point: ambient dimension too small");
    if (std::fabs(norm(y.x) - 1.0) > 1e-9 || std::fabs(norm(y.v) - 1.0) > 1e-9 ||
        std::fabs(dot(y.x, y.v)) > 1e-9) {
        throw argument_error("bundle point: (x, v) is not an orthonormal pair");
    }
}

void check_bundle_tangent(const BundlePoint& y, const BundleTangent& t, double tol) {
    if (t.xi.size() != y.x.size() || t.eta.size() != y.x.size()) {
        throw argument_error("bundle tangent: dimension mismatch");
    }
    double a = std::fabs(dot(t.xi, y.x));
    double b = std::fabs(dot(t.eta, y.v));
    double c = std::fabs(dot(t.xi, y.v) + dot(y.x, t.eta));
    if (a > tol || b > tol || c > tol) {
        throw argument_error("bundle tangent: tangency relations violated");
    }
}

double sasaki_inner(const BundlePoint& y, const BundleTangent& a, const BundleTangent& b) {
    Vec Ka = a.eta + dot(a.xi, y.v) * y.x;
    Vec Kb = b.eta + dot(b.xi, y.v) * y.x;
    return dot(a.xi, b.xi) + dot(Ka, Kb);
}

SasakiFrame sasaki_frame(const BundlePoint& y) {
    check_bundle_point(y);
    int dim = y.x.size();
    int n = dim - 1;
    int d = n - 1;

    std::vector<Vec> e;
    for (int offset = 0; offset < dim && (int)e.size() < d; ++offset) {
        e.clear();
        for (int k = 0; k < dim && (int)e.size() < d; ++k) {
            Vec g = Vec::basis(dim, (k + offset) % dim);
            g = g - dot(g, y.x) * y.x;
            g = g - dot(g, y.v) * y.v;
            for (const Vec& u : e) g = g - dot(g, u) * u;
            double ng = norm(g);
            if (ng > 1e-6) e.push_back((1.0 / ng) * g);
        }
    }
    if ((int)e.size() != d) {
        throw singularity_error("sasaki_frame: could not complete an orthonormal frame");
    }

    linalg::Matrix A(dim, dim);
    for (int i = 0; i < dim; ++i) {
        A.at(i, 0) = y.v[i];
        for (int c = 1; c <= d; ++c) A.at(i, c) = e[c - 1][i];
        A.at(i, dim - 1) = y.x[i];
    }
    if (linalg::det(A) < 0.0) e[d - 1] = -e[d - 1];

    SasakiFrame frame;
    frame.base = y;
    frame.A = BundleTangent{y.v, -y.x};
    Vec zero(dim);
    for (int i = 0; i < d; ++i) {
        frame.B.push_back(BundleTangent{e[i], zero});
        frame.C.push_back(BundleTangent{zero, e[i]});
    }
    frame.e = e;
    return frame;
}

double theta_eval(const Coefficients& coeff, const DPlane& plane) {
    check_square_pair(coeff, plane, "theta_eval");
    std::vector<double> tau = det_pencil_coefficients(plane.B, plane.C);
    double acc = 0.0;
    for (int j = 0; j <= coeff.m; ++j) acc += coeff.c2j[j] * tau[2 * j];
    return acc;
}

double theta_subset_sum(const Coefficients& coeff, const DPlane& plane) {
    check_square_pair(coeff, plane, "theta_subset_sum");
    int d = coeff.d;
    if (d > 8) throw argument_error("theta_subset_sum: dimension too large for subset enumeration");
    double acc = 0.0;
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        int k = __builtin_popcount(mask);
        if (k % 2 != 0) continue;
        linalg::Matrix mixed(d, d);
        for (int r = 0; r < d; ++r) {
            const linalg::Matrix& src = (mask >> r) & 1u ? plane.B : plane.C;
            for (int c = 0; c < d; ++c) mixed.at(r, c) = src.at(r, c);
        }
        acc += coeff.c2j[k / 2] * linalg::det(mixed);
    }
    return acc;
}

double omega_on_coordinates(const Coefficients& coeff, const linalg::Matrix& coords) {
    int d = coeff.d;
    if (coords.rows() != 2 * d + 1 || coords.cols() != d + 1) {
        throw argument_error("omega_on_coordinates: coordinate matrix must be (2d+1) x (d+1)");
    }
    double acc = 0.0;
    double sign = 1.0;
    for (int j = 0; j <= d; ++j, sign = -sign) {
        double a_j = coords.at(0, j);
        if (a_j != 0.0) {
            DPlane rest{linalg::Matrix(d, d), linalg::Matrix(d, d)};
            int cc = 0;
            for (int l = 0; l <= d; ++l) {
                if (l == j) continue;
                for (int i = 0; i < d; ++i) {
                    rest.B.at(i, cc) = coords.at(1 + i, l);
                    rest.C.at(i, cc) = coords.at(1 + d + i, l);
                }
                ++cc;
            }
            acc += sign * a_j * theta_eval(coeff, rest);
        }
    }
    return acc;
}

double omega_eval(const Coefficients& coeff, const SasakiFrame& frame,
                  const std::vector<BundleTangent>& vectors) {
    int d = coeff.d;
    if ((int)frame.e.size() != d) {
        throw argument_error("omega_eval: frame dimension does not match coefficients");
    }
    if ((int)vectors.size() != d + 1) {
        throw argument_error("omega_eval: expected d+1 input vectors");
    }
    for (const BundleTangent& t : vectors) check_bundle_tangent(frame.base, t);

    linalg::Matrix coords(2 * d + 1, d + 1);
    for (int j = 0; j <= d; ++j) {
        coords.at(0, j) = sasaki_inner(frame.base, vectors[j], frame.A);
        for (int i = 0; i < d; ++i) {
            coords.at(1 + i, j) = sasaki_inner(frame.base, vectors[j], frame.B[i]);
            coords.at(1 + d + i, j) = sasaki_inner(frame.base, vectors[j], frame.C[i]);
        }
    }
    return omega_on_coordinates(coeff, coords);
}

double phi_d(const Coefficients& coeff, const linalg::Matrix& M) {
    if (M.rows() != coeff.d || M.cols() != coeff.d) {
        throw argument_error("phi_d: matrix must be d x d");
    }
    double acc = 0.0;
    for (int j = 0; j <= coeff.m; ++j) acc += coeff.c2j[j] * linalg::sigma_minors(M, 2 * j);
    return acc;
}

double graph_density(const fields::GraphBlocks& blocks) {
    int d = blocks.M.rows();
    const linalg::Matrix& M = blocks.M;
    linalg::Matrix MtM = linalg::multiply(linalg::transpose(M), M);
    linalg::Matrix MMt = linalg::multiply(M, linalg::transpose(M));
    linalg::Matrix G1 = linalg::add(linalg::Matrix::identity(d), MtM);
    linalg::Matrix G2 = linalg::add(linalg::Matrix::identity(d), MMt);
    double dens_d = std::sqrt(linalg::det(G1));
    Vec y = linalg::lu_solve(G2, blocks.b);
    double t = dot(blocks.b, y);
    if (t < -1e-12) throw tolerance_error("graph_density: negative Schur term");
    return dens_d * std::sqrt(1.0 + std::max(0.0, t));
}

double graph_density_gram(const fields::GraphBlocks& blocks) {
    int d = blocks.M.rows();
    linalg::Matrix G(d + 1, d + 1);
    G.at(0, 0) = 1.0 + dot(blocks.b, blocks.b);
    for (int a = 0; a < d; ++a) {
        double s = 0.0;
        for (int b = 0; b < d; ++b) s += blocks.b[b] * blocks.M.at(b, a);
        G.at(0, a + 1) = s;
        G.at(a + 1, 0) = s;
    }
    for (int a = 0; a < d; ++a) {
        for (int c = 0; c < d; ++c) {
            double s = (a == c) ? 1.0 : 0.0;
            for (int b = 0; b < d; ++b) s += blocks.M.at(b, a) * blocks.M.at(b, c);
            G.at(a + 1, c + 1) = s;
        }
    }
    double g = linalg::det(G);
    if (g < 0.0) throw tolerance_error("graph_density_gram: negative Gram determinant");
    return std::sqrt(g);
}

double calibration_defect(const fields::UnitField& f, const Vec& x, double step) {
    int n = f.n;
    if (n < 5 || n % 2 == 0) {
        throw argument_error("calibration_defect: sphere dimension must be odd and >= 5");
    }
    Coefficients coeff = coefficients((n - 1) / 2);
    fields::GraphBlocks blocks = fields::graph_blocks(f, x, step);
    return graph_density(blocks) - phi_d(coeff, blocks.M);
}

std::pair<double, double> rigidity_residual(const fields::GraphBlocks& blocks) {
    int d = blocks.M.rows();
    double trace = 0.0;
    for (int i = 0; i < d; ++i) trace += blocks.M.at(i, i);
    double lambda = trace / d;
    double off = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            double e = blocks.M.at(i, j) - (i == j ? lambda : 0.0);
            off += e * e;
        }
    }
    return {norm(blocks.b), std::sqrt(off)};
}

std::pair<BundlePoint, BundleTangent> antipodal_pushforward(const BundlePoint& y,
                                                            const BundleTangent& t) {
    check_bundle_point(y);
    check_bundle_tangent(y, t);
    return {BundlePoint{y.x, -y.v}, BundleTangent{t.xi, -t.eta}};
}

}  // namespace sascal::calibration
