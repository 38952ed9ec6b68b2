#include "linalg.hpp"

#include <algorithm>
#include <cmath>

namespace sascal::linalg {

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols(), m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) t.at(j, i) = m.at(i, j);
    return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw argument_error("matrix product size mismatch");
    Matrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            double aik = a.at(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c.at(i, j) += aik * b.at(k, j);
        }
    return c;
}

Matrix add(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw argument_error("matrix sum size mismatch");
    Matrix c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j) + b.at(i, j);
    return c;
}

Matrix scale(double c, const Matrix& m) {
    Matrix s(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) s.at(i, j) = c * m.at(i, j);
    return s;
}

namespace {

// LU factorization with partial pivoting, in place; returns the pivot sign
// and leaves U on/above the diagonal, unit-L multipliers below.
double lu_factor(Matrix& a, std::array<int, kMaxDim>& piv) {
    int n = a.rows();
    double sign = 1.0;
    for (int i = 0; i < n; ++i) piv[i] = i;
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(a.at(i, k)) > std::fabs(a.at(p, k))) p = i;
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a.at(p, j), a.at(k, j));
            std::swap(piv[p], piv[k]);
            sign = -sign;
        }
        double pivot = a.at(k, k);
        if (pivot == 0.0) return 0.0;  // singular; determinant is exactly zero
        for (int i = k + 1; i < n; ++i) {
            double l = a.at(i, k) / pivot;
            a.at(i, k) = l;
            for (int j = k + 1; j < n; ++j) a.at(i, j) -= l * a.at(k, j);
        }
    }
    return sign;
}

}  // namespace

double det(const Matrix& m) {
    if (m.rows() != m.cols()) throw argument_error("determinant of a non-square matrix");
    int n = m.rows();
    if (n == 0) return 1.0;
    if (n == 1) return m.at(0, 0);
    if (n == 2) return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    if (n == 3)
        return m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1)) -
               m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) - m.at(1, 2) * m.at(2, 0)) +
               m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0));
    Matrix a = m;
    std::array<int, kMaxDim> piv;
    double sign = lu_factor(a, piv);
    if (sign == 0.0) return 0.0;
    double d = sign;
    for (int i = 0; i < n; ++i) d *= a.at(i, i);
    return d;
}

Vec lu_solve(const Matrix& a0, const Vec& b) {
    if (a0.rows() != a0.cols() || a0.rows() != b.size()) throw argument_error("lu_solve size mismatch");
    int n = a0.rows();
    Matrix a = a0;
    std::array<int, kMaxDim> piv;
    if (lu_factor(a, piv) == 0.0) throw singularity_error("lu_solve: singular matrix");
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = b[piv[i]];
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= a.at(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= a.at(i, j) * x[j];
        x[i] /= a.at(i, i);
    }
    return x;
}

namespace {

// Cyclic Jacobi sweeps on a symmetric matrix; returns eigenvalues, descending.
std::vector<double> jacobi_eigenvalues(Matrix g) {
    int n = g.rows();
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += g.at(p, q) * g.at(p, q);
        if (off < 1e-28 * (1.0 + std::fabs(g.at(0, 0)))) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                double gpq = g.at(p, q);
                if (std::fabs(gpq) < 1e-300) continue;
                double tau = (g.at(q, q) - g.at(p, p)) / (2.0 * gpq);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                for (int i = 0; i < n; ++i) {
                    double gip = g.at(i, p), giq = g.at(i, q);
                    g.at(i, p) = c * gip - s * giq;
                    g.at(i, q) = s * gip + c * giq;
                }
                for (int i = 0; i < n; ++i) {
                    double gpi = g.at(p, i), gqi = g.at(q, i);
                    g.at(p, i) = c * gpi - s * gqi;
                    g.at(q, i) = s * gpi + c * gqi;
                }
            }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = g.at(i, i);
    std::sort(ev.begin(), ev.end(), std::greater<double>());
    return ev;
}

}  // namespace

std::vector<double> singular_values(const Matrix& m) {
    // Work with the smaller Gram matrix; eigenvalues are squared singular values.
    bool wide = m.cols() > m.rows();
    Matrix g = wide ? multiply(m, transpose(m)) : multiply(transpose(m), m);
    std::vector<double> ev = jacobi_eigenvalues(g);
    for (double& v : ev) v = std::sqrt(std::max(v, 0.0));
    return ev;
}

double exterior_power_norm(const Matrix& m, int j) {
    if (j < 0) throw argument_error("exterior power order must be nonnegative");
    if (j == 0) return 1.0;
    int rank_cap = std::min(m.rows(), m.cols());
    if (j > rank_cap) return 0.0;
    std::vector<double> sv = singular_values(m);
    double prod = 1.0;
    for (int i = 0; i < j; ++i) prod *= sv[i];
    return prod;
}

double sigma_minors(const Matrix& m, int k) {
    if (m.rows() != m.cols()) throw argument_error("principal minors need a square matrix");
    int d = m.rows();
    if (d > 8) throw argument_error("principal-minor enumeration capped at d = 8");
    if (k < 0 || k > d) throw argument_error("minor size out of range");
    if (k == 0) return 1.0;
    double sum = 0.0;
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        if (__builtin_popcount(mask) != k) continue;
        Matrix sub(k, k);
        int ii = 0;
        for (int i = 0; i < d; ++i) {
            if (!(mask & (1u << i))) continue;
            int jj = 0;
            for (int j = 0; j < d; ++j) {
                if (!(mask & (1u << j))) continue;
                sub.at(ii, jj) = m.at(i, j);
                ++jj;
            }
            ++ii;
        }
        sum += det(sub);
    }
    return sum;
}

double gram_det(const Matrix& m) {
    Matrix g = multiply(transpose(m), m);
    for (int i = 0; i < g.rows(); ++i) g.at(i, i) += 1.0;
    return det(g);
}

double gram_det_minor_sum(const Matrix& m) {
    int r = m.rows(), c = m.cols();
    if (r > 8 || c > 8) throw argument_error("minor-square enumeration capped at 8x8");
    double total = 0.0;
    for (unsigned mi = 0; mi < (1u << r); ++mi) {
        int k = __builtin_popcount(mi);
        for (unsigned mj = 0; mj < (1u << c); ++mj) {
            if (__builtin_popcount(mj) != k) continue;
            Matrix sub(k, k);
            int ii = 0;
            for (int i = 0; i < r; ++i) {
                if (!(mi & (1u << i))) continue;
                int jj = 0;
                for (int j = 0; j < c; ++j) {
                    if (!(mj & (1u << j))) continue;
                    sub.at(ii, jj) = m.at(i, j);
                    ++jj;
                }
                ++ii;
            }
            double d = det(sub);  // empty minor contributes det = 1
            total += d * d;
        }
    }
    return total;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return std::round(r);
}

RankOneDeficit rank_one_deficit(double lambda, const Vec& u, const Vec& xi, int d) {
    if (d < 4 || d % 2 != 0) throw argument_error("rank-one identity needs even d >= 4");
    if (u.size() != d || xi.size() != d) throw argument_error("rank-one identity: vector size mismatch");
    if (std::fabs(norm(xi) - 1.0) > 1e-12) throw argument_error("rank-one identity: xi must be unit");

    Matrix m0(d, d);
    for (int i = 0; i < d; ++i) {
        m0.at(i, i) = lambda;
        for (int j = 0; j < d; ++j) m0.at(i, j) += u[i] * xi[j];
    }
    int half = d / 2;
    double phi = 0.0;
    for (int j = 0; j <= half; ++j) {
        double c2j = binomial(half, j) / binomial(d, 2 * j);
        phi += c2j * sigma_minors(m0, 2 * j);
    }
    double deficit = gram_det(m0) - phi * phi;
    double predicted = std::pow(1.0 + lambda * lambda, d - 2) * dot(u, u);
    return {deficit, predicted};
}

PrincipalDirection principal_direction_2x2(double a, double c, double d) {
    double delta = (a - d) * (a - d) + 4.0 * c * c;
    if (delta == 0.0) throw singularity_error("principal_direction_2x2: degenerate eigenvalues");
    double theta = 0.5 * std::atan2(2.0 * c, a - d);
    double u0 = std::cos(theta), u1 = std::sin(theta);
    if (u0 < 0.0 || (u0 == 0.0 && u1 < 0.0)) {
        u0 = -u0;
        u1 = -u1;
    }
    return {u0, u1, 0.5 * (a + d + std::sqrt(delta))};
}

bool minor_bound_checks(const Matrix& b, const Vec& u, const Vec& v, const Vec& xi, const Vec& eta,
                        double bound_K) {
    int r = b.rows(), c = b.cols();
    if (bound_K < 1.0) throw argument_error("minor bound checks need K >= 1");
    if (u.size() != r || xi.size() != c) throw argument_error("minor bound checks: u/xi size mismatch");
    double nu = norm(u), nv = norm(v);
    if (std::fabs(norm(xi) - 1.0) > 1e-12) throw argument_error("minor bound checks: xi must be unit");
    if (nv > 0.0) {
        if (v.size() != r || eta.size() != c) throw argument_error("minor bound checks: v/eta size mismatch");
        if (std::fabs(norm(eta) - 1.0) > 1e-12) throw argument_error("minor bound checks: eta must be unit");
    }
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            if (std::fabs(b.at(i, j)) > bound_K) throw argument_error("minor bound checks: entry of B exceeds K");

    Matrix m = b;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) {
            m.at(i, j) += u[i] * xi[j];
            if (nv > 0.0) m.at(i, j) += v[i] * eta[j];
        }
    double lhs = std::sqrt(gram_det(m));

    // Sum of squared per-minor Hadamard bounds over all k x k minor positions.
    double rhs_sq = 0.0;
    int kmax = std::min(r, c);
    for (int k = 0; k <= kmax; ++k) {
        double sk = std::sqrt(double(k));
        double all_b = std::pow(sk * bound_K, k);
        double one_col = (k >= 1) ? k * (nu + nv) * std::pow(sk * bound_K, k - 1) : 0.0;
        double two_col = (k >= 2) ? k * (k - 1) * nu * nv * std::pow(sk * bound_K, k - 2) : 0.0;
        double per_minor = all_b + one_col + two_col;
        rhs_sq += binomial(r, k) * binomial(c, k) * per_minor * per_minor;
    }
    return lhs <= std::sqrt(rhs_sq);
}

}  // namespace sascal::linalg
