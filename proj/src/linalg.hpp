#pragma once

// Dense linear algebra for the tiny matrices this project meets: determinants,
// singular values, principal-minor sums, Gram determinants, and the explicit
// rank-one/rank-two bound checks used by the density estimates.

#include <vector>

#include "common.hpp"

namespace sascal::linalg {

inline constexpr int kMaxDim = 12;

class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(check(rows)), cols_(check(cols)) { a_.fill(0.0); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& at(int i, int j) { return a_[i * kMaxDim + j]; }
    double at(int i, int j) const { return a_[i * kMaxDim + j]; }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

  private:
    static int check(int n) {
        if (n < 0 || n > kMaxDim) throw argument_error("matrix dimension out of range: " + std::to_string(n));
        return n;
    }
    int rows_ = 0, cols_ = 0;
    std::array<double, kMaxDim * kMaxDim> a_{};
};

Matrix transpose(const Matrix& m);
Matrix multiply(const Matrix& a, const Matrix& b);
Matrix add(const Matrix& a, const Matrix& b);
Matrix scale(double c, const Matrix& m);

// Determinant: closed forms up to 3x3, LU with partial pivoting above.
double det(const Matrix& m);

// Solve A x = b by LU with partial pivoting (A square, well-conditioned here).
Vec lu_solve(const Matrix& a, const Vec& b);

// Singular values in descending order, via Jacobi eigenvalue sweeps on the
// smaller of the two Gram matrices. Sizes are <= kMaxDim so convergence is
// immediate and no external dependency is needed.
std::vector<double> singular_values(const Matrix& m);

// |Lambda^j M| = product of the j largest singular values.
double exterior_power_norm(const Matrix& m, int j);

// sigma_k(M): sum of all principal k x k minors (explicit subset loops, d <= 8).
double sigma_minors(const Matrix& m, int k);

// det(I + M^T M), computed directly from the Gram matrix.
double gram_det(const Matrix& m);

// Oracle companion: Sum over k of the squares of all k x k minors of M
// (Cauchy-Binet expansion of det(I + M^T M)). Brute force, small sizes only.
double gram_det_minor_sum(const Matrix& m);

// Exact binomial coefficient as a double (arguments stay far below overflow).
double binomial(int n, int k);

struct RankOneDeficit {
    double deficit;    // det(I + M0^T M0) - Phi_d(M0)^2 for M0 = lambda I + u (x) xi
    double predicted;  // (1 + lambda^2)^{d-2} |u|^2
};
RankOneDeficit rank_one_deficit(double lambda, const Vec& u, const Vec& xi, int d);

struct PrincipalDirection {
    double u0, u1;      // unit eigenvector of [[a, c], [c, d]] for the larger eigenvalue, u0 >= 0
    double lambda_max;  // (a + d + sqrt(Delta)) / 2
};
PrincipalDirection principal_direction_2x2(double a, double c, double d);

// Checks sqrt(det(I + M^T M)) for M = B + u (x) xi (+ v (x) eta when |v| > 0)
// against the fully explicit Hadamard bound assembled from per-minor estimates:
//   |det M_{I,J}| <= (sqrt(k) K)^k + k (|u|+|v|) (sqrt(k) K)^{k-1} + k(k-1)|u||v| (sqrt(k) K)^{k-2},
// squared and summed over all C(rows,k) C(cols,k) minors. Entries of B must be
// bounded by bound_K >= 1.
bool minor_bound_checks(const Matrix& b, const Vec& u, const Vec& v, const Vec& xi, const Vec& eta,
                        double bound_K);

}  // namespace sascal::linalg
