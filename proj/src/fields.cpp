#include "fields.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "sphere.hpp"

namespace sascal::fields {

namespace {

void check_unit_sphere_point(const Vec& x, const char* what) {
    if (std::fabs(norm(x) - 1.0) > 1e-9) {
        std::ostringstream os;
        os << what << ": point is not on the unit sphere (|x| = " << norm(x) << ")";
        throw argument_error(os.str());
    }
}

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

}  // namespace

Vec hopf_complex_structure(const Vec& x) {
    int dim = x.size();
    if (dim < 4 || dim % 2 != 0) {
        throw argument_error("hopf_complex_structure: ambient dimension must be even and >= 4");
    }
    int n = dim - 1;
    int m = (n - 1) / 2;
    Vec y(dim);
    y[0] = x[n];
    y[n] = -x[0];
    for (int j = 1; j <= m; ++j) {
        y[2 * j] = x[2 * j - 1];
        y[2 * j - 1] = -x[2 * j];
    }
    return y;
}

UnitField hopf_field(int m) {
    if (m < 1) throw argument_error("hopf_field: m must be >= 1");
    int n = 2 * m + 1;
    UnitField f;
    f.n = n;
    f.eval = [n](const Vec& x) {
        if (x.size() != n + 1) throw argument_error("hopf_field: wrong ambient dimension");
        check_unit_sphere_point(x, "hopf_field");
        return hopf_complex_structure(x);
    };
    f.derive = [n](const Vec& x, const Vec& X) {
        if (x.size() != n + 1 || X.size() != n + 1) {
            throw argument_error("hopf_field derivative: wrong ambient dimension");
        }
        Vec H = hopf_complex_structure(x);
        return hopf_complex_structure(X) + dot(X, H) * x;
    };
    return f;
}

UnitField radial_field(const Vec& p) {
    check_unit_sphere_point(p, "radial_field");
    int n = p.size() - 1;
    UnitField f;
    f.n = n;
    f.eval = [p](const Vec& x) { return sphere::radial_gradient(x, p); };
    f.derive = [p](const Vec& x, const Vec& X) {
        Vec R = sphere::radial_gradient(x, p);
        double r = sphere::geodesic_distance(x, p);
        double cot_r = std::cos(r) / std::sin(r);
        return cot_r * (X - dot(X, R) * R);
    };
    return f;
}

Vec covariant_derivative(const UnitField& f, const Vec& x, const Vec& X, double step) {
    if (!(step > 0.0) || step > 0.1) {
        throw argument_error("covariant_derivative: step must lie in (0, 0.1]");
    }
    check_unit_sphere_point(x, "covariant_derivative");
    double nX = norm(X);
    if (nX < 1e-14) throw argument_error("covariant_derivative: zero direction");
    if (std::fabs(dot(X, x)) > 1e-9 * nX) {
        throw argument_error("covariant_derivative: direction is not tangent");
    }
    Vec Xu = (1.0 / nX) * X;

    auto at = [&](double t) {
        Vec y = std::cos(t) * x + std::sin(t) * Xu;
        return f.eval((1.0 / norm(y)) * y);
    };
    double h = step;
    Vec D = (1.0 / (2.0 * h)) * (at(h) - at(-h));
    Vec V = f.eval(x);
    // Ambient derivative plus the second fundamental form term <X, V> x,
    // then a tangent projection to scrub truncation residue.
    Vec nab = D + dot(Xu, V) * x;
    nab = nab - dot(nab, x) * x;
    return nX * nab;
}

GraphBlocks graph_blocks(const UnitField& f, const Vec& x, double step) {
    check_unit_sphere_point(x, "graph_blocks");
    int n = f.n;
    if (x.size() != n + 1) throw argument_error("graph_blocks: wrong ambient dimension");
    int d = n - 1;

    Vec V = f.eval(x);
    if (std::fabs(norm(V) - 1.0) > 1e-8 || std::fabs(dot(V, x)) > 1e-8) {
        throw argument_error("graph_blocks: field value is not a unit tangent vector");
    }

    // Orthonormal basis of {x, V}^perp: project ambient axes and run
    // Gram-Schmidt, retrying from a rotated axis order if a seed degenerates.
    std::vector<Vec> frame;
    for (int offset = 0; offset <= n && (int)frame.size() < d; ++offset) {
        frame.clear();
        frame.push_back(V);
        for (int k = 0; k <= n && (int)frame.size() < d + 1; ++k) {
            Vec g = Vec::basis(n + 1, (k + offset) % (n + 1));
            g = g - dot(g, x) * x;
            for (const Vec& e : frame) g = g - dot(g, e) * e;
            double ng = norm(g);
            if (ng > 1e-6) frame.push_back((1.0 / ng) * g);
        }
    }
    if ((int)frame.size() != d + 1) {
        throw singularity_error("graph_blocks: could not complete an orthonormal frame");
    }

    // Orient so that det[V, e_1, ..., e_d, x] > 0, flipping the last leg.
    {
        linalg::Matrix A(n + 1, n + 1);
        for (int i = 0; i <= n; ++i) {
            for (int c = 0; c <= d; ++c) A.at(i, c) = frame[c][i];
            A.at(i, n) = x[i];
        }
        if (linalg::det(A) < 0.0) frame[d] = -frame[d];
    }

    auto nabla = [&](const Vec& X) {
        if (f.derive) return f.derive(x, X);
        return covariant_derivative(f, x, X, step);
    };

    GraphBlocks out;
    out.b = Vec(d);
    out.M = linalg::Matrix(d, d);
    Vec DV = nabla(V);
    for (int beta = 1; beta <= d; ++beta) out.b[beta - 1] = dot(DV, frame[beta]);
    for (int alpha = 1; alpha <= d; ++alpha) {
        Vec De = nabla(frame[alpha]);
        for (int beta = 1; beta <= d; ++beta) {
            out.M.at(beta - 1, alpha - 1) = dot(De, frame[beta]);
        }
    }
    out.frame = std::move(frame);
    return out;
}

Vec nlerp(const Vec& u, const Vec& v, double t) {
    if (u.size() != v.size()) throw argument_error("nlerp: dimension mismatch");
    if (t < 0.0 || t > 1.0) throw argument_error("nlerp: parameter outside [0, 1]");
    Vec N = (1.0 - t) * u + t * v;
    double nn = norm(N);
    if (nn < 1e-9) {
        throw nonvanishing_error("nlerp: interpolant vanished (near-antipodal inputs)");
    }
    return (1.0 / nn) * N;
}

UnitField normalized_field(int n, std::function<Vec(const Vec&)> raw, double floor) {
    if (n < 1) throw argument_error("normalized_field: n must be >= 1");
    if (!(floor > 0.0)) throw argument_error("normalized_field: floor must be positive");
    UnitField f;
    f.n = n;
    f.eval = [n, raw = std::move(raw), floor](const Vec& x) {
        if (x.size() != n + 1) throw argument_error("normalized_field: wrong ambient dimension");
        Vec W = raw(x);
        if (W.size() != n + 1) throw argument_error("normalized_field: raw evaluator changed dimension");
        W = W - dot(W, x) * x;
        double nw = norm(W);
        if (nw < floor) {
            throw nonvanishing_error("normalized_field: tangent projection below floor " +
                                     std::to_string(floor) + " at x = " + point_string(x));
        }
        return (1.0 / nw) * W;
    };
    return f;
}

}  // namespace sascal::fields
