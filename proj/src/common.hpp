#pragma once

// Small fixed-capacity ambient vectors and error types shared by every module.
// All geometry lives in R^{n+1} with n+1 <= kMaxAmbient; sizes are tiny and
// known at run time, so a stack array beats heap vectors inside sampling loops.

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>

namespace sascal {

inline constexpr int kMaxAmbient = 16;

struct argument_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct singularity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct tolerance_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A norm that the construction divides by vanished at a concrete point; the
// message carries the quantity, its value, and the point.
struct nonvanishing_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Vec {
  public:
    Vec() = default;
    explicit Vec(int n) : n_(check_dim(n)) { a_.fill(0.0); }
    Vec(std::initializer_list<double> xs) : n_(check_dim(static_cast<int>(xs.size()))) {
        a_.fill(0.0);
        int i = 0;
        for (double x : xs) a_[i++] = x;
    }

    int size() const { return n_; }
    double& operator[](int i) { return a_[i]; }
    double operator[](int i) const { return a_[i]; }

    static Vec basis(int n, int i) {
        Vec e(n);
        e[i] = 1.0;
        return e;
    }

  private:
    static int check_dim(int n) {
        if (n < 0 || n > kMaxAmbient) throw argument_error("vector dimension out of range: " + std::to_string(n));
        return n;
    }
    int n_ = 0;
    std::array<double, kMaxAmbient> a_{};
};

inline double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (int i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

inline Vec operator+(const Vec& x, const Vec& y) {
    Vec z(x.size());
    for (int i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
    return z;
}

inline Vec operator-(const Vec& x, const Vec& y) {
    Vec z(x.size());
    for (int i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
    return z;
}

inline Vec operator*(double c, const Vec& x) {
    Vec z(x.size());
    for (int i = 0; i < x.size(); ++i) z[i] = c * x[i];
    return z;
}

inline Vec operator-(const Vec& x) { return -1.0 * x; }

// x - <x,u> u for unit u.
inline Vec reject(const Vec& x, const Vec& u) { return x - dot(x, u) * u; }

inline Vec normalized(const Vec& x, double floor, const char* what) {
    double nx = norm(x);
    if (nx < floor)
        throw nonvanishing_error(std::string(what) + " has norm " + std::to_string(nx) +
                                 " below floor " + std::to_string(floor));
    return (1.0 / nx) * x;
}

inline bool finite(const Vec& x) {
    for (int i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i])) return false;
    return true;
}

// splitmix64: cheap, well-mixed seed derivation for per-chunk RNG streams.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk) {
    return splitmix64(seed ^ splitmix64(stream ^ splitmix64(chunk ^ 0x6a09e667f3bcc908ull)));
}

// Random draws with explicit bit-to-double conversion, so that streams are
// reproducible across standard library implementations (std::*_distribution
// is implementation-defined).
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : rng_(seed) {}

    double uniform() { return (double)(rng_() >> 11) * 0x1.0p-53; }  // [0, 1)

    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Uniform point on the unit sphere of R^dim (all dim coordinates active).
    Vec unit_sphere(int dim) {
        for (;;) {
            Vec x(dim);
            for (int i = 0; i < dim; ++i) x[i] = gauss();
            double nx = norm(x);
            if (nx > 1e-6) return (1.0 / nx) * x;
        }
    }

  private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace sascal
