#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace tauq {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Cplx = std::complex<double>;
using ArrayXd = Eigen::ArrayXd;
using ArrayXc = Eigen::ArrayXcd;

/// Thrown when a run configuration fails validation (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a numerical guard trips: norm blow-up, loss of ellipticity,
/// non-invertible diffusion matrix (CLI exit code 3).
struct NumericalGuard : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace warnings {

inline std::atomic<long>& counter() {
    static std::atomic<long> n{0};
    return n;
}

inline std::atomic<bool>& quiet() {
    static std::atomic<bool> q{false};
    return q;
}

inline void warn(const std::string& msg) {
    const long n = counter().fetch_add(1, std::memory_order_relaxed);
    if (quiet().load(std::memory_order_relaxed)) return;
    if (n < 8)
        std::fprintf(stderr, "warning: %s\n", msg.c_str());
    else if (n == 8)
        std::fprintf(stderr, "warning: (further warnings suppressed)\n");
}

}  // namespace warnings

inline Vec vec1(double x) {
    Vec v(1);
    v[0] = x;
    return v;
}

inline Vec vec2(double x, double y) {
    Vec v(2);
    v[0] = x;
    v[1] = y;
    return v;
}

inline Mat mat1(double a) {
    Mat m(1, 1);
    m(0, 0) = a;
    return m;
}

}  // namespace tauq
