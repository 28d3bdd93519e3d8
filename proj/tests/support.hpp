#ifndef IVEXP_TESTS_SUPPORT_HPP
#define IVEXP_TESTS_SUPPORT_HPP

// Shared test oracles. Exact rational arithmetic (boost cpp_rational) checks
// the directed rounding kernels independently of the code under test, and a
// 50-digit binary float checks the scalar exponential references. Nothing
// here touches the library's own rounding paths.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "ivexp/interval.hpp"
#include "ivexp/interval_matrix.hpp"

namespace support {

using Rational = boost::multiprecision::cpp_rational;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

inline Rational to_rational(double x) { return Rational(x); } // exact for finite x

inline bool contains(const ivexp::Interval& iv, const Rational& v) {
    return to_rational(iv.lo()) <= v && v <= to_rational(iv.hi());
}

inline bool below(double bound, const BigFloat& v) { return BigFloat(bound) <= v; }
inline bool above(double bound, const BigFloat& v) { return BigFloat(bound) >= v; }

// signed ordinal so that adjacent doubles differ by one
inline std::int64_t ordinal(double x) {
    std::int64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    return bits >= 0 ? bits : std::int64_t(0x8000000000000000ull) - bits;
}

inline std::int64_t ulp_distance(double a, double b) {
    const std::int64_t d = ordinal(a) - ordinal(b);
    return d < 0 ? -d : d;
}

// deterministic uniform draw independent of libstdc++ distributions
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
    return lo + (hi - lo) * u;
}

inline ivexp::IntervalMatrix example1_matrix(double t_lo = -3, double t_hi = -2) {
    ivexp::IntervalMatrix a(2, 2);
    a(0, 0) = ivexp::Interval(0.0);
    a(0, 1) = ivexp::Interval(1.0);
    a(1, 0) = ivexp::Interval(0.0);
    a(1, 1) = ivexp::Interval(t_lo, t_hi);
    return a;
}

// the hard-to-exponentiate 3x3 matrix of the experiments section
inline ivexp::RealMatrix bochev_matrix() {
    ivexp::RealMatrix m(3, 3);
    const double v[9] = {-131, 19, 18, -390, 56, 54, -387, 57, 52};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) m(i, j) = v[i * 3 + j];
    return m;
}

// random interval matrix with inf-norm at most `max_norm` and entry widths
// at most `max_width`
inline ivexp::IntervalMatrix random_interval_matrix(std::mt19937_64& rng, std::size_t n,
                                                    double max_norm, double max_width) {
    ivexp::IntervalMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double mid = uniform(rng, -1.0, 1.0);
            const double rad = uniform(rng, 0.0, max_width / 2);
            a(i, j) = ivexp::Interval(mid - rad, mid + rad);
        }
    const double norm = ivexp::inf_norm(a);
    if (norm > max_norm) {
        const double s = 0.999 * max_norm / norm;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                a(i, j) = ivexp::Interval(a(i, j).lo() * s, a(i, j).hi() * s);
    }
    return a;
}

inline ivexp::RealMatrix random_point_matrix(std::mt19937_64& rng, std::size_t n, double max_norm) {
    ivexp::RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = uniform(rng, -1.0, 1.0);
    const double norm = ivexp::inf_norm(ivexp::IntervalMatrix(m));
    if (norm > max_norm) {
        const double s = 0.999 * max_norm / norm;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) *= s;
    }
    return m;
}

inline ivexp::RealMatrix sample_member(std::mt19937_64& rng, const ivexp::IntervalMatrix& a) {
    ivexp::RealMatrix m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            m(i, j) = uniform(rng, a(i, j).lo(), a(i, j).hi());
    return m;
}

// exact Eq.-style remainder bound: alpha^(K+1) / ((K+1)! (1 - alpha/(K+2)))
inline Rational rho_exact(const Rational& alpha, int K) {
    Rational num = 1;
    for (int k = 1; k <= K + 1; ++k) num *= alpha / k;
    const Rational den = 1 - alpha / (K + 2);
    return num / den;
}

// 50-digit exponential of a double argument
inline BigFloat exp_ref(double t) { return exp(BigFloat(t)); }

} // namespace support

#endif
