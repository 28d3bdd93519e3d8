#ifndef IVEXP_EXP_ENCLOSURE_HPP
#define IVEXP_EXP_ENCLOSURE_HPP

// Guaranteed enclosures of exp([A]) = {exp(A) : A in [A]}:
//
//   taylor_enclosure            I + [A] + [A]^2/2! + ... + [A]^K/K! + [R]
//   horner_enclosure            I + [A](I + [A]/2(I + ... (I + [A]/K))) + [R]
//   scaling_squaring_enclosure  (horner of [A]/2^L, squared L times)
//
// with the truncation remainder [R] = rho(||[A]||, K) [-E, E] evaluated with
// upward rounding. Each operator is inclusion-increasing and contains
// exp(A) for every member A, which containment tests exercise directly.

#include <cmath>
#include <cstdint>
#include <vector>

#include "ivexp/errors.hpp"
#include "ivexp/interval.hpp"
#include "ivexp/interval_matrix.hpp"
#include "ivexp/rounding.hpp"

namespace ivexp {

enum class Method { taylor, horner, scaling_squaring };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::taylor: return "taylor";
        case Method::horner: return "horner";
        default: return "scaling_squaring";
    }
}

struct ExpParams {
    int K = 17; // truncation order
    int L = 0;  // scaling exponent, 0 for plain Taylor/Horner
};

struct EnclosureResult {
    IntervalMatrix enclosure;
    Method method;
    ExpParams params;
    double width_norm;
};

/// Upper bound of alpha^(K+1) / ((K+1)! (1 - alpha/(K+2))), the scalar
/// truncation error bound of the exponential series. Increasing in alpha,
/// decreasing in K.
inline double rho(double alpha, int K) {
    if (K < 0) throw DomainError("rho: negative truncation order");
    if (std::isnan(alpha) || alpha < 0) throw DomainError("rho: alpha must be nonnegative");
    const double kp2 = static_cast<double>(K) + 2;
    if (!(alpha < kp2)) throw DomainError("rho: alpha must be below K + 2");
    // alpha^(K+1)/(K+1)! as a running product keeps intermediates near
    // exp(alpha) instead of overflowing the numerator for large K.
    double num = 1.0;
    for (int k = 1; k <= K + 1; ++k)
        num = round::mul_up(num, round::div_up(alpha, static_cast<double>(k)));
    const double den = round::sub_down(1.0, round::div_up(alpha, kp2));
    if (!(den > 0)) return round::kInf;
    return round::div_up(num, den);
}

/// [R]([A], K): every entry [-r, r] with r = rho(||[A]||, K).
inline IntervalMatrix remainder_enclosure(const IntervalMatrix& a, int K) {
    if (!a.square()) throw ShapeError("remainder_enclosure: matrix must be square");
    const double r = rho(inf_norm(a), K);
    return IntervalMatrix(a.rows(), a.cols(), Interval(-r, r));
}

namespace detail {

/// Entrywise division by the degenerate interval [k, k], k a positive integer.
inline IntervalMatrix mat_div_int(const IntervalMatrix& a, int k) {
    const double kk = static_cast<double>(k);
    IntervalMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(i, j) = Interval(round::div_down(a(i, j).lo(), kk),
                                 round::div_up(a(i, j).hi(), kk));
    return out;
}

/// I + A*B with one directed rounding per bound.
inline IntervalMatrix identity_plus_product(const IntervalMatrix& a, const IntervalMatrix& b) {
    IntervalMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            round::DirectedSum lo, hi;
            if (i == j) {
                lo.add(1.0);
                hi.add(1.0);
            }
            for (std::size_t k = 0; k < a.cols(); ++k) {
                const ProductRange r = product_range(a(i, k), b(k, j));
                lo.add_exact(r.min.p, r.min.err);
                hi.add_exact(r.max.p, r.max.err);
            }
            out(i, j) = Interval(lo.lower(), hi.upper());
        }
    }
    return out;
}

inline void require_series_order(double norm, int K, const char* who) {
    if (K < 0) throw DomainError(std::string(who) + ": negative truncation order");
    if (!(static_cast<double>(K) + 2 > norm))
        throw DomainError(std::string(who) + ": requires K + 2 > ||[A]||");
}

inline IntervalMatrix horner_core(const IntervalMatrix& a, int K) {
    const std::size_t n = a.rows();
    IntervalMatrix v = IntervalMatrix::identity(n);
    for (int k = K; k >= 1; --k)
        v = identity_plus_product(mat_div_int(a, k), v);
    return mat_add(v, remainder_enclosure(a, K));
}

} // namespace detail

/// [T]([A], K) of the truncated series plus remainder. Terms are accumulated
/// as term_k = term_{k-1} [A] / k, and the K+1 term sum per entry is rounded
/// once through a compensated accumulator.
inline EnclosureResult taylor_enclosure(const IntervalMatrix& a, int K) {
    if (!a.square()) throw ShapeError("taylor_enclosure: matrix must be square");
    const double norm = inf_norm(a);
    detail::require_series_order(norm, K, "taylor_enclosure");
    const std::size_t n = a.rows();

    std::vector<round::DirectedSum> lo(n * n), hi(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        lo[i * n + i].add(1.0);
        hi[i * n + i].add(1.0);
    }
    IntervalMatrix term = IntervalMatrix::identity(n);
    for (int k = 1; k <= K; ++k) {
        term = detail::mat_div_int(mat_mul(term, a), k);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                lo[i * n + j].add(term(i, j).lo());
                hi[i * n + j].add(term(i, j).hi());
            }
        }
    }
    const double r = rho(norm, K);
    IntervalMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            lo[i * n + j].add(-r);
            hi[i * n + j].add(r);
            out(i, j) = Interval(lo[i * n + j].lower(), hi[i * n + j].upper());
        }
    }
    return {out, Method::taylor, {K, 0}, width_norm(out)};
}

/// [H]([A], K): the same series evaluated by the Horner scheme, which loses
/// less correlation between the occurrences of [A].
inline EnclosureResult horner_enclosure(const IntervalMatrix& a, int K) {
    if (!a.square()) throw ShapeError("horner_enclosure: matrix must be square");
    detail::require_series_order(inf_norm(a), K, "horner_enclosure");
    IntervalMatrix out = detail::horner_core(a, K);
    return {out, Method::horner, {K, 0}, width_norm(out)};
}

/// [S]([A], L, K) = ([H]([A]/2^L, K))^(2^L), computed with L successive
/// interval matrix squarings.
inline EnclosureResult scaling_squaring_enclosure(const IntervalMatrix& a, int L, int K) {
    if (!a.square()) throw ShapeError("scaling_squaring_enclosure: matrix must be square");
    if (L < 0) throw DomainError("scaling_squaring_enclosure: negative scaling exponent");
    const IntervalMatrix scaled = mat_scale_pow2(a, L);
    // (K+2) 2^L > ||[A]|| expressed on the exactly scaled matrix
    if (K < 0 || !(static_cast<double>(K) + 2 > inf_norm(scaled)))
        throw DomainError("scaling_squaring_enclosure: requires (K + 2) 2^L > ||[A]||");
    IntervalMatrix m = detail::horner_core(scaled, K);
    for (int l = 0; l < L; ++l) m = mat_mul(m, m);
    return {m, Method::scaling_squaring, {K, L}, width_norm(m)};
}

/// Default parameters: scale the norm to at most 1 and use order 17, whose
/// scalar remainder rho(1, 17) ~ 1.6e-16 sits below double resolution; plain
/// series orders grow with the norm instead.
inline ExpParams choose_params(const IntervalMatrix& a, Method method) {
    if (!a.square()) throw ShapeError("choose_params: matrix must be square");
    const double norm = inf_norm(a);
    if (norm > 0x1p40)
        throw DomainError("choose_params: norm too large for a double-precision series");
    ExpParams p;
    if (method == Method::scaling_squaring) {
        p.K = 17;
        p.L = norm > 1 ? static_cast<int>(std::ceil(std::log2(norm))) : 0;
    } else {
        p.K = std::max(17, static_cast<int>(std::floor(norm)) + 3);
        p.L = 0;
    }
    return p;
}

/// Dispatch on method with explicit or automatic parameters.
inline EnclosureResult enclose_exp(const IntervalMatrix& a, Method method, const ExpParams& params) {
    switch (method) {
        case Method::taylor: return taylor_enclosure(a, params.K);
        case Method::horner: return horner_enclosure(a, params.K);
        default: return scaling_squaring_enclosure(a, params.L, params.K);
    }
}

} // namespace ivexp

#endif
