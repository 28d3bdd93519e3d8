#ifndef IVEXP_INTERVAL_MATRIX_HPP
#define IVEXP_INTERVAL_MATRIX_HPP

// Dense interval matrices. An IntervalMatrix is interchangeably a matrix of
// intervals and the interval [lower_bounds, upper_bounds] of real matrices;
// both views are exposed. Products are accumulated with compensated exact
// dot products, so each result bound is within one ulp of the true entrywise
// hull of {AB : A in [A], B in [B]}.

#include <cstddef>
#include <cmath>
#include <vector>

#include "ivexp/errors.hpp"
#include "ivexp/interval.hpp"
#include "ivexp/rounding.hpp"

namespace ivexp {

class RealMatrix {
  public:
    RealMatrix() : rows_(0), cols_(0) {}
    RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static RealMatrix identity(std::size_t n) {
        RealMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

class IntervalMatrix {
  public:
    IntervalMatrix() : rows_(0), cols_(0) {}
    IntervalMatrix(std::size_t rows, std::size_t cols, const Interval& fill = Interval())
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    // Degenerate lift of a real matrix.
    explicit IntervalMatrix(const RealMatrix& m) : IntervalMatrix(m.rows(), m.cols()) {
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                (*this)(i, j) = Interval(m(i, j));
    }

    // The [lower, upper] view of an interval of matrices.
    IntervalMatrix(const RealMatrix& lower, const RealMatrix& upper)
        : IntervalMatrix(lower.rows(), lower.cols()) {
        if (lower.rows() != upper.rows() || lower.cols() != upper.cols())
            throw ShapeError("bound matrices differ in shape");
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                (*this)(i, j) = Interval(lower(i, j), upper(i, j));
    }

    static IntervalMatrix identity(std::size_t n) {
        return IntervalMatrix(RealMatrix::identity(n));
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    bool same_shape(const IntervalMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    Interval& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Interval& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    RealMatrix lower_bounds() const {
        RealMatrix m(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).lo();
        return m;
    }

    RealMatrix upper_bounds() const {
        RealMatrix m(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).hi();
        return m;
    }

    friend bool operator==(const IntervalMatrix& a, const IntervalMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

  private:
    std::size_t rows_, cols_;
    std::vector<Interval> data_;
};

inline IntervalMatrix mat_add(const IntervalMatrix& a, const IntervalMatrix& b) {
    if (!a.same_shape(b)) throw ShapeError("mat_add: shape mismatch");
    IntervalMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
    return out;
}

inline IntervalMatrix mat_sub(const IntervalMatrix& a, const IntervalMatrix& b) {
    if (!a.same_shape(b)) throw ShapeError("mat_sub: shape mismatch");
    IntervalMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
    return out;
}

namespace detail {

// Exact endpoint products of [a][b], smallest and largest, kept as
// value+error pairs for exact accumulation. A zero endpoint contributes an
// exact zero (also the right convention against infinities).
struct ProductRange {
    round::ProdParts min{0, 0};
    round::ProdParts max{0, 0};
};

inline bool prod_less(const round::ProdParts& x, const round::ProdParts& y) {
    if (x.p != y.p) return x.p < y.p;
    return x.err < y.err;
}

inline round::ProdParts endpoint_product(double x, double y) {
    if (x == 0 || y == 0) return {0, 0};
    round::ProdParts t = round::two_prod(x, y);
    if (!std::isfinite(t.p)) t.err = 0;
    return t;
}

inline ProductRange product_range(const Interval& a, const Interval& b) {
    const round::ProdParts c[4] = {
        endpoint_product(a.lo(), b.lo()),
        endpoint_product(a.lo(), b.hi()),
        endpoint_product(a.hi(), b.lo()),
        endpoint_product(a.hi(), b.hi()),
    };
    ProductRange r{c[0], c[0]};
    for (int k = 1; k < 4; ++k) {
        if (prod_less(c[k], r.min)) r.min = c[k];
        if (prod_less(r.max, c[k])) r.max = c[k];
    }
    return r;
}

} // namespace detail

// Entry (i,j) is the sum over k of [a_ik][b_kj]; with a single occurrence of
// each variable per entry this expression is the hull of the set product, and
// the compensated accumulation keeps each computed bound within one ulp of it.
inline IntervalMatrix mat_mul(const IntervalMatrix& a, const IntervalMatrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("mat_mul: inner dimensions differ");
    IntervalMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            round::DirectedSum lo, hi;
            for (std::size_t k = 0; k < a.cols(); ++k) {
                const detail::ProductRange r = detail::product_range(a(i, k), b(k, j));
                lo.add_exact(r.min.p, r.min.err);
                hi.add_exact(r.max.p, r.max.err);
            }
            out(i, j) = Interval(lo.lower(), hi.upper());
        }
    }
    return out;
}

/// Divide every entry by 2^L; exact in binary floating point except underflow.
inline IntervalMatrix mat_scale_pow2(const IntervalMatrix& a, int L) {
    if (L < 0) throw DomainError("mat_scale_pow2: negative exponent");
    IntervalMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            double lo = std::ldexp(a(i, j).lo(), -L);
            double hi = std::ldexp(a(i, j).hi(), -L);
            // underflow makes ldexp inexact; step outward when it does not undo
            if (std::ldexp(lo, L) != a(i, j).lo()) lo = round::next_down(lo);
            if (std::ldexp(hi, L) != a(i, j).hi()) hi = round::next_up(hi);
            out(i, j) = Interval(lo, hi);
        }
    }
    return out;
}

inline RealMatrix magnitude_matrix(const IntervalMatrix& a) {
    RealMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = magnitude(a(i, j));
    return out;
}

/// ||[A]|| = || |[A]| ||_inf: max row sum of entry magnitudes, rounded up.
inline double inf_norm(const IntervalMatrix& a) {
    double best = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        round::DirectedSum row;
        for (std::size_t j = 0; j < a.cols(); ++j) row.add(magnitude(a(i, j)));
        best = std::max(best, row.upper());
    }
    return best;
}

inline double inf_norm(const RealMatrix& a) {
    double best = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        round::DirectedSum row;
        for (std::size_t j = 0; j < a.cols(); ++j) row.add(std::fabs(a(i, j)));
        best = std::max(best, row.upper());
    }
    return best;
}

inline IntervalMatrix mat_hull(const IntervalMatrix& a, const IntervalMatrix& b) {
    if (!a.same_shape(b)) throw ShapeError("mat_hull: shape mismatch");
    IntervalMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = hull(a(i, j), b(i, j));
    return out;
}

/// ||wid [A]||_inf, the quality measure for enclosures.
inline double width_norm(const IntervalMatrix& a) {
    double best = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        round::DirectedSum row;
        for (std::size_t j = 0; j < a.cols(); ++j) row.add(width(a(i, j)));
        best = std::max(best, row.upper());
    }
    return best;
}

inline bool contains_point(const IntervalMatrix& a, const RealMatrix& m) {
    if (a.rows() != m.rows() || a.cols() != m.cols())
        throw ShapeError("contains_point: shape mismatch");
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!a(i, j).contains(m(i, j))) return false;
    return true;
}

inline bool subset(const IntervalMatrix& a, const IntervalMatrix& b) {
    if (!a.same_shape(b)) throw ShapeError("subset: shape mismatch");
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!subset(a(i, j), b(i, j))) return false;
    return true;
}

} // namespace ivexp

#endif
