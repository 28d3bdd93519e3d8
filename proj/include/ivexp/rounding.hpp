#ifndef IVEXP_ROUNDING_HPP
#define IVEXP_ROUNDING_HPP

// Correctly-rounded directed arithmetic on binary64, built from error-free
// transformations (TwoSum / FMA-based TwoProd) instead of fesetround. Every
// kernel returns the tightest representable bound in the requested direction
// for operands in the normal range, and falls back to a one-ulp outward step
// where the error term cannot be trusted (subnormals, deep cancellation).
// No floating-point environment state is touched, so all kernels are safe
// for concurrent use.

#include <cmath>
#include <limits>

namespace ivexp::round {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kMaxFinite = std::numeric_limits<double>::max();
inline constexpr double kMinNormal = std::numeric_limits<double>::min();

inline double next_down(double x) { return std::nextafter(x, -kInf); }
inline double next_up(double x) { return std::nextafter(x, kInf); }

// s + err == a + b exactly (Knuth TwoSum; valid whenever s is finite).
struct SumParts {
    double s;
    double err;
};

inline SumParts two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

// p + err == a * b exactly, provided p is finite and normal.
struct ProdParts {
    double p;
    double err;
};

inline ProdParts two_prod(double a, double b) {
    const double p = a * b;
    const double err = std::fma(a, b, -p);
    return {p, err};
}

// ---- addition -------------------------------------------------------------

inline double add_down(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) {
        if (std::isnan(s)) return -kInf; // (-inf) + (+inf): saturate
        if (s > 0 && std::isfinite(a) && std::isfinite(b)) return kMaxFinite;
        return s;
    }
    const double err = two_sum(a, b).err;
    return err < 0 ? next_down(s) : s;
}

inline double add_up(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) {
        if (std::isnan(s)) return kInf;
        if (s < 0 && std::isfinite(a) && std::isfinite(b)) return -kMaxFinite;
        return s;
    }
    const double err = two_sum(a, b).err;
    return err > 0 ? next_up(s) : s;
}

inline double sub_down(double a, double b) { return add_down(a, -b); }
inline double sub_up(double a, double b) { return add_up(a, -b); }

// ---- multiplication --------------------------------------------------------

// The FMA residual of a product is exact only when the rounded product is
// normal; below that we take an unconditional outward step.
inline double mul_down(double a, double b) {
    if (a == 0 || b == 0) return 0; // covers 0 * inf
    const double p = a * b;
    if (!std::isfinite(p)) {
        if (std::isnan(p)) return -kInf;
        if (p > 0 && std::isfinite(a) && std::isfinite(b)) return kMaxFinite;
        return p;
    }
    if (std::fabs(p) < kMinNormal) return next_down(p);
    const double err = std::fma(a, b, -p);
    return err < 0 ? next_down(p) : p;
}

inline double mul_up(double a, double b) {
    if (a == 0 || b == 0) return 0;
    const double p = a * b;
    if (!std::isfinite(p)) {
        if (std::isnan(p)) return kInf;
        if (p < 0 && std::isfinite(a) && std::isfinite(b)) return -kMaxFinite;
        return p;
    }
    if (std::fabs(p) < kMinNormal) return next_up(p);
    const double err = std::fma(a, b, -p);
    return err > 0 ? next_up(p) : p;
}

// ---- division ---------------------------------------------------------------

// The residual fma(q, b, -a) can flush to zero although q*b != a once the
// result scale drops below about 2^-970; treat that whole region as untrusted.
inline constexpr double kDivTrustFloor = 0x1p-960;

inline double div_down(double a, double b) {
    const double q = a / b;
    if (!std::isfinite(q)) {
        if (std::isnan(q)) return -kInf;
        if (q > 0 && std::isfinite(a) && std::isfinite(b)) return kMaxFinite;
        return q;
    }
    if (a == 0) return 0;
    if (!std::isfinite(a) || !std::isfinite(b)) return q; // a/inf -> signed zero, exact limit
    if (std::fabs(a) < kDivTrustFloor || std::fabs(q) < kMinNormal) return next_down(q);
    const double r = std::fma(q, b, -a); // sign of q*b - a
    const bool q_too_high = (b > 0) ? (r > 0) : (r < 0);
    return q_too_high ? next_down(q) : q;
}

inline double div_up(double a, double b) {
    const double q = a / b;
    if (!std::isfinite(q)) {
        if (std::isnan(q)) return kInf;
        if (q < 0 && std::isfinite(a) && std::isfinite(b)) return -kMaxFinite;
        return q;
    }
    if (a == 0) return 0;
    if (!std::isfinite(a) || !std::isfinite(b)) return q;
    if (std::fabs(a) < kDivTrustFloor || std::fabs(q) < kMinNormal) return next_up(q);
    const double r = std::fma(q, b, -a);
    const bool q_too_low = (b > 0) ? (r < 0) : (r > 0);
    return q_too_low ? next_up(q) : q;
}

// ---- compensated dot products ----------------------------------------------
//
// Accumulates a sum of exactly-known terms (value + error pairs) with a
// running compensation, then rounds the total once in the requested
// direction. The compensation itself is computed in round-to-nearest, so its
// own error is covered by a guard band proportional to the accumulated
// magnitude; the guard only forces an extra ulp when cancellation exceeds
// roughly 2^50, which keeps the common case at the tightest bound.

class DirectedSum {
  public:
    void add(double x) { add_exact(x, 0.0); }

    void add_exact(double hi, double lo) {
        if (!std::isfinite(hi)) {
            if (hi > 0 || std::isnan(hi)) saturate_hi_ = true;
            if (hi < 0 || std::isnan(hi)) saturate_lo_ = true;
            return;
        }
        const SumParts t = two_sum(sum_, hi);
        sum_ = t.s;
        // compensation in nearest mode, with exactness tracked so that sums
        // of exactly representable terms round to the exact value
        const SumParts inc = two_sum(t.err, lo);
        const SumParts cc = two_sum(comp_, inc.s);
        comp_ = cc.s;
        if (inc.err != 0 || cc.err != 0) comp_exact_ = false;
        abs_ += std::fabs(hi);
        ++terms_;
        if (!std::isfinite(sum_)) {
            if (sum_ > 0) saturate_hi_ = true;
            else saturate_lo_ = true;
        }
    }

    void add_product(double a, double b) {
        if (a == 0 || b == 0) {
            add(0.0);
            return;
        }
        const ProdParts t = two_prod(a, b);
        if (!std::isfinite(t.p) || std::fabs(t.p) < kMinNormal) {
            // error term unreliable: absorb a pessimistic 1-ulp pad
            add(t.p);
            comp_guard_ += std::fabs(t.p) * 0x1p-52 + 0x1p-1070;
            return;
        }
        add_exact(t.p, t.err);
    }

    double lower() const {
        if (saturate_lo_) return -kInf;
        if (saturate_hi_) return kMaxFinite;
        return rounded(-1);
    }

    double upper() const {
        if (saturate_hi_) return kInf;
        if (saturate_lo_) return -kMaxFinite;
        return rounded(+1);
    }

  private:
    double rounded(int dir) const {
        const SumParts t = two_sum(sum_, comp_);
        const double v = t.s;
        const double u = uncertainty();
        if (std::isnan(v)) return dir < 0 ? -kInf : kInf;
        if (!std::isfinite(v)) return v > 0 ? (dir < 0 ? kMaxFinite : kInf) : (dir < 0 ? -kInf : -kMaxFinite);
        // the exact total lies in [v + err - u, v + err + u]
        if (dir < 0) {
            if (t.err - u >= 0) return v;
            const double below = v - next_down(v);
            if (t.err - u >= -below) return next_down(v);
        } else {
            if (t.err + u <= 0) return v;
            const double above = next_up(v) - v;
            if (t.err + u <= above) return next_up(v);
        }
        // coarse but safe: step out by the full uncertainty
        const double pad = (std::fabs(v) * 0x1p-51 + 2 * u) + 0x1p-1070;
        return dir < 0 ? next_down(v - pad) : next_up(v + pad);
    }

    // bound on |comp_ - exact compensation|: the compensation terms are each
    // below ulp(running magnitude), and at most `terms_` nearest additions act
    // on them. Zero while every compensation step was exact.
    double uncertainty() const {
        const double n = static_cast<double>(terms_ + 1);
        const double drift = comp_exact_ ? 0.0 : (n * n) * 0x1p-104 * abs_ + 0x1p-1070;
        return drift + comp_guard_;
    }

    double sum_ = 0;
    double comp_ = 0;
    double abs_ = 0;
    double comp_guard_ = 0;
    long terms_ = 0;
    bool comp_exact_ = true;
    bool saturate_lo_ = false;
    bool saturate_hi_ = false;
};

} // namespace ivexp::round

#endif
