#ifndef IVEXP_INTERVAL_HPP
#define IVEXP_INTERVAL_HPP

// Closed intervals of reals with outward-rounded arithmetic: every operation
// returns an interval containing the exact set result. Values are immutable
// and all operations are pure, so concurrent use needs no synchronization.

#include <cmath>
#include <algorithm>

#include "ivexp/errors.hpp"
#include "ivexp/rounding.hpp"

namespace ivexp {

class Interval {
  public:
    Interval() : lo_(0), hi_(0) {}

    // Degenerate interval [x, x], identifying a real with an interval.
    explicit Interval(double x) : Interval(x, x) {}

    Interval(double lo, double hi) : lo_(lo), hi_(hi) {
        if (std::isnan(lo) || std::isnan(hi))
            throw DomainError("interval bound is NaN");
        if (!(lo <= hi))
            throw DomainError("interval lower bound exceeds upper bound");
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }

    bool is_degenerate() const { return lo_ == hi_; }
    bool contains(double x) const { return lo_ <= x && x <= hi_; }
    bool contains(const Interval& other) const {
        return lo_ <= other.lo_ && other.hi_ <= hi_;
    }

    friend bool operator==(const Interval& a, const Interval& b) {
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

  private:
    double lo_;
    double hi_;
};

inline Interval operator+(const Interval& a, const Interval& b) {
    return {round::add_down(a.lo(), b.lo()), round::add_up(a.hi(), b.hi())};
}

inline Interval operator-(const Interval& a, const Interval& b) {
    return {round::sub_down(a.lo(), b.hi()), round::sub_up(a.hi(), b.lo())};
}

inline Interval operator-(const Interval& a) {
    return {-a.hi(), -a.lo()};
}

inline Interval operator*(const Interval& a, const Interval& b) {
    using round::mul_down;
    using round::mul_up;
    const double lo = std::min(std::min(mul_down(a.lo(), b.lo()), mul_down(a.lo(), b.hi())),
                               std::min(mul_down(a.hi(), b.lo()), mul_down(a.hi(), b.hi())));
    const double hi = std::max(std::max(mul_up(a.lo(), b.lo()), mul_up(a.lo(), b.hi())),
                               std::max(mul_up(a.hi(), b.lo()), mul_up(a.hi(), b.hi())));
    return {lo, hi};
}

inline Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains(0.0))
        throw DomainError("interval division by an interval containing zero");
    using round::div_down;
    using round::div_up;
    const double lo = std::min(std::min(div_down(a.lo(), b.lo()), div_down(a.lo(), b.hi())),
                               std::min(div_down(a.hi(), b.lo()), div_down(a.hi(), b.hi())));
    const double hi = std::max(std::max(div_up(a.lo(), b.lo()), div_up(a.lo(), b.hi())),
                               std::max(div_up(a.hi(), b.lo()), div_up(a.hi(), b.hi())));
    return {lo, hi};
}

/// max(|lo|, |hi|), exact.
inline double magnitude(const Interval& a) {
    return std::max(std::fabs(a.lo()), std::fabs(a.hi()));
}

/// Smallest interval containing both arguments.
inline Interval hull(const Interval& a, const Interval& b) {
    return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

/// hi - lo, rounded up so the width is never understated.
inline double width(const Interval& a) {
    return round::sub_up(a.hi(), a.lo());
}

inline bool subset(const Interval& a, const Interval& b) {
    return b.contains(a);
}

} // namespace ivexp

#endif
