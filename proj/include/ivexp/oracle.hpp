#ifndef IVEXP_ORACLE_HPP
#define IVEXP_ORACLE_HPP

// Ground truth for validating the enclosure operators: the closed-form
// optimal hull of the 2x2 one-parameter family, endpoint/sampled lower
// bounds of the exact hull, the nilpotent bilinear family whose corner entry
// has a vertex-computable exact range, the epsilon-accuracy metric, and the
// width-vs-epsilon sweep of the comparison experiment.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ivexp/errors.hpp"
#include "ivexp/exp_enclosure.hpp"
#include "ivexp/interval.hpp"
#include "ivexp/interval_matrix.hpp"

namespace ivexp {

namespace detail {

// glibc's exp/expm1 are faithful to well under one ulp; two outward steps
// give a safe scalar enclosure (checked against a 50-digit reference in the
// test suite).
inline Interval exp_bounds(double t) {
    const double e = std::exp(t);
    double lo, hi;
    if (std::isinf(e)) {
        lo = round::kMaxFinite;
        hi = round::kInf;
    } else {
        lo = round::next_down(round::next_down(e));
        hi = round::next_up(round::next_up(e));
    }
    return {std::max(0.0, lo), hi};
}

inline Interval expm1_bounds(double t) {
    const double e = std::expm1(t);
    if (std::isinf(e)) return {round::kMaxFinite, round::kInf};
    return {std::max(-1.0, round::next_down(round::next_down(e))),
            round::next_up(round::next_up(e))};
}

// (e^t - 1)/t, extended by continuity to 1 at t = 0; increasing in t.
inline Interval exp_ratio_bounds(double t) {
    if (t == 0) return Interval(1.0);
    return expm1_bounds(t) / Interval(t);
}

// Deterministic uniform draw in [lo, hi] from raw generator bits, so output
// does not depend on the standard library's distribution implementation.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1p-53;
    return lo + (hi - lo) * u;
}

} // namespace detail

/// Optimal hull of {exp([[0,1],[0,t]]) : t in [t_lo, t_hi]}: both varying
/// entries are increasing in t, so the exact hull is spanned by the endpoint
/// values e^t and (e^t - 1)/t, outward-rounded.
inline IntervalMatrix example1_hull(double t_lo, double t_hi) {
    if (std::isnan(t_lo) || std::isnan(t_hi) || !(t_lo <= t_hi))
        throw DomainError("example1_hull: requires t_lo <= t_hi");
    IntervalMatrix out(2, 2);
    out(0, 0) = Interval(1.0);
    out(1, 0) = Interval(0.0);
    out(0, 1) = Interval(detail::exp_ratio_bounds(t_lo).lo(), detail::exp_ratio_bounds(t_hi).hi());
    out(1, 1) = Interval(detail::exp_bounds(t_lo).lo(), detail::exp_bounds(t_hi).hi());
    return out;
}

/// Tight enclosure of exp(M) for a point matrix.
inline IntervalMatrix point_exp_enclosure(const RealMatrix& m, const ExpParams& params) {
    return scaling_squaring_enclosure(IntervalMatrix(m), params.L, params.K).enclosure;
}

inline IntervalMatrix point_exp_enclosure(const RealMatrix& m) {
    const IntervalMatrix lifted(m);
    const ExpParams p = choose_params(lifted, Method::scaling_squaring);
    return scaling_squaring_enclosure(lifted, p.L, p.K).enclosure;
}

/// Hull of tight point enclosures of exp at the two bound matrices of [A];
/// a lower bound for the exact hull of exp([A]).
inline IntervalMatrix endpoint_hull_lower_bound(const IntervalMatrix& a, const ExpParams& params) {
    if (!a.square()) throw ShapeError("endpoint_hull_lower_bound: matrix must be square");
    return mat_hull(point_exp_enclosure(a.lower_bounds(), params),
                    point_exp_enclosure(a.upper_bounds(), params));
}

/// Hull of tight point enclosures over sampled members of [A]: vertex
/// matrices first (binary counting over non-degenerate entries), then
/// uniform interior samples. Deterministic for a fixed seed, and grows
/// monotonically with the sample count.
inline IntervalMatrix sampled_hull_lower_bound(const IntervalMatrix& a, int samples,
                                               std::uint64_t seed) {
    if (!a.square()) throw ShapeError("sampled_hull_lower_bound: matrix must be square");
    if (samples < 1) throw DomainError("sampled_hull_lower_bound: need at least one sample");
    const std::size_t n = a.rows();

    std::vector<std::size_t> wide; // indices of non-degenerate entries
    for (std::size_t idx = 0; idx < n * n; ++idx)
        if (!a(idx / n, idx % n).is_degenerate()) wide.push_back(idx);

    IntervalMatrix hull_acc;
    bool first = true;
    const auto absorb = [&](const RealMatrix& m) {
        IntervalMatrix enc = point_exp_enclosure(m);
        hull_acc = first ? enc : mat_hull(hull_acc, enc);
        first = false;
    };

    int taken = 0;
    const bool enumerable = wide.size() < 20;
    const std::uint64_t vertex_count = enumerable ? (std::uint64_t{1} << wide.size()) : 2;
    for (std::uint64_t mask = 0; mask < vertex_count && taken < samples; ++mask, ++taken) {
        RealMatrix m = a.lower_bounds();
        for (std::size_t b = 0; b < wide.size(); ++b) {
            const bool hi = enumerable ? ((mask >> b) & 1) : (mask == 1);
            if (hi) m(wide[b] / n, wide[b] % n) = a(wide[b] / n, wide[b] % n).hi();
        }
        absorb(m);
    }

    std::mt19937_64 rng(seed);
    for (; taken < samples; ++taken) {
        RealMatrix m = a.lower_bounds();
        for (const std::size_t idx : wide) {
            const Interval& e = a(idx / n, idx % n);
            m(idx / n, idx % n) = detail::uniform(rng, e.lo(), e.hi());
        }
        absorb(m);
    }
    return hull_acc;
}

// ---- the bilinear reduction family ------------------------------------------

/// (B, [x], [y]) with B n-by-n and the boxes n-by-1; every member of the
/// derived (2n+2)-square matrix family is nilpotent of index 4 and has
/// exp(A)_{1,2n+2} = x^T B y / 6.
struct BilinearInstance {
    RealMatrix B;
    IntervalMatrix x_box;
    IntervalMatrix y_box;

    std::size_t n() const { return B.rows(); }
};

inline void validate(const BilinearInstance& inst) {
    const std::size_t n = inst.B.rows();
    if (n == 0 || inst.B.cols() != n) throw ShapeError("bilinear instance: B must be square");
    if (inst.x_box.rows() != n || inst.x_box.cols() != 1 || inst.y_box.rows() != n ||
        inst.y_box.cols() != 1)
        throw ShapeError("bilinear instance: boxes must be n-by-1");
}

/// Block matrix with [x]^T, B, [y] on the first superdiagonal blocks.
inline IntervalMatrix bilinear_matrix(const BilinearInstance& inst) {
    validate(inst);
    const std::size_t n = inst.n();
    IntervalMatrix out(2 * n + 2, 2 * n + 2);
    for (std::size_t j = 0; j < n; ++j) out(0, 1 + j) = inst.x_box(j, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(1 + i, 1 + n + j) = Interval(inst.B(i, j));
    for (std::size_t i = 0; i < n; ++i) out(1 + n + i, 2 * n + 1) = inst.y_box(i, 0);
    return out;
}

/// Exact range of x^T B y / 6 over the boxes, outward-rounded. For fixed y
/// the form is linear in x, so the x-range is an interval dot product; the
/// extrema over y lie at vertices of [y], enumerated exhaustively.
inline Interval bilinear_exact_corner(const BilinearInstance& inst) {
    validate(inst);
    const std::size_t n = inst.n();
    if (n > 12) throw SizeError("bilinear_exact_corner: vertex enumeration limited to n <= 12");

    Interval range;
    bool first = true;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        round::DirectedSum lo, hi;
        for (std::size_t i = 0; i < n; ++i) {
            // c_i = (B y)_i for this vertex of [y]
            round::DirectedSum ci_lo, ci_hi;
            for (std::size_t j = 0; j < n; ++j) {
                const double yj = ((mask >> j) & 1) ? inst.y_box(j, 0).hi() : inst.y_box(j, 0).lo();
                const round::ProdParts p = detail::endpoint_product(inst.B(i, j), yj);
                ci_lo.add_exact(p.p, p.err);
                ci_hi.add_exact(p.p, p.err);
            }
            const Interval ci(ci_lo.lower(), ci_hi.upper());
            const detail::ProductRange r = detail::product_range(inst.x_box(i, 0), ci);
            lo.add_exact(r.min.p, r.min.err);
            hi.add_exact(r.max.p, r.max.err);
        }
        const Interval v(lo.lower(), hi.upper());
        range = first ? v : hull(range, v);
        first = false;
    }
    return range / Interval(6.0);
}

/// Largest absolute deviation between corresponding bounds of an enclosure
/// and a reference hull it must contain.
inline double eps_accuracy(const IntervalMatrix& enclosure, const IntervalMatrix& reference_hull) {
    if (!enclosure.same_shape(reference_hull)) throw ShapeError("eps_accuracy: shape mismatch");
    if (!subset(reference_hull, enclosure))
        throw ContainmentError("eps_accuracy: reference hull not contained in enclosure");
    double worst = 0;
    for (std::size_t i = 0; i < enclosure.rows(); ++i) {
        for (std::size_t j = 0; j < enclosure.cols(); ++j) {
            worst = std::max(worst, round::sub_up(reference_hull(i, j).lo(), enclosure(i, j).lo()));
            worst = std::max(worst, round::sub_up(enclosure(i, j).hi(), reference_hull(i, j).hi()));
        }
    }
    return worst;
}

// ---- width-vs-epsilon sweep ---------------------------------------------------

struct SweepRow {
    double epsilon;
    double width_horner;
    double width_ss;
    double width_lower_bound;
};

/// For each epsilon, encloses [A_eps] = A0 + [-eps, eps] E with the Horner and
/// scaling-squaring operators and records the width norms together with the
/// endpoint-hull lower bound. Rows come back in input order. The seed is
/// reserved for sampled lower-bound variants and does not affect the
/// endpoint bound.
inline std::vector<SweepRow> epsilon_sweep(const RealMatrix& a0, const std::vector<double>& eps_values,
                                           int K_horner, const ExpParams& ss_params,
                                           std::uint64_t /*seed*/ = 0) {
    if (a0.rows() != a0.cols()) throw ShapeError("epsilon_sweep: matrix must be square");
    for (std::size_t i = 0; i + 1 < eps_values.size(); ++i)
        if (!(eps_values[i] <= eps_values[i + 1]))
            throw DomainError("epsilon_sweep: epsilon grid must be ascending");
    std::vector<SweepRow> rows;
    rows.reserve(eps_values.size());
    for (const double eps : eps_values) {
        if (std::isnan(eps) || eps < 0) throw DomainError("epsilon_sweep: epsilon must be nonnegative");
        IntervalMatrix ae(a0.rows(), a0.cols());
        for (std::size_t i = 0; i < a0.rows(); ++i)
            for (std::size_t j = 0; j < a0.cols(); ++j)
                ae(i, j) = Interval(round::sub_down(a0(i, j), eps), round::add_up(a0(i, j), eps));
        SweepRow row;
        row.epsilon = eps;
        try {
            row.width_horner = horner_enclosure(ae, K_horner).width_norm;
            row.width_ss = scaling_squaring_enclosure(ae, ss_params.L, ss_params.K).width_norm;
            row.width_lower_bound = width_norm(
                endpoint_hull_lower_bound(ae, choose_params(ae, Method::scaling_squaring)));
        } catch (const DomainError& e) {
            throw DomainError("epsilon_sweep at epsilon=" + std::to_string(eps) + ": " + e.what());
        }
        rows.push_back(row);
    }
    return rows;
}

/// Least-squares description of one width curve: the rounding floor, the
/// log-log slope over the detected linear regime, and the linear growth
/// coefficient c1 of width ~ c0 + c1 eps there.
struct CurveFit {
    double floor = 0;
    double loglog_slope = 0;
    double coeff = 0;
    std::size_t regime_begin = 0;
    std::size_t regime_end = 0; // one past the last regime row
};

inline CurveFit fit_linear_regime(const std::vector<double>& eps, const std::vector<double>& width) {
    if (eps.size() != width.size() || eps.size() < 3)
        throw DomainError("fit_linear_regime: need at least three rows");
    CurveFit fit;
    fit.floor = round::kInf;
    for (const double w : width)
        if (w > 0) fit.floor = std::min(fit.floor, w);

    // divergence onset: first pairwise log-log slope above 1.5
    double onset_width = round::kInf;
    for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
        if (eps[i] <= 0 || width[i] <= 0 || width[i + 1] <= 0) continue;
        const double slope = (std::log(width[i + 1]) - std::log(width[i])) /
                             (std::log(eps[i + 1]) - std::log(eps[i]));
        if (slope > 1.5) {
            onset_width = width[i];
            break;
        }
    }

    // linear regime: widths clear of both the floor and the divergence
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < eps.size(); ++i)
        if (eps[i] > 0 && width[i] >= 10 * fit.floor && width[i] <= 0.1 * onset_width)
            idx.push_back(i);
    if (idx.size() < 2) throw DomainError("fit_linear_regime: no linear regime detected");
    fit.regime_begin = idx.front();
    fit.regime_end = idx.back() + 1;

    // slope of log(width) against log(eps)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const std::size_t i : idx) {
        const double x = std::log(eps[i]);
        const double y = std::log(width[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(idx.size());
    fit.loglog_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);

    // width ~ c0 + c1 eps over the same rows
    sx = sy = sxx = sxy = 0;
    for (const std::size_t i : idx) {
        sx += eps[i];
        sy += width[i];
        sxx += eps[i] * eps[i];
        sxy += eps[i] * width[i];
    }
    fit.coeff = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return fit;
}

} // namespace ivexp

#endif
