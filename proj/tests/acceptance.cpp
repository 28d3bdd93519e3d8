// Acceptance suite: one line per criterion, pinned tolerances, nonzero exit
// on any failure. Each criterion is self-contained and carries its own
// timing budget where one applies.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ivexp/exp_enclosure.hpp"
#include "ivexp/interval_matrix.hpp"
#include "ivexp/oracle.hpp"
#include "ivexp/precondition.hpp"

namespace {

using namespace ivexp;
using Clock = std::chrono::steady_clock;
using Rational = boost::multiprecision::cpp_rational;

int g_failures = 0;

void report(int number, const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number, name,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1p-53);
}

IntervalMatrix example1_matrix() {
    IntervalMatrix a(2, 2);
    a(0, 0) = Interval(0.0);
    a(0, 1) = Interval(1.0);
    a(1, 0) = Interval(0.0);
    a(1, 1) = Interval(-3.0, -2.0);
    return a;
}

RealMatrix bochev_matrix() {
    RealMatrix m(3, 3);
    const double v[9] = {-131, 19, 18, -390, 56, 54, -387, 57, 52};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) m(i, j) = v[i * 3 + j];
    return m;
}

bool close(double value, double target, double tol) { return std::fabs(value - target) <= tol; }

// ---- criterion 1: reproduction of the printed 2x2 enclosures -----------------

void criterion1() {
    const auto start = Clock::now();
    const IntervalMatrix a = example1_matrix();
    const double tol = 5e-4;
    bool ok = true;
    std::string detail;

    const auto t = taylor_enclosure(a, 16).enclosure;
    ok &= close(t(0, 1).lo(), -1.2092, tol) && close(t(0, 1).hi(), 1.9582, tol);
    ok &= close(t(1, 1).lo(), -6.2557, tol) && close(t(1, 1).hi(), 6.4409, tol);
    ok &= close(t(0, 0).lo(), 1.0, tol) && close(t(0, 0).hi(), 1.0, tol);
    ok &= close(t(1, 0).lo(), 0.0, tol) && close(t(1, 0).hi(), 0.0, tol);

    const auto h = horner_enclosure(a, 16).enclosure;
    ok &= close(h(0, 1).lo(), -0.0706, tol) && close(h(0, 1).hi(), 0.7352, tol);
    ok &= close(h(1, 1).lo(), -1.2056, tol) && close(h(1, 1).hi(), 1.2117, tol);
    ok &= close(h(0, 0).lo(), 1.0, tol) && close(h(0, 0).hi(), 1.0, tol);

    const auto s = scaling_squaring_enclosure(a, 10, 10).enclosure;
    ok &= close(s(0, 1).lo(), 0.3165, tol) && close(s(0, 1).hi(), 0.4325, tol);
    ok &= close(s(1, 1).lo(), 0.0496, tol) && close(s(1, 1).hi(), 0.1355, tol);
    ok &= close(s(0, 0).lo(), 1.0, tol) && close(s(0, 0).hi(), 1.0, tol);

    const bool contains_hull = subset(example1_hull(-3, -2), s);
    ok &= contains_hull;

    const double elapsed = seconds_since(start);
    ok &= elapsed < 1.0;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "taylor/horner/ss match printed bounds at 5e-4, hull contained: %s, %.3fs",
                  contains_hull ? "yes" : "no", elapsed);
    report(1, "printed 2x2 enclosures reproduced", ok, buf);
}

// ---- criterion 2: proximity to the optimal hull ------------------------------

void criterion2() {
    const auto s = scaling_squaring_enclosure(example1_matrix(), 10, 10).enclosure;
    const double eps = eps_accuracy(s, example1_hull(-3, -2));
    char buf[96];
    std::snprintf(buf, sizeof buf, "eps_accuracy = %.3e (< 1e-3)", eps);
    report(2, "scaling-squaring is close to the optimal hull", eps < 1e-3, buf);
}

// ---- criterion 3: the hard 3x3 matrix ----------------------------------------

void criterion3() {
    const auto start = Clock::now();
    const IntervalMatrix a(bochev_matrix());

    const double horner_width = horner_enclosure(a, 510).width_norm;
    const double plain_width = scaling_squaring_enclosure(a, 12, 12).width_norm;
    const auto basis = schur_basis(bochev_matrix());
    const double pre_width = preconditioned_exp(a, basis, 12, 12).width_norm;

    const bool horner_useless = horner_width > 1e6;
    const bool plain_in_band = plain_width >= 7.2e-7 && plain_width <= 7.2e-5;
    const bool pre_in_band = pre_width >= 7.2e-12 && pre_width <= 7.2e-10;
    const bool improved = plain_width / pre_width >= 1e3;
    const double elapsed = seconds_since(start);

    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "horner(510) width %.2e, ss(12,12) %.3e, preconditioned %.3e, gain %.1e, %.2fs",
                  horner_width, plain_width, pre_width, plain_width / pre_width, elapsed);
    report(3, "hard matrix: plain horner fails, scaled and preconditioned widths in band",
           horner_useless && plain_in_band && pre_in_band && improved && elapsed < 10.0, buf);
}

// ---- criterion 4: three-phase sweep ------------------------------------------

void criterion4() {
    const auto start = Clock::now();
    RealMatrix a0 = bochev_matrix();
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) a0(i, j) *= 0.1;

    std::vector<double> grid;
    for (int i = 0; i < 40; ++i)
        grid.push_back(std::pow(10.0, -16.0 + 16.0 * i / 39.0));

    const auto rows = epsilon_sweep(a0, grid, 170, ExpParams{10, 10}, 0);
    std::vector<double> eps, wh, ws;
    for (const auto& r : rows) {
        eps.push_back(r.epsilon);
        wh.push_back(r.width_horner);
        ws.push_back(r.width_ss);
    }

    bool ok = true;
    std::string why;
    double slope_h = 0, slope_s = 0, coeff_h = 0, coeff_s = 0;
    try {
        const CurveFit fh = fit_linear_regime(eps, wh);
        const CurveFit fs = fit_linear_regime(eps, ws);
        slope_h = fh.loglog_slope;
        slope_s = fs.loglog_slope;
        coeff_h = fh.coeff;
        coeff_s = fs.coeff;
        // three phases: a flat row before the regime, the regime itself, and
        // a divergence row after it
        ok &= fh.regime_begin > 0 && fh.regime_end < rows.size();
        ok &= fs.regime_begin > 0 && fs.regime_end < rows.size();
        ok &= std::fabs(slope_h - 1.0) <= 0.1;
        ok &= std::fabs(slope_s - 1.0) <= 0.1;
        ok &= coeff_s >= 8.59e2 && coeff_s <= 8.59e4;   // one order around 8.59e3
        ok &= coeff_h >= 2.86e9 && coeff_h <= 2.86e11;  // one order around 2.86e10
        ok &= coeff_h / coeff_s >= 1e4;
    } catch (const Error& e) {
        ok = false;
        why = e.what();
    }
    const double elapsed = seconds_since(start);
    ok &= elapsed < 60.0;
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "slopes %.3f/%.3f, coeff ss %.3e (~8.59e3), horner %.3e (~2.86e10), ratio %.1e, %.1fs %s",
                  slope_s, slope_h, coeff_s, coeff_h, coeff_h / coeff_s, elapsed, why.c_str());
    report(4, "three-phase sweep with the reported linear-regime slopes", ok, buf);
}

// ---- criterion 5: containment over random interval matrices ------------------

void criterion5() {
    std::mt19937_64 rng(20240501);
    long violations = 0, checks = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng() % 5;
        IntervalMatrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double mid = uniform(rng, -1.0, 1.0);
                const double rad = uniform(rng, 0.0, 0.25); // widths at most 0.5
                a(i, j) = Interval(mid - rad, mid + rad);
            }
        const double norm = inf_norm(a);
        if (norm > 4.0) {
            const double s = 3.99 / norm;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    a(i, j) = Interval(a(i, j).lo() * s, a(i, j).hi() * s);
        }
        const ExpParams pt = choose_params(a, Method::taylor);
        const ExpParams ps = choose_params(a, Method::scaling_squaring);
        const IntervalMatrix t = taylor_enclosure(a, pt.K).enclosure;
        const IntervalMatrix h = horner_enclosure(a, pt.K).enclosure;
        const IntervalMatrix s = scaling_squaring_enclosure(a, ps.L, ps.K).enclosure;
        for (int member = 0; member < 200; ++member) {
            RealMatrix m(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    m(i, j) = uniform(rng, a(i, j).lo(), a(i, j).hi());
            const IntervalMatrix point = point_exp_enclosure(m);
            ++checks;
            if (!subset(point, t) || !subset(point, h) || !subset(point, s)) ++violations;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%ld point enclosures in [T],[H],[S], %ld violations", checks,
                  violations);
    report(5, "member exponentials contained (50 matrices x 200 members)", violations == 0, buf);
}

// ---- criterion 6: bilinear corner containment ---------------------------------

void criterion6() {
    std::mt19937_64 rng(20240602);
    long violations = 0, checks = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng() % 3;
        BilinearInstance inst{RealMatrix(n, n), IntervalMatrix(n, 1), IntervalMatrix(n, 1)};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) inst.B(i, j) = uniform(rng, -2.0, 2.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double a1 = uniform(rng, -1, 1), b1 = uniform(rng, -1, 1);
            inst.x_box(i, 0) = Interval(std::min(a1, b1), std::max(a1, b1));
            const double a2 = uniform(rng, -1, 1), b2 = uniform(rng, -1, 1);
            inst.y_box(i, 0) = Interval(std::min(a2, b2), std::max(a2, b2));
        }
        const IntervalMatrix a = bilinear_matrix(inst);
        const Interval corner = bilinear_exact_corner(inst);
        const std::size_t last = a.rows() - 1;
        const ExpParams pt = choose_params(a, Method::taylor);
        const ExpParams ps = choose_params(a, Method::scaling_squaring);
        ++checks;
        if (!taylor_enclosure(a, pt.K).enclosure(0, last).contains(corner) ||
            !horner_enclosure(a, pt.K).enclosure(0, last).contains(corner) ||
            !scaling_squaring_enclosure(a, ps.L, ps.K).enclosure(0, last).contains(corner))
            ++violations;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%ld instances, %ld violations", checks, violations);
    report(6, "vertex-exact bilinear corner contained in every method", violations == 0, buf);
}

// ---- criterion 7: inclusion monotonicity --------------------------------------

void criterion7() {
    std::mt19937_64 rng(20240707);
    long violations = 0, checks = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 4;
        IntervalMatrix outer(n, n), inner(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double mid = uniform(rng, -0.8, 0.8);
                const double rad = uniform(rng, 0.0, 0.3);
                outer(i, j) = Interval(mid - rad, mid + rad);
                const double lo = uniform(rng, outer(i, j).lo(), outer(i, j).hi());
                const double hi = uniform(rng, lo, outer(i, j).hi());
                inner(i, j) = Interval(lo, hi);
            }
        const ExpParams pt = choose_params(outer, Method::taylor);
        const ExpParams ps = choose_params(outer, Method::scaling_squaring);
        ++checks;
        if (!subset(taylor_enclosure(inner, pt.K).enclosure,
                    taylor_enclosure(outer, pt.K).enclosure) ||
            !subset(horner_enclosure(inner, pt.K).enclosure,
                    horner_enclosure(outer, pt.K).enclosure) ||
            !subset(scaling_squaring_enclosure(inner, ps.L, ps.K).enclosure,
                    scaling_squaring_enclosure(outer, ps.L, ps.K).enclosure))
            ++violations;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%ld nested pairs, %ld violations", checks, violations);
    report(7, "inclusion monotonicity of [T],[H],[S]", violations == 0, buf);
}

// ---- criterion 8: degenerate taylor/horner agreement --------------------------

void criterion8() {
    std::mt19937_64 rng(20240808);
    long violations = 0, checks = 0;
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 5;
        RealMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = uniform(rng, -1.0, 1.0);
        const double norm = inf_norm(IntervalMatrix(m));
        if (norm > 2.0)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) m(i, j) *= 1.99 / norm;
        const IntervalMatrix a(m);
        const ExpParams p = choose_params(a, Method::taylor);
        const IntervalMatrix t = taylor_enclosure(a, p.K).enclosure;
        const IntervalMatrix h = horner_enclosure(a, p.K).enclosure;
        // one ulp at the scale of the results: entries of the exponential can
        // be arbitrarily small, so the unit lives at the matrix norm
        const double scale = std::max({1.0, inf_norm(t), inf_norm(h)});
        const double ulp = round::next_up(scale) - scale;
        ++checks;
        double w = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                w = std::max(w, std::fabs(t(i, j).lo() - h(i, j).lo()) / ulp);
                w = std::max(w, std::fabs(t(i, j).hi() - h(i, j).hi()) / ulp);
            }
        worst = std::max(worst, w);
        if (w > 8.0) ++violations;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%ld matrices, worst bound gap %.2f ulp at result scale",
                  checks, worst);
    report(8, "degenerate taylor/horner bounds within 8 ulp", violations == 0, buf);
}

// ---- criterion 9: rho against exact rationals ----------------------------------

void criterion9() {
    bool ok = true;
    double worst_excess = 0;
    const double alphas[] = {0, 0.5, 1, 3, 10};
    for (const double a : alphas) {
        double prev_in_k = std::numeric_limits<double>::infinity();
        for (int K = 5; K <= 30; ++K) {
            if (!(a < K + 2)) continue;
            const double r = rho(a, K);
            Rational num = 1;
            for (int k = 1; k <= K + 1; ++k) num *= Rational(a) / k;
            const Rational exact = num / (1 - Rational(a) / (K + 2));
            if (Rational(r) < exact) ok = false; // must be an upper bound
            if (a > 0) {
                const double excess =
                    static_cast<double>((Rational(r) - exact) / exact);
                worst_excess = std::max(worst_excess, excess);
                if (excess >= 1e-12) ok = false;
                if (!(r < prev_in_k)) ok = false; // decreasing in K
                prev_in_k = r;
            }
        }
    }
    for (int K = 5; K <= 30; ++K) {
        double prev = -1;
        for (const double a : alphas) {
            if (!(a < K + 2)) continue;
            const double r = rho(a, K);
            if (!(r > prev)) ok = false; // increasing in alpha
            prev = r;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "upper bound on the whole grid, worst relative excess %.2e",
                  worst_excess);
    report(9, "rho dominates the exact remainder bound tightly and monotonically", ok, buf);
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (g_failures) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
