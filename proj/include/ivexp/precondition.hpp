#ifndef IVEXP_PRECONDITION_HPP
#define IVEXP_PRECONDITION_HPP

// Similarity preconditioning exp(A) = P exp(P^-1 A P) P^-1. The Schur basis
// and the approximate inverse come from ordinary floating point (Eigen) and
// sit outside the trusted computing base: only the residual-verified interval
// enclosure of P^-1 carries rigor, so a poor P degrades tightness but never
// soundness.

#include <cstddef>

#include <Eigen/Dense>

#include "ivexp/errors.hpp"
#include "ivexp/exp_enclosure.hpp"
#include "ivexp/interval_matrix.hpp"

namespace ivexp {

struct SimilarityBasis {
    RealMatrix P;                    // approximate similarity transform
    IntervalMatrix P_inv_enclosure;  // verified enclosure of the exact P^-1
};

namespace detail {

inline Eigen::MatrixXd to_eigen(const RealMatrix& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    return out;
}

inline RealMatrix from_eigen(const Eigen::MatrixXd& m) {
    RealMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = m(i, j);
    return out;
}

} // namespace detail

/// Interval enclosure of the exact inverse of P. With R an approximate
/// inverse and [G] = I - R P, ||P^-1 - R|| <= ||R|| g / (1 - g) for
/// g = ||[G]|| < 1, so inflating every entry of R by that bound encloses the
/// true inverse entrywise. Throws SingularError when g >= 1.
inline IntervalMatrix verified_inverse(const RealMatrix& p) {
    if (p.rows() != p.cols()) throw ShapeError("verified_inverse: matrix must be square");
    const std::size_t n = p.rows();
    if (n == 0) throw ShapeError("verified_inverse: empty matrix");

    const Eigen::MatrixXd ep = detail::to_eigen(p);
    Eigen::MatrixXd er = ep.partialPivLu().inverse();
    if (!er.allFinite()) throw SingularError("verified_inverse: approximate inverse is not finite");
    const RealMatrix r = detail::from_eigen(er);

    const IntervalMatrix residual =
        mat_sub(IntervalMatrix::identity(n), mat_mul(IntervalMatrix(r), IntervalMatrix(p)));
    const double g = inf_norm(residual);
    if (!(g < 1)) throw SingularError("verified_inverse: residual norm not below 1");
    const double denom = round::sub_down(1.0, g);
    if (!(denom > 0)) throw SingularError("verified_inverse: residual norm too close to 1");
    const double h = round::div_up(round::mul_up(inf_norm(r), g), denom);

    IntervalMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out(i, j) = Interval(round::sub_down(r(i, j), h), round::add_up(r(i, j), h));
    return out;
}

/// Orthogonal basis P from a real Schur factorization A ~ P T P^T, paired
/// with a verified enclosure of P^-1. Enclosure correctness downstream never
/// depends on the quality of P.
inline SimilarityBasis schur_basis(const RealMatrix& a) {
    if (a.rows() != a.cols()) throw ShapeError("schur_basis: matrix must be square");
    Eigen::RealSchur<Eigen::MatrixXd> schur(detail::to_eigen(a));
    if (schur.info() != Eigen::Success)
        throw IterationError("schur_basis: Schur iteration did not converge");
    RealMatrix p = detail::from_eigen(schur.matrixU());
    IntervalMatrix p_inv = verified_inverse(p);
    return {std::move(p), std::move(p_inv)};
}

/// P [S]([P^-1][A]P, L, K) [P^-1] with interval products throughout. The
/// identity exp(A) = P exp(P^-1 A P) P^-1 holds pointwise and every step
/// encloses, so the result contains exp(A) for every A in [A].
inline EnclosureResult preconditioned_exp(const IntervalMatrix& a, const SimilarityBasis& basis,
                                          int L, int K) {
    if (!a.square()) throw ShapeError("preconditioned_exp: matrix must be square");
    if (a.rows() != basis.P.rows() || !basis.P_inv_enclosure.same_shape(a))
        throw ShapeError("preconditioned_exp: basis shape mismatch");
    const IntervalMatrix p(basis.P);
    const IntervalMatrix transformed = mat_mul(mat_mul(basis.P_inv_enclosure, a), p);
    const EnclosureResult inner = scaling_squaring_enclosure(transformed, L, K);
    IntervalMatrix out = mat_mul(mat_mul(p, inner.enclosure), basis.P_inv_enclosure);
    const double wid = width_norm(out);
    return {std::move(out), Method::scaling_squaring, {K, L}, wid};
}

} // namespace ivexp

#endif
