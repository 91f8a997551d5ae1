#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "framekernel/frame_core.hpp"

namespace framekernel {

/// Kernel values K(t_s, t_t) over all grid pairs; column t is the kernel section K_t.
struct KernelMatrix {
    Grid grid;
    Matrix values;

    [[nodiscard]] Vector section(Index t) const { return values.col(t); }
};

/// Rows are the samples of psi_n = (T*T)^{-1/2} phi_n.
struct CanonicalTightFrame {
    Grid grid;
    Matrix vectors;

    [[nodiscard]] FrameSystem as_frame_system() const { return FrameSystem(grid, vectors); }
};

/// Pseudo-inverse of the frame operator T*T acting on grid values. The matrix is
/// self-adjoint for the weighted inner product, i.e. W * L is symmetric.
struct LaxMilgramOperator {
    Grid grid;
    Matrix matrix;

    [[nodiscard]] GridFunction apply(const GridFunction& g) const {
        grid.check_length(g);
        return matrix * g;
    }
};

/// Polar factor of the analysis operator, expressed in orthonormal grid coordinates
/// (f -> W^{1/2} f). With A = Phi W^{1/2} and S~ = A^T A, `unitary` = A S~^{-1/2} and
/// `sqrt_frame_operator` = S~^{1/2}, so unitary * sqrt_frame_operator = A.
struct PolarFactor {
    Matrix unitary;
    Matrix sqrt_frame_operator;
};

namespace detail {

inline void require_nonzero_span(const SpectralDecomposition& d, double rank_tol) {
    if (retained_rank(d, rank_tol) == 0) {
        fail(ErrorCode::ZeroSpan, "frame vectors span the zero space");
    }
}

inline Matrix symmetrized(const Matrix& m) { return (m + m.transpose()) * 0.5; }

}  // namespace detail

/// K(s, t) = sum_n phi_n(s) phi_n(t)
inline KernelMatrix naive_kernel(const FrameSystem& fs) {
    return KernelMatrix{fs.grid(), detail::symmetrized(fs.vectors().transpose() * fs.vectors())};
}

/// K^G(s, t) = <l(s), G^+ l(t)>: the reproducing kernel of the span of the system.
inline KernelMatrix rk_kernel(const FrameSystem& fs, double rank_tol = kDefaultRankTol) {
    const auto d = sym_eig(build_gramian(fs).matrix);
    detail::require_nonzero_span(d, rank_tol);
    const Matrix g_pinv = pinv(d, rank_tol).matrix();
    const Matrix& phi = fs.vectors();
    return KernelMatrix{fs.grid(), detail::symmetrized(phi.transpose() * (g_pinv * phi))};
}

/// psi columns are G^{-1/2} l(t).
inline CanonicalTightFrame canonical_tight(const FrameSystem& fs, double rank_tol = kDefaultRankTol) {
    const auto d = sym_eig(build_gramian(fs).matrix);
    detail::require_nonzero_span(d, rank_tol);
    return CanonicalTightFrame{fs.grid(), inv_sqrt(d, rank_tol).matrix() * fs.vectors()};
}

/// sum_n psi_n(s) psi_n(t)
inline KernelMatrix kernel_from_tight(const CanonicalTightFrame& ctf) {
    return KernelMatrix{ctf.grid, detail::symmetrized(ctf.vectors.transpose() * ctf.vectors)};
}

/// max_t |f(t) - <K_t, f>|. Zero (up to rounding) for f in the span when k is the
/// reproducing kernel; for other f it is the sup norm of the component of f orthogonal
/// to the span.
inline double verify_reproducing(const FrameSystem& fs, const KernelMatrix& k, const GridFunction& f) {
    fs.grid().check_length(f);
    detail::require(k.values.rows() == fs.points() && k.values.cols() == fs.points(), ErrorCode::DimensionMismatch,
                    "kernel size differs from grid size");
    const Vector wf = fs.grid().weight_vector().cwiseProduct(f);
    const Vector reproduced = k.values.transpose() * wf;
    return (f - reproduced).cwiseAbs().maxCoeff();
}

/// L = (T*T)^+ in the weighted inner product. Computed as W^{-1/2} (A^T A)^+ W^{1/2}
/// with A = Phi W^{1/2}.
inline LaxMilgramOperator lax_milgram(const FrameSystem& fs, double rank_tol = kDefaultRankTol) {
    const Matrix a = fs.isometric_vectors();
    const auto d = sym_eig(SymMatrix(a.transpose() * a));
    detail::require_nonzero_span(d, rank_tol);
    const Vector sqrt_w = fs.grid().weight_vector().cwiseSqrt();
    const Matrix l = sqrt_w.cwiseInverse().asDiagonal() * pinv(d, rank_tol).matrix() * sqrt_w.asDiagonal();
    return LaxMilgramOperator{fs.grid(), l};
}

/// |sum_n <f, phi_n><phi_n, L g> - <f, g>|
inline double verify_lax_identity(const FrameSystem& fs, const LaxMilgramOperator& lax, const GridFunction& f,
                                  const GridFunction& g) {
    fs.grid().check_length(f);
    fs.grid().check_length(g);
    detail::require(lax.matrix.rows() == fs.points() && lax.matrix.cols() == fs.points(),
                    ErrorCode::DimensionMismatch, "operator size differs from grid size");
    const double form = analysis(fs, f).dot(analysis(fs, lax.apply(g)));
    return std::abs(form - fs.grid().inner(f, g));
}

struct IsometryReport {
    double lhs = 0.0;  ///< ||T* c||^2
    double rhs = 0.0;  ///< c^T G c
};

inline IsometryReport isometry_check(const FrameSystem& fs, const CoeffSeq& c) {
    fs.check_coefficients(c);
    const GridFunction f = synthesis(fs, c);
    return IsometryReport{fs.grid().norm_squared(f), c.dot(gram_apply(build_gramian(fs), c))};
}

/// T = U (T*T)^{1/2}. Only sign-invariant quantities of U (U^T U, singular values)
/// are stable across eigensolver conventions.
inline PolarFactor polar_unitary(const FrameSystem& fs, double rank_tol = kDefaultRankTol) {
    const Matrix a = fs.isometric_vectors();
    const auto d = sym_eig(SymMatrix(a.transpose() * a));
    detail::require_nonzero_span(d, rank_tol);
    return PolarFactor{a * inv_sqrt(d, rank_tol).matrix(), psd_sqrt(d, rank_tol).matrix()};
}

}  // namespace framekernel
