#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "framekernel/spectral.hpp"

namespace framekernel {

/// Coefficient sequence, one entry per frame vector.
using CoeffSeq = Vector;
/// Values of a function at the grid points.
using GridFunction = Vector;

/// Discretized index set: distinct sample points carrying positive quadrature weights.
/// The weights define the ambient inner product <f, g> = sum_i w_i f(t_i) g(t_i).
class Grid {
public:
    Grid(std::vector<double> points, std::vector<double> weights)
        : points_(std::move(points)), weights_(std::move(weights)) {
        detail::require(!points_.empty(), ErrorCode::InvalidArgument, "grid needs at least one point");
        detail::require(points_.size() == weights_.size(), ErrorCode::DimensionMismatch,
                        "grid points and weights differ in length");
        for (std::size_t i = 0; i < points_.size(); ++i) {
            detail::require(std::isfinite(points_[i]) && std::isfinite(weights_[i]), ErrorCode::InvalidArgument,
                            "grid entries must be finite");
            detail::require(weights_[i] > 0.0, ErrorCode::InvalidArgument, "grid weights must be positive");
        }
        std::vector<double> sorted = points_;
        std::sort(sorted.begin(), sorted.end());
        detail::require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), ErrorCode::InvalidArgument,
                        "grid points must be pairwise distinct");
    }

    /// Points 0, 1, ..., m-1 with unit weights.
    static Grid unit(Index m) {
        std::vector<double> points(static_cast<std::size_t>(m));
        std::iota(points.begin(), points.end(), 0.0);
        return Grid(std::move(points), std::vector<double>(static_cast<std::size_t>(m), 1.0));
    }

    [[nodiscard]] Index size() const noexcept { return static_cast<Index>(points_.size()); }
    [[nodiscard]] const std::vector<double>& points() const noexcept { return points_; }
    [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }

    [[nodiscard]] Vector weight_vector() const {
        return Eigen::Map<const Vector>(weights_.data(), size());
    }

    [[nodiscard]] double inner(const GridFunction& f, const GridFunction& g) const {
        check_length(f);
        check_length(g);
        return (weight_vector().array() * f.array() * g.array()).sum();
    }

    [[nodiscard]] double norm_squared(const GridFunction& f) const { return inner(f, f); }

    void check_length(const GridFunction& f) const {
        detail::require(f.size() == size(), ErrorCode::DimensionMismatch, "grid function length differs from grid size");
    }

private:
    std::vector<double> points_;
    std::vector<double> weights_;
};

/// N vectors sampled on a grid: row n of `vectors()` holds phi_n(t_1..t_M), and
/// column t is the coefficient vector l(t) = (phi_n(t))_n.
class FrameSystem {
public:
    FrameSystem(Grid grid, Matrix vectors) : grid_(std::move(grid)), vectors_(std::move(vectors)) {
        detail::require(vectors_.rows() >= 1, ErrorCode::InvalidArgument, "frame system needs at least one vector");
        detail::require(vectors_.cols() == grid_.size(), ErrorCode::DimensionMismatch,
                        "frame vectors must have one sample per grid point");
        detail::require(vectors_.allFinite(), ErrorCode::InvalidArgument, "frame vectors must be finite");
    }

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] const Matrix& vectors() const noexcept { return vectors_; }
    /// N
    [[nodiscard]] Index count() const noexcept { return vectors_.rows(); }
    /// M
    [[nodiscard]] Index points() const noexcept { return vectors_.cols(); }

    [[nodiscard]] FrameSystem scaled(double alpha) const { return FrameSystem(grid_, alpha * vectors_); }

    /// Phi * W, the matrix of the analysis operator.
    [[nodiscard]] Matrix weighted_vectors() const { return vectors_ * grid_.weight_vector().asDiagonal(); }

    /// Phi * W^{1/2}: frame vectors in orthonormal grid coordinates f -> W^{1/2} f.
    [[nodiscard]] Matrix isometric_vectors() const {
        return vectors_ * grid_.weight_vector().cwiseSqrt().asDiagonal();
    }

    void check_coefficients(const CoeffSeq& c) const {
        detail::require(c.size() == count(), ErrorCode::DimensionMismatch, "coefficient length differs from N");
    }

private:
    Grid grid_;
    Matrix vectors_;
};

struct Gramian {
    SymMatrix matrix;
    /// N
    Index vectors = 0;
    /// M; zero when the entries are exact integrals rather than grid sums.
    Index points = 0;
};

struct FrameBounds {
    double lower = 0.0;
    double upper = 0.0;
    Index rank = 0;
    bool spans_ambient = false;
    bool is_frame = false;
    bool is_parseval = false;
    double rank_tol = kDefaultRankTol;
    /// Smallest retained Gramian eigenvalue: the lower bound for the span of the system.
    double lower_on_span = 0.0;
};

inline constexpr double kParsevalTol = 1e-9;

/// G_mn = <phi_m, phi_n> in the weighted grid inner product.
inline Gramian build_gramian(const FrameSystem& fs) {
    const Matrix g = fs.weighted_vectors() * fs.vectors().transpose();
    return Gramian{SymMatrix(g), fs.count(), fs.points()};
}

/// T f = (<phi_n, f>)_n
inline CoeffSeq analysis(const FrameSystem& fs, const GridFunction& f) {
    fs.grid().check_length(f);
    return fs.weighted_vectors() * f;
}

/// T* c = sum_n c_n phi_n
inline GridFunction synthesis(const FrameSystem& fs, const CoeffSeq& c) {
    fs.check_coefficients(c);
    return fs.vectors().transpose() * c;
}

/// T* T f = sum_n <phi_n, f> phi_n
inline GridFunction frame_operator_apply(const FrameSystem& fs, const GridFunction& f) {
    return synthesis(fs, analysis(fs, f));
}

/// M x M matrix of T* T acting on grid values: Phi^T Phi W.
inline Matrix frame_operator_matrix(const FrameSystem& fs) {
    return fs.vectors().transpose() * fs.weighted_vectors();
}

inline CoeffSeq gram_apply(const Gramian& g, const CoeffSeq& c) {
    detail::require(c.size() == g.matrix.dim(), ErrorCode::DimensionMismatch, "coefficient length differs from N");
    return g.matrix.matrix() * c;
}

/// Bounds from a Gramian spectrum; `ambient_dim` is the dimension of the space the
/// vectors live in.
inline FrameBounds frame_bounds_from_spectrum(const SpectralDecomposition& d, Index ambient_dim, double rank_tol) {
    FrameBounds b;
    b.rank_tol = rank_tol;
    b.upper = std::max(d.max_eigenvalue(), 0.0);
    b.rank = retained_rank(d, rank_tol);
    b.spans_ambient = b.rank == ambient_dim;
    if (b.rank > 0) {
        b.lower_on_span = std::max(d.eigenvalues(b.rank - 1), 0.0);
    }
    b.lower = b.spans_ambient ? b.lower_on_span : 0.0;
    b.is_frame = b.spans_ambient && b.lower > 0.0;
    b.is_parseval = b.is_frame && std::max(std::abs(b.lower - 1.0), std::abs(b.upper - 1.0)) <= kParsevalTol;
    return b;
}

/// Optimal frame bounds of the system for the grid function space. The nonzero spectrum of
/// T T* (the Gramian) equals that of T* T, so both bounds come from the N x N Gramian.
inline FrameBounds compute_frame_bounds(const FrameSystem& fs, double rank_tol = kDefaultRankTol) {
    return frame_bounds_from_spectrum(sym_eig(build_gramian(fs).matrix), fs.points(), rank_tol);
}

/// l(t) = (phi_n(t))_n for grid index t.
inline CoeffSeq eval_l(const FrameSystem& fs, Index t_index) {
    detail::require(t_index >= 0 && t_index < fs.points(), ErrorCode::InvalidIndex, "grid index out of range");
    return fs.vectors().col(t_index);
}

}  // namespace framekernel
