#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "framekernel/error.hpp"

namespace framekernel {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative eigenvalue cutoff used wherever an inverse of a Gramian is formed.
inline constexpr double kDefaultRankTol = 1e-10;

/// Retained eigenvalues in [-kClampJitter, 0) are treated as exact zeros.
inline constexpr double kClampJitter = 1e-12;

namespace detail {

inline bool all_finite(const Matrix& a) {
    return a.allFinite();
}

}  // namespace detail

/// Dense real symmetric matrix. Construction symmetrizes the input as (A + A^T) / 2,
/// so entries are exactly symmetric afterwards.
class SymMatrix {
public:
    explicit SymMatrix(const Matrix& a) {
        detail::require(a.rows() >= 1 && a.rows() == a.cols(), ErrorCode::InvalidMatrix,
                        "symmetric matrix must be square with dimension >= 1");
        detail::require(detail::all_finite(a), ErrorCode::InvalidMatrix, "matrix has non-finite entries");
        values_ = (a + a.transpose()) * 0.5;
    }

    static SymMatrix identity(Index n) { return SymMatrix(Matrix::Identity(n, n)); }
    static SymMatrix diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }

    [[nodiscard]] Index dim() const noexcept { return values_.rows(); }
    [[nodiscard]] const Matrix& matrix() const noexcept { return values_; }
    [[nodiscard]] double operator()(Index i, Index j) const { return values_(i, j); }

private:
    Matrix values_;
};

/// Eigensystem of a SymMatrix. Eigenvalues are sorted non-increasing and column k of
/// `eigenvectors` belongs to eigenvalue k.
struct SpectralDecomposition {
    Vector eigenvalues;
    Matrix eigenvectors;
    Index source_dim = 0;

    [[nodiscard]] double max_eigenvalue() const { return eigenvalues(0); }
    [[nodiscard]] double min_eigenvalue() const { return eigenvalues(eigenvalues.size() - 1); }
    [[nodiscard]] Matrix reconstruct() const {
        return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
    }
};

/// Convergence settings of the cyclic Jacobi solver.
inline constexpr double kJacobiOffDiagonalTol = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
    double sum = 0.0;
    for (Index j = 0; j < a.cols(); ++j) {
        for (Index i = 0; i < a.rows(); ++i) {
            if (i != j) {
                sum += a(i, j) * a(i, j);
            }
        }
    }
    return std::sqrt(sum);
}

// One plane rotation zeroing a(p, q); accumulates into v.
inline void jacobi_rotate(Matrix& a, Matrix& v, Index p, Index q) {
    const double apq = a(p, q);
    if (apq == 0.0) {
        return;
    }
    const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const Index n = a.rows();
    for (Index k = 0; k < n; ++k) {
        const double akp = a(k, p);
        const double akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
    }
    for (Index k = 0; k < n; ++k) {
        const double apk = a(p, k);
        const double aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    for (Index k = 0; k < n; ++k) {
        const double vkp = v(k, p);
        const double vkq = v(k, q);
        v(k, p) = c * vkp - s * vkq;
        v(k, q) = s * vkp + c * vkq;
    }
}

}  // namespace detail

/// Cyclic Jacobi eigendecomposition. Sweeps rows in fixed order until the off-diagonal
/// Frobenius norm drops below kJacobiOffDiagonalTol * ||A||_F (at most kJacobiMaxSweeps).
/// Each eigenvector is sign-normalized so its largest-magnitude component is positive.
inline SpectralDecomposition sym_eig(const SymMatrix& sym) {
    Matrix a = sym.matrix();
    detail::require(detail::all_finite(a), ErrorCode::InvalidMatrix, "matrix has non-finite entries");
    const Index n = a.rows();
    Matrix v = Matrix::Identity(n, n);
    const double threshold = kJacobiOffDiagonalTol * a.norm();

    for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        if (detail::off_diagonal_norm(a) <= threshold) {
            break;
        }
        for (Index p = 0; p + 1 < n; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                detail::jacobi_rotate(a, v, p, q);
            }
        }
    }

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return a(i, i) > a(j, j); });

    SpectralDecomposition out;
    out.source_dim = n;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Index k = 0; k < n; ++k) {
        const Index src = order[static_cast<std::size_t>(k)];
        out.eigenvalues(k) = a(src, src);
        Vector col = v.col(src);
        Index pivot = 0;
        col.cwiseAbs().maxCoeff(&pivot);
        if (col(pivot) < 0.0) {
            col = -col;
        }
        out.eigenvectors.col(k) = col;
    }
    return out;
}

/// Absolute eigenvalue cutoff: rank_tol times the largest eigenvalue magnitude.
inline double rank_threshold(const SpectralDecomposition& d, double rank_tol) {
    return rank_tol * d.eigenvalues.cwiseAbs().maxCoeff();
}

inline bool is_retained(double lambda, double threshold) {
    return std::abs(lambda) > threshold;
}

/// Number of eigenvalues whose magnitude exceeds rank_tol * max |lambda|.
inline Index retained_rank(const SpectralDecomposition& d, double rank_tol) {
    detail::require(rank_tol >= 0.0, ErrorCode::InvalidArgument, "rank_tol must be >= 0");
    const double threshold = rank_threshold(d, rank_tol);
    Index rank = 0;
    for (Index k = 0; k < d.eigenvalues.size(); ++k) {
        rank += is_retained(d.eigenvalues(k), threshold) ? 1 : 0;
    }
    return rank;
}

/// Q * diag(fn(lambda_k) on retained spectrum, 0 elsewhere) * Q^T.
template <typename Fn>
SymMatrix spectral_function(const SpectralDecomposition& d, double rank_tol, Fn&& fn) {
    detail::require(rank_tol >= 0.0, ErrorCode::InvalidArgument, "rank_tol must be >= 0");
    const double threshold = rank_threshold(d, rank_tol);
    Vector mapped = Vector::Zero(d.eigenvalues.size());
    for (Index k = 0; k < d.eigenvalues.size(); ++k) {
        if (is_retained(d.eigenvalues(k), threshold)) {
            mapped(k) = fn(d.eigenvalues(k));
        }
    }
    return SymMatrix(d.eigenvectors * mapped.asDiagonal() * d.eigenvectors.transpose());
}

/// Moore-Penrose pseudo-inverse. A matrix with no retained eigenvalue maps to zero
/// (check with retained_rank).
inline SymMatrix pinv(const SpectralDecomposition& d, double rank_tol = kDefaultRankTol) {
    return spectral_function(d, rank_tol, [](double lambda) { return 1.0 / lambda; });
}

namespace detail {

inline double clamp_psd(double lambda) {
    if (lambda < -kClampJitter) {
        fail(ErrorCode::NotPositiveSemidefinite, "retained eigenvalue " + std::to_string(lambda) + " is negative");
    }
    return std::max(lambda, 0.0);
}

}  // namespace detail

/// Pseudo-inverse square root of a positive semidefinite matrix.
inline SymMatrix inv_sqrt(const SpectralDecomposition& d, double rank_tol = kDefaultRankTol) {
    return spectral_function(d, rank_tol, [](double lambda) {
        const double clamped = detail::clamp_psd(lambda);
        return clamped > 0.0 ? 1.0 / std::sqrt(clamped) : 0.0;
    });
}

/// Square root of a positive semidefinite matrix, restricted to the retained spectrum.
inline SymMatrix psd_sqrt(const SpectralDecomposition& d, double rank_tol = kDefaultRankTol) {
    return spectral_function(d, rank_tol, [](double lambda) { return std::sqrt(detail::clamp_psd(lambda)); });
}

/// Orthogonal projector onto the retained eigenspace.
inline SymMatrix range_projector(const SpectralDecomposition& d, double rank_tol = kDefaultRankTol) {
    return spectral_function(d, rank_tol, [](double) { return 1.0; });
}

}  // namespace framekernel
