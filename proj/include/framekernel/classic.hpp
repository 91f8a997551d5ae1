#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "framekernel/frame_core.hpp"
#include "framekernel/random.hpp"

namespace framekernel {

/// phi_n(t) = t^n, n = 0..n_funcs-1, on the midpoint grid x_i = (i + 1/2) / m_points of
/// (0, 1) with weights 1 / m_points.
inline FrameSystem monomial_frame(Index n_funcs, Index m_points) {
    detail::require(n_funcs >= 1, ErrorCode::InvalidArgument, "monomial frame needs n_funcs >= 1");
    detail::require(m_points >= 2, ErrorCode::InvalidArgument, "monomial frame needs m_points >= 2");
    std::vector<double> points(static_cast<std::size_t>(m_points));
    const double h = 1.0 / static_cast<double>(m_points);
    for (Index i = 0; i < m_points; ++i) {
        points[static_cast<std::size_t>(i)] = (static_cast<double>(i) + 0.5) * h;
    }
    Matrix phi(n_funcs, m_points);
    for (Index i = 0; i < m_points; ++i) {
        double power = 1.0;
        for (Index n = 0; n < n_funcs; ++n) {
            phi(n, i) = power;
            power *= points[static_cast<std::size_t>(i)];
        }
    }
    return FrameSystem(Grid(std::move(points), std::vector<double>(static_cast<std::size_t>(m_points), h)),
                       std::move(phi));
}

/// n x n section of the Hilbert matrix, G_nm = 1 / (n + m + 1) with indices from 0.
inline Gramian hilbert_gramian_exact(Index n) {
    detail::require(n >= 1, ErrorCode::InvalidArgument, "Hilbert matrix size must be >= 1");
    Matrix h(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            h(i, j) = 1.0 / static_cast<double>(i + j + 1);
        }
    }
    return Gramian{SymMatrix(h), n, 0};
}

struct HilbertSpectrumRow {
    Index n = 0;
    double lambda_max = 0.0;
    double lambda_min = 0.0;
    double gap_to_pi = 0.0;  ///< pi - lambda_max
};

inline std::vector<HilbertSpectrumRow> hilbert_spectrum_report(const std::vector<Index>& sizes) {
    std::vector<HilbertSpectrumRow> rows;
    rows.reserve(sizes.size());
    for (Index n : sizes) {
        const auto d = sym_eig(hilbert_gramian_exact(n).matrix);
        rows.push_back({n, d.max_eigenvalue(), d.min_eigenvalue(), std::numbers::pi - d.max_eigenvalue()});
    }
    return rows;
}

/// Three unit vectors at 120 degrees in the plane, on grid {1, 2} with unit weights.
inline FrameSystem mercedes_frame() {
    const double h = std::sqrt(3.0) / 2.0;
    Matrix phi(3, 2);
    phi << 1.0, 0.0,  //
        -0.5, h,      //
        -0.5, -h;
    return FrameSystem(Grid({1.0, 2.0}, {1.0, 1.0}), std::move(phi));
}

/// Minimum ratio of smallest to largest singular value accepted by random_riesz_frame.
inline constexpr double kRieszConditionFloor = 0.05;

/// m x m system with entries delta_ij + z_ij / (2 sqrt(m)), z_ij standard normals from
/// NormalStream(seed) in row-major order, redrawn until the smallest singular value is at
/// least kRieszConditionFloor times the largest. Grid is 0..m-1 with unit weights.
inline FrameSystem random_riesz_frame(Index m, std::uint64_t seed) {
    detail::require(m >= 1, ErrorCode::InvalidArgument, "random Riesz frame needs m >= 1");
    NormalStream rng(seed);
    const double scale = 0.5 / std::sqrt(static_cast<double>(m));
    for (;;) {
        Matrix phi(m, m);
        for (Index i = 0; i < m; ++i) {
            for (Index j = 0; j < m; ++j) {
                phi(i, j) = (i == j ? 1.0 : 0.0) + scale * rng.next_normal();
            }
        }
        const auto d = sym_eig(SymMatrix(phi * phi.transpose()));
        const double smax = std::sqrt(std::max(d.max_eigenvalue(), 0.0));
        const double smin = std::sqrt(std::max(d.min_eigenvalue(), 0.0));
        if (smax > 0.0 && smin >= kRieszConditionFloor * smax) {
            return FrameSystem(Grid::unit(m), std::move(phi));
        }
    }
}

}  // namespace framekernel
