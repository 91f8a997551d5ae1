#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "framekernel/frame_core.hpp"
#include "framekernel/random.hpp"

namespace framekernel {

struct Atom {
    double u = 0.0;     ///< location
    double mass = 0.0;  ///< sigma({u})
};

/// Finite sum of point masses sigma = sum_j mass_j delta_{u_j}.
class AtomicMeasure {
public:
    explicit AtomicMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)), grid_(grid_from(atoms_)) {}

    [[nodiscard]] const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    [[nodiscard]] Index size() const noexcept { return static_cast<Index>(atoms_.size()); }
    /// Atom locations as grid points, masses as weights: L^2(sigma) as a grid function space.
    [[nodiscard]] const Grid& as_grid() const noexcept { return grid_; }

    /// integral d sigma(u) / (1 + u^2)
    [[nodiscard]] double tempered_mass() const {
        double sum = 0.0;
        for (const Atom& a : atoms_) {
            sum += a.mass / (1.0 + a.u * a.u);
        }
        return sum;
    }

private:
    // Grid validates that locations are pairwise distinct.
    static Grid grid_from(const std::vector<Atom>& atoms) {
        detail::require(!atoms.empty(), ErrorCode::InvalidArgument, "measure needs at least one atom");
        std::vector<double> points;
        std::vector<double> masses;
        for (const Atom& a : atoms) {
            detail::require(std::isfinite(a.u) && std::isfinite(a.mass) && a.mass > 0.0, ErrorCode::InvalidArgument,
                            "atoms need finite locations and positive finite masses");
            points.push_back(a.u);
            masses.push_back(a.mass);
        }
        return Grid(std::move(points), std::move(masses));
    }

    std::vector<Atom> atoms_;
    Grid grid_;
};

/// Real vectors f_n sampled at the atoms: row n holds f_n(u_1..u_J).
class SigmaFrame {
public:
    SigmaFrame(AtomicMeasure measure, Matrix vectors)
        : measure_(std::move(measure)), system_(measure_.as_grid(), std::move(vectors)) {}

    [[nodiscard]] const AtomicMeasure& measure() const noexcept { return measure_; }
    [[nodiscard]] const Matrix& vectors() const noexcept { return system_.vectors(); }
    [[nodiscard]] const FrameSystem& as_frame_system() const noexcept { return system_; }
    [[nodiscard]] Index count() const noexcept { return system_.count(); }

private:
    AtomicMeasure measure_;
    FrameSystem system_;
};

/// Complex values as separate real and imaginary parts.
struct ComplexVector {
    Vector re;
    Vector im;

    static ComplexVector zero(Index n) { return {Vector::Zero(n), Vector::Zero(n)}; }
    [[nodiscard]] Index size() const noexcept { return re.size(); }
};

struct SigmaBounds {
    double a = 0.0;
    double b = 0.0;
    bool is_frame = false;
};

inline SigmaBounds sigma_frame_bounds(const SigmaFrame& sf, double rank_tol = kDefaultRankTol) {
    const FrameBounds fb = compute_frame_bounds(sf.as_frame_system(), rank_tol);
    return SigmaBounds{fb.lower, fb.upper, fb.is_frame};
}

class GaussianModel {
public:
    explicit GaussianModel(SigmaFrame frame, double rank_tol = kDefaultRankTol)
        : frame_(std::move(frame)), bounds_(sigma_frame_bounds(frame_, rank_tol)), rank_tol_(rank_tol) {}

    [[nodiscard]] const SigmaFrame& frame() const noexcept { return frame_; }
    [[nodiscard]] const SigmaBounds& bounds() const noexcept { return bounds_; }
    [[nodiscard]] double a() const noexcept { return bounds_.a; }
    [[nodiscard]] double b() const noexcept { return bounds_.b; }
    [[nodiscard]] bool is_frame() const noexcept { return bounds_.is_frame; }
    [[nodiscard]] double rank_tol() const noexcept { return rank_tol_; }
    [[nodiscard]] Index atoms() const noexcept { return frame_.measure().size(); }

    void check_phat(const ComplexVector& phat) const {
        detail::require(phat.re.size() == atoms() && phat.im.size() == atoms(), ErrorCode::DimensionMismatch,
                        "phat length differs from number of atoms");
    }

private:
    SigmaFrame frame_;
    SigmaBounds bounds_;
    double rank_tol_;
};

/// phi^(u_j) = sum_i w_i e^{i x_i u_j} phi(x_i)
inline ComplexVector fourier_at_atoms(const Grid& x_grid, const GridFunction& phi, const AtomicMeasure& measure) {
    x_grid.check_length(phi);
    ComplexVector out = ComplexVector::zero(measure.size());
    const auto& xs = x_grid.points();
    const auto& ws = x_grid.weights();
    for (Index j = 0; j < measure.size(); ++j) {
        const double u = measure.atoms()[static_cast<std::size_t>(j)].u;
        double re = 0.0;
        double im = 0.0;
        for (Index i = 0; i < x_grid.size(); ++i) {
            const auto ii = static_cast<std::size_t>(i);
            const double wf = ws[ii] * phi(i);
            re += wf * std::cos(xs[ii] * u);
            im += wf * std::sin(xs[ii] * u);
        }
        out.re(j) = re;
        out.im(j) = im;
    }
    return out;
}

/// c_n = <f_n, phi^>_{L^2(sigma)}, one complex coefficient per frame vector.
inline ComplexVector kl_coefficients(const GaussianModel& model, const ComplexVector& phat) {
    model.check_phat(phat);
    const FrameSystem& fs = model.frame().as_frame_system();
    return ComplexVector{analysis(fs, phat.re), analysis(fs, phat.im)};
}

struct Variances {
    double ex2 = 0.0;  ///< E|X_phi|^2 = ||phi^||^2_sigma
    double ey2 = 0.0;  ///< E|Y_phi|^2 = sum_n |c_n|^2
};

inline Variances theoretical_variances(const GaussianModel& model, const ComplexVector& phat) {
    model.check_phat(phat);
    const Grid& g = model.frame().measure().as_grid();
    const ComplexVector c = kl_coefficients(model, phat);
    return Variances{g.norm_squared(phat.re) + g.norm_squared(phat.im), c.re.squaredNorm() + c.im.squaredNorm()};
}

struct SandwichReport {
    double lower = 0.0;  ///< a * E|X|^2
    double ey2 = 0.0;
    double upper = 0.0;  ///< b * E|X|^2
    double slack = 0.0;
    bool holds = false;
};

inline constexpr double kDefaultSandwichSlack = 1e-10;

/// a E|X|^2 <= E|Y|^2 <= b E|X|^2, checked with absolute slack
/// relative_slack * max(1, b E|X|^2).
inline SandwichReport sandwich_check(const GaussianModel& model, const ComplexVector& phat,
                                     double relative_slack = kDefaultSandwichSlack) {
    if (!model.is_frame()) {
        detail::fail(ErrorCode::NotAFrame, "lower frame bound is zero");
    }
    const Variances v = theoretical_variances(model, phat);
    SandwichReport r;
    r.lower = model.a() * v.ex2;
    r.ey2 = v.ey2;
    r.upper = model.b() * v.ex2;
    r.slack = relative_slack * std::max(1.0, r.upper);
    r.holds = r.lower - r.slack <= r.ey2 && r.ey2 <= r.upper + r.slack;
    return r;
}

struct KLSampleSet {
    std::uint64_t seed = 0;
    std::vector<double> samples_re;
    std::vector<double> samples_im;
    ComplexVector coefficients;

    [[nodiscard]] Index size() const noexcept { return static_cast<Index>(samples_re.size()); }
};

/// Y_k = sum_n c_n B_{n,k}. Sample k draws its N normals from NormalStream(seed, k), so
/// samples are independent of generation order.
inline KLSampleSet sample_kl(const GaussianModel& model, const ComplexVector& phat, Index s, std::uint64_t seed) {
    detail::require(s >= 1, ErrorCode::InvalidArgument, "sample count must be >= 1");
    KLSampleSet out;
    out.seed = seed;
    out.coefficients = kl_coefficients(model, phat);
    const Vector& cre = out.coefficients.re;
    const Vector& cim = out.coefficients.im;
    out.samples_re.resize(static_cast<std::size_t>(s));
    out.samples_im.resize(static_cast<std::size_t>(s));
    for (Index k = 0; k < s; ++k) {
        NormalStream rng(seed, static_cast<std::uint64_t>(k));
        double re = 0.0;
        double im = 0.0;
        for (Index n = 0; n < cre.size(); ++n) {
            const double bn = rng.next_normal();
            re += cre(n) * bn;
            im += cim(n) * bn;
        }
        out.samples_re[static_cast<std::size_t>(k)] = re;
        out.samples_im[static_cast<std::size_t>(k)] = im;
    }
    return out;
}

/// Mean of |Y_k|^2 over the sample set.
inline double empirical_variance(const KLSampleSet& ks) {
    detail::require(ks.size() >= 2, ErrorCode::InvalidArgument, "empirical variance needs at least 2 samples");
    double sum = 0.0;
    for (std::size_t k = 0; k < ks.samples_re.size(); ++k) {
        sum += ks.samples_re[k] * ks.samples_re[k] + ks.samples_im[k] * ks.samples_im[k];
    }
    return sum / static_cast<double>(ks.size());
}

}  // namespace framekernel
