#pragma once

// Command-line front end. `run` is the whole program minus process plumbing so the
// exit-code table can be exercised in-process:
//
//   0  success
//   1  input file missing or unreadable, output not writable
//   2  schema violation or invalid argument
//   3  zero span (kernel, canonical, verify) or not a frame (gp-sim)
//   4  Hilbert spectrum check violated (hilbert)
//   5  variance sandwich violated (gp-sim)

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "framekernel/classic.hpp"
#include "framekernel/gp_kl.hpp"
#include "framekernel/io.hpp"
#include "framekernel/random.hpp"
#include "framekernel/rkhs.hpp"

namespace framekernel::cli {

enum ExitCode : int {
    kOk = 0,
    kFileError = 1,
    kSchemaError = 2,
    kDegenerate = 3,
    kHilbertViolation = 4,
    kSandwichViolation = 5,
};

struct Options {
    double rank_tol = kDefaultRankTol;
    std::string out_path;
    std::uint64_t seed = 0;
    Index samples = 200000;
    bool naive = false;
};

/// Human-readable number: 6 significant digits.
inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

inline const char* fmt(bool b) { return b ? "true" : "false"; }

namespace detail {

inline void emit_json(const io::json& doc, const Options& opt, std::ostream& out) {
    if (opt.out_path.empty()) {
        out << doc.dump(2) << '\n';
    } else {
        io::write_json_file(opt.out_path, doc);
    }
}

// Deterministic probe coefficients for residual reports.
inline std::vector<CoeffSeq> probe_coefficients(Index n, int count, std::uint64_t seed) {
    NormalStream rng(seed, 0xC0FFEE);
    std::vector<CoeffSeq> out;
    for (int k = 0; k < count; ++k) {
        CoeffSeq c(n);
        for (Index i = 0; i < n; ++i) {
            c(i) = rng.next_normal();
        }
        out.push_back(std::move(c));
    }
    return out;
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace detail

inline int cmd_analyze(const std::string& path, const Options& opt, std::ostream& out) {
    const FrameSystem fs = io::read_frame_file(path);
    const FrameBounds b = compute_frame_bounds(fs, opt.rank_tol);
    out << "N=" << fs.count() << " M=" << fs.points() << " rank=" << b.rank << " spans=" << fmt(b.spans_ambient)
        << " frame=" << fmt(b.is_frame) << '\n';
    out << "B1=" << fmt(b.lower) << " B2=" << fmt(b.upper) << " parseval=" << fmt(b.is_parseval) << '\n';
    return kOk;
}

inline int cmd_kernel(const std::string& path, const Options& opt, std::ostream& out) {
    const FrameSystem fs = io::read_frame_file(path);
    const io::KernelKind kind = opt.naive ? io::KernelKind::Naive : io::KernelKind::Rkhs;
    const KernelMatrix k = opt.naive ? naive_kernel(fs) : rk_kernel(fs, opt.rank_tol);

    const auto spectrum = sym_eig(SymMatrix(k.values));
    const double psd_violation = std::max(0.0, -spectrum.min_eigenvalue());
    double residual = 0.0;
    for (Index n = 0; n < fs.count(); ++n) {
        const GridFunction phi_n = fs.vectors().row(n).transpose();
        residual = std::max(residual, verify_reproducing(fs, k, phi_n) / std::max(1.0, phi_n.cwiseAbs().maxCoeff()));
    }

    out << "kind=" << io::to_string(kind) << " M=" << fs.points() << " rank_tol=" << fmt(opt.rank_tol) << '\n';
    out << "psd_violation=" << fmt(psd_violation) << " max_reproducing_residual=" << fmt(residual) << '\n';
    if (!opt.out_path.empty()) {
        io::write_json_file(opt.out_path, io::kernel_to_json({k, kind, opt.rank_tol}));
        out << "wrote " << opt.out_path << '\n';
    }
    return kOk;
}

inline int cmd_canonical(const std::string& path, const Options& opt, std::ostream& out) {
    const FrameSystem fs = io::read_frame_file(path);
    detail::emit_json(io::canonical_to_json(canonical_tight(fs, opt.rank_tol), opt.rank_tol), opt, out);
    return kOk;
}

inline int cmd_hilbert(const std::vector<Index>& sizes, std::ostream& out, std::ostream& err) {
    if (sizes.empty()) {
        err << "hilbert: --sizes needs at least one entry\n";
        return kSchemaError;
    }
    for (Index n : sizes) {
        if (n < 1) {
            err << "hilbert: sizes must be >= 1, got " << n << '\n';
            return kSchemaError;
        }
    }
    const auto rows = hilbert_spectrum_report(sizes);
    out << "n lambda_max lambda_min pi_minus_lambda_max\n";
    bool ok = true;
    for (const auto& r : rows) {
        out << r.n << ' ' << fmt(r.lambda_max) << ' ' << fmt(r.lambda_min) << ' ' << fmt(r.gap_to_pi) << '\n';
        ok = ok && r.lambda_max < std::numbers::pi;
    }
    auto sorted = rows;
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.n < y.n; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i].n != sorted[i - 1].n && !(sorted[i].lambda_max > sorted[i - 1].lambda_max)) {
            ok = false;
        }
    }
    out << "check=" << (ok ? "pass" : "FAIL") << " (lambda_max < pi, increasing in n)\n";
    return ok ? kOk : kHilbertViolation;
}

inline int cmd_gp_sim(const std::string& path, const Options& opt, std::ostream& out, std::ostream& err) {
    if (opt.samples < 2) {
        err << "gp-sim: --samples must be >= 2\n";
        return kSchemaError;
    }
    const io::ModelDocument doc = io::read_model_file(path);
    const GaussianModel model(doc.frame, opt.rank_tol);
    if (!model.is_frame()) {
        err << "gp-sim: frame vectors do not form a frame in L2(sigma) (a = 0)\n";
        return kDegenerate;
    }
    const ComplexVector phat = doc.resolve_phat();
    const Variances v = theoretical_variances(model, phat);
    const SandwichReport s = sandwich_check(model, phat);
    const KLSampleSet ks = sample_kl(model, phat, opt.samples, opt.seed);
    const double empirical = empirical_variance(ks);

    out << "atoms=" << model.atoms() << " vectors=" << model.frame().count()
        << " tempered_mass=" << fmt(model.frame().measure().tempered_mass()) << '\n';
    out << "a=" << fmt(model.a()) << " b=" << fmt(model.b()) << '\n';
    out << "E|X|^2=" << fmt(v.ex2) << " E|Y|^2(theory)=" << fmt(v.ey2) << " E|Y|^2(empirical)=" << fmt(empirical)
        << " samples=" << opt.samples << " seed=" << opt.seed << '\n';
    out << "a*E|X|^2=" << fmt(s.lower) << " E|Y|^2=" << fmt(s.ey2) << " b*E|X|^2=" << fmt(s.upper) << '\n';
    out << "sandwich=" << (s.holds ? "holds" : "VIOLATED") << '\n';
    return s.holds ? kOk : kSandwichViolation;
}

/// Maximum residual of every finite frame identity on one frame file.
inline int cmd_verify(const std::string& path, const Options& opt, std::ostream& out) {
    const FrameSystem fs = io::read_frame_file(path);
    const Grid& grid = fs.grid();
    const Index n = fs.count();
    const Index m = fs.points();
    const auto probes = detail::probe_coefficients(n, 8, opt.seed);
    const auto grid_probes = detail::probe_coefficients(m, 8, opt.seed + 1);

    const Gramian g = build_gramian(fs);
    Matrix tt_star(n, n);
    for (Index j = 0; j < n; ++j) {
        tt_star.col(j) = analysis(fs, synthesis(fs, CoeffSeq::Unit(n, j)));
    }
    const double gramian_residual = detail::max_abs(g.matrix.matrix() - tt_star);

    double adjoint = 0.0;
    double isometry = 0.0;
    for (std::size_t k = 0; k < probes.size(); ++k) {
        const GridFunction& f = grid_probes[k];
        const CoeffSeq& c = probes[k];
        const double lhs = analysis(fs, f).dot(c);
        const double rhs = grid.inner(f, synthesis(fs, c));
        adjoint = std::max(adjoint, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        const IsometryReport iso = isometry_check(fs, c);
        isometry = std::max(isometry, std::abs(iso.lhs - iso.rhs) / std::max(1.0, iso.rhs));
    }

    const KernelMatrix k = rk_kernel(fs, opt.rank_tol);
    const CanonicalTightFrame ctf = canonical_tight(fs, opt.rank_tol);
    const LaxMilgramOperator lax = lax_milgram(fs, opt.rank_tol);
    const Matrix s = frame_operator_matrix(fs);
    double reproducing = 0.0;
    double lax_identity = 0.0;
    double lax_inverse = 0.0;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const GridFunction f = synthesis(fs, probes[i]);
        const GridFunction h = synthesis(fs, probes[(i + 1) % probes.size()]);
        const double fnorm = std::sqrt(grid.norm_squared(f));
        const double hnorm = std::sqrt(grid.norm_squared(h));
        reproducing = std::max(reproducing, verify_reproducing(fs, k, f) / std::max(1.0, f.cwiseAbs().maxCoeff()));
        if (fnorm > 0.0 && hnorm > 0.0) {
            lax_identity = std::max(lax_identity, verify_lax_identity(fs, lax, f, h) / (fnorm * hnorm));
            lax_inverse = std::max(lax_inverse, (lax.matrix * (s * f) - f).cwiseAbs().maxCoeff() /
                                                    std::max(1.0, f.cwiseAbs().maxCoeff()));
        }
    }
    const double tight_kernel = detail::max_abs(kernel_from_tight(ctf).values - k.values);
    const Matrix gpsi = build_gramian(ctf.as_frame_system()).matrix.matrix();
    const double tight_projector = detail::max_abs(gpsi * gpsi - gpsi);
    const auto kspec = sym_eig(SymMatrix(k.values));
    const double psd = std::max(0.0, -kspec.min_eigenvalue()) / std::max(1.0, kspec.max_eigenvalue());
    const PolarFactor polar = polar_unitary(fs, opt.rank_tol);
    const Matrix utu = polar.unitary.transpose() * polar.unitary;
    const double polar_projector = detail::max_abs(utu * utu - utu);
    const double polar_factorization = detail::max_abs(polar.unitary * polar.sqrt_frame_operator - fs.isometric_vectors());

    out << "gramian_vs_TTstar=" << fmt(gramian_residual) << '\n';
    out << "adjoint=" << fmt(adjoint) << '\n';
    out << "isometry=" << fmt(isometry) << '\n';
    out << "reproducing=" << fmt(reproducing) << '\n';
    out << "tight_kernel=" << fmt(tight_kernel) << '\n';
    out << "tight_gramian_projector=" << fmt(tight_projector) << '\n';
    out << "lax_identity=" << fmt(lax_identity) << '\n';
    out << "lax_inverse_on_span=" << fmt(lax_inverse) << '\n';
    out << "kernel_psd_violation=" << fmt(psd) << '\n';
    out << "polar_projector=" << fmt(polar_projector) << '\n';
    out << "polar_factorization=" << fmt(polar_factorization) << '\n';
    return kOk;
}

/// Runs one command line (args excludes the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Frame operators, inverse-Gramian reproducing kernels and Karhunen-Loeve sampling"};
    app.name("framekernel");
    app.require_subcommand(1, 1);

    Options opt;
    app.add_option("--rank-tol", opt.rank_tol, "relative eigenvalue cutoff for pseudo-inverses")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--out", opt.out_path, "output file");
    app.add_option("--seed", opt.seed, "random seed");
    app.add_option("--samples", opt.samples, "Monte-Carlo sample count");
    app.add_flag("--naive", opt.naive, "kernel: sum_n phi_n(s) phi_n(t) instead of the inverse-Gramian kernel");

    std::string path;
    std::vector<Index> sizes;
    auto add_file_command = [&](const char* name, const char* description) {
        auto* sub = app.add_subcommand(name, description);
        sub->add_option("path", path, "input file")->required();
        sub->fallthrough();
        return sub;
    };
    auto* analyze = add_file_command("analyze", "frame bounds of a frame file");
    auto* kernel = add_file_command("kernel", "reproducing kernel matrix of a frame file");
    auto* canonical = add_file_command("canonical", "canonical tight (Parseval) frame of a frame file");
    auto* verify = add_file_command("verify", "residuals of the frame and kernel identities");
    auto* gp_sim = add_file_command("gp-sim", "Karhunen-Loeve simulation for a model file");
    auto* hilbert = app.add_subcommand("hilbert", "spectrum of Hilbert matrix sections");
    hilbert->add_option("--sizes", sizes, "comma-separated section sizes")->delimiter(',')->required();
    hilbert->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kSchemaError;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(path, opt, out);
        if (kernel->parsed()) return cmd_kernel(path, opt, out);
        if (canonical->parsed()) return cmd_canonical(path, opt, out);
        if (verify->parsed()) return cmd_verify(path, opt, out);
        if (gp_sim->parsed()) return cmd_gp_sim(path, opt, out, err);
        if (hilbert->parsed()) return cmd_hilbert(sizes, out, err);
    } catch (const io::FileError& e) {
        err << "error: " << e.what() << '\n';
        return kFileError;
    } catch (const io::SchemaError& e) {
        err << "schema error: " << e.what() << '\n';
        return kSchemaError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        switch (e.code()) {
        case ErrorCode::ZeroSpan:
        case ErrorCode::NotAFrame: return kDegenerate;
        default: return kSchemaError;
        }
    }
    return kSchemaError;
}

}  // namespace framekernel::cli
