#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "framekernel/cli.hpp"
#include "oracles.hpp"

namespace fk = framekernel;
namespace fs = std::filesystem;
using fk::Matrix;

namespace {

const std::string kData = FRAMEKERNEL_DATA_DIR;

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = fk::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return kData + "/" + name; }

class TempDir {
public:
    TempDir() : path_(fs::temp_directory_path() / ("framekernel_cli_" + std::to_string(::getpid()))) {
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }
    void write(const std::string& name, const std::string& text) const { std::ofstream(file(name)) << text; }

private:
    fs::path path_;
};

}  // namespace

TEST(CliAnalyze, StandardBasis) {
    const auto r = run({"analyze", data("standard_basis.json")});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("B1=1 B2=1 parseval=true"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("N=2 M=2 rank=2"), std::string::npos);
}

TEST(CliAnalyze, Mercedes) {
    const auto r = run({"analyze", data("mercedes.json")});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("B1=1.5 B2=1.5 parseval=false"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("frame=true"), std::string::npos);
}

TEST(CliAnalyze, ExitCodes) {
    const auto bad = run({"analyze", data("malformed_weights.json")});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("grid.weights"), std::string::npos) << bad.err;
    EXPECT_EQ(run({"analyze", data("does_not_exist.json")}).code, 1);
    TempDir tmp;
    tmp.write("broken.json", "{\n  \"grid\": {\"points\": [0, 1],\n  \"weights\": [1 1]}\n}\n");
    const auto broken = run({"analyze", tmp.file("broken.json")});
    EXPECT_EQ(broken.code, 2);
    EXPECT_NE(broken.err.find("line 3"), std::string::npos) << broken.err;
    tmp.write("ragged.json", R"({"grid": {"points": [0, 1], "weights": [1, 1]}, "vectors": [[1, 0], [1]]})");
    const auto ragged = run({"analyze", tmp.file("ragged.json")});
    EXPECT_EQ(ragged.code, 2);
    EXPECT_NE(ragged.err.find("vectors[1]"), std::string::npos) << ragged.err;
    tmp.write("negative.json", R"({"grid": {"points": [0, 1], "weights": [1, -1]}, "vectors": [[1, 0]]})");
    EXPECT_EQ(run({"analyze", tmp.file("negative.json")}).code, 2);
    tmp.write("dup.json", R"({"grid": {"points": [0, 0], "weights": [1, 1]}, "vectors": [[1, 0]]})");
    EXPECT_EQ(run({"analyze", tmp.file("dup.json")}).code, 2);
    tmp.write("missing.json", R"({"grid": {"points": [0, 1], "weights": [1, 1]}})");
    const auto missing = run({"analyze", tmp.file("missing.json")});
    EXPECT_EQ(missing.code, 2);
    EXPECT_NE(missing.err.find("'vectors'"), std::string::npos);
    EXPECT_EQ(run({"analyze"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
    EXPECT_EQ(run({"analyze", data("mercedes.json"), "--rank-tol", "-1"}).code, 2);
}

TEST(CliKernel, RoundTripIsBitExact) {
    TempDir tmp;
    const auto out = tmp.file("k.json");
    const auto r = run({"kernel", data("weighted_redundant.json"), "--out", out});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = fk::io::kernel_from_json(fk::io::read_json_file(out));
    const auto expected = fk::rk_kernel(fk::io::read_frame_file(data("weighted_redundant.json")));
    EXPECT_EQ(doc.kind, fk::io::KernelKind::Rkhs);
    EXPECT_EQ(doc.rank_tol, fk::kDefaultRankTol);
    EXPECT_EQ(doc.kernel.values, expected.values);  // bit-exact
    EXPECT_EQ(doc.kernel.grid.weights(), expected.grid.weights());
    // Re-emitting the parsed document reproduces the file byte for byte.
    std::ifstream in(out);
    std::stringstream text;
    text << in.rdbuf();
    EXPECT_EQ(text.str(), fk::io::kernel_to_json(doc).dump(2) + "\n");
}

TEST(CliKernel, Examples) {
    TempDir tmp;
    ASSERT_EQ(run({"kernel", data("standard_basis.json"), "--out", tmp.file("sb.json")}).code, 0);
    EXPECT_EQ(fk::io::kernel_from_json(fk::io::read_json_file(tmp.file("sb.json"))).kernel.values,
              Matrix::Identity(2, 2));

    ASSERT_EQ(run({"kernel", data("single_vector.json"), "--out", tmp.file("sv.json")}).code, 0);
    Matrix expected = Matrix::Zero(3, 3);
    expected.topLeftCorner(2, 2).setConstant(0.5);
    EXPECT_LE(oracle::max_abs_diff(
                  fk::io::kernel_from_json(fk::io::read_json_file(tmp.file("sv.json"))).kernel.values, expected),
              1e-15);

    const auto naive = run({"kernel", data("mercedes.json"), "--naive", "--out", tmp.file("naive.json")});
    ASSERT_EQ(naive.code, 0);
    EXPECT_NE(naive.out.find("kind=naive"), std::string::npos);
    const auto doc = fk::io::kernel_from_json(fk::io::read_json_file(tmp.file("naive.json")));
    EXPECT_EQ(doc.kind, fk::io::KernelKind::Naive);
    EXPECT_LE(oracle::max_abs_diff(doc.kernel.values, 1.5 * Matrix::Identity(2, 2)), 1e-15);

    const auto rk = run({"kernel", data("mercedes.json")});
    EXPECT_NE(rk.out.find("psd_violation="), std::string::npos);
    EXPECT_NE(rk.out.find("max_reproducing_residual="), std::string::npos);
}

TEST(CliKernel, ZeroSpanExitCode) {
    EXPECT_EQ(run({"kernel", data("zero_frame.json")}).code, 3);
    EXPECT_EQ(run({"canonical", data("zero_frame.json")}).code, 3);
    EXPECT_EQ(run({"verify", data("zero_frame.json")}).code, 3);
    // The naive kernel of a zero system is just zero.
    EXPECT_EQ(run({"kernel", data("zero_frame.json"), "--naive"}).code, 0);
}

TEST(CliHilbert, Tables) {
    const auto one = run({"hilbert", "--sizes", "1"});
    EXPECT_EQ(one.code, 0);
    EXPECT_NE(one.out.find("\n1 1 1 2.14159\n"), std::string::npos) << one.out;
    const auto many = run({"hilbert", "--sizes", "4,8,16"});
    EXPECT_EQ(many.code, 0);
    EXPECT_NE(many.out.find("check=pass"), std::string::npos);
    const auto twelve = run({"hilbert", "--sizes", "12"});
    EXPECT_EQ(twelve.code, 0);
    std::istringstream lines(twelve.out);
    std::string header;
    std::getline(lines, header);
    long n = 0;
    double lmax = 0, lmin = 0, gap = 0;
    lines >> n >> lmax >> lmin >> gap;
    EXPECT_EQ(n, 12);
    EXPECT_LT(lmin, 1e-8);
    EXPECT_EQ(run({"hilbert", "--sizes", "0"}).code, 2);
    EXPECT_EQ(run({"hilbert", "--sizes", "x"}).code, 2);
    EXPECT_EQ(run({"hilbert"}).code, 2);
}

TEST(CliGpSim, OnbModelHasEqualVariances) {
    const auto r = run({"gp-sim", data("onb_model.json"), "--samples", "20000", "--seed", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("a=1 b=1"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("sandwich=holds"), std::string::npos);
    // a*E|X|^2, E|Y|^2 and b*E|X|^2 coincide.
    const auto pos = r.out.find("a*E|X|^2=");
    ASSERT_NE(pos, std::string::npos);
    std::string line = r.out.substr(pos, r.out.find('\n', pos) - pos);
    double lower = 0, ey2 = 0, upper = 0;
    ASSERT_EQ(std::sscanf(line.c_str(), "a*E|X|^2=%lf E|Y|^2=%lf b*E|X|^2=%lf", &lower, &ey2, &upper), 3);
    EXPECT_EQ(lower, ey2);
    EXPECT_EQ(ey2, upper);
}

TEST(CliGpSim, ScaledOnb) {
    const auto r = run({"gp-sim", data("scaled_onb_model.json"), "--samples", "1000"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("a=4 b=4"), std::string::npos) << r.out;
    const auto doc = fk::io::read_model_file(data("scaled_onb_model.json"));
    const fk::GaussianModel model(doc.frame);
    const auto v = fk::theoretical_variances(model, doc.resolve_phat());
    EXPECT_NEAR(v.ey2, 4.0 * v.ex2, 1e-12 * v.ey2);
}

TEST(CliGpSim, DeterministicReport) {
    const auto a = run({"gp-sim", data("phi_x_model.json"), "--samples", "5000", "--seed", "11"});
    const auto b = run({"gp-sim", data("phi_x_model.json"), "--samples", "5000", "--seed", "11"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
}

TEST(CliGpSim, ExitCodes) {
    EXPECT_EQ(run({"gp-sim", data("deficient_model.json")}).code, 3);
    EXPECT_EQ(run({"gp-sim", data("onb_model.json"), "--samples", "1"}).code, 2);
    EXPECT_EQ(run({"gp-sim", data("nope.json")}).code, 1);
    TempDir tmp;
    tmp.write("both.json", R"({"atoms": [{"u": 0, "mass": 1}], "frame": [[1]],
        "phat": {"re": [1], "im": [0]},
        "phi_x": {"grid": {"points": [0], "weights": [1]}, "values": [1]}})");
    EXPECT_EQ(run({"gp-sim", tmp.file("both.json")}).code, 2);
    tmp.write("neither.json", R"({"atoms": [{"u": 0, "mass": 1}], "frame": [[1]]})");
    EXPECT_EQ(run({"gp-sim", tmp.file("neither.json")}).code, 2);
    tmp.write("short.json", R"({"atoms": [{"u": 0, "mass": 1}, {"u": 1, "mass": 1}], "frame": [[1, 0], [0, 1]],
        "phat": {"re": [1], "im": [0, 0]}})");
    const auto shortp = run({"gp-sim", tmp.file("short.json")});
    EXPECT_EQ(shortp.code, 2);
    EXPECT_NE(shortp.err.find("phat.re"), std::string::npos);
}

TEST(CliCanonical, MercedesIsScaled) {
    TempDir tmp;
    ASSERT_EQ(run({"canonical", data("mercedes.json"), "--out", tmp.file("psi.json")}).code, 0);
    const auto psi = fk::io::frame_from_json(fk::io::read_json_file(tmp.file("psi.json")));
    const auto phi = fk::mercedes_frame();
    EXPECT_LE(oracle::max_abs_diff(psi.vectors(), std::sqrt(2.0 / 3.0) * phi.vectors()), 1e-14);
    // The emitted file is itself a frame file, and analyzing it reports a Parseval frame.
    const auto r = run({"analyze", tmp.file("psi.json")});
    EXPECT_NE(r.out.find("parseval=true"), std::string::npos) << r.out;
}

TEST(CliVerify, ResidualsAreSmall) {
    const auto r = run({"verify", data("weighted_redundant.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream lines(r.out);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        const auto eq = line.find('=');
        ASSERT_NE(eq, std::string::npos);
        EXPECT_LE(std::stod(line.substr(eq + 1)), 1e-8) << line;
        ++count;
    }
    EXPECT_EQ(count, 11);
}

TEST(CliBinary, ExitCodesFromProcess) {
    const std::string bin = FRAMEKERNEL_CLI;
    auto status = [&](const std::string& args) {
        const int raw = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    EXPECT_EQ(status("analyze " + data("mercedes.json")), 0);
    EXPECT_EQ(status("analyze " + data("missing_file.json")), 1);
    EXPECT_EQ(status("analyze " + data("malformed_weights.json")), 2);
    EXPECT_EQ(status("kernel " + data("zero_frame.json")), 3);
    EXPECT_EQ(status("gp-sim " + data("deficient_model.json")), 3);
    EXPECT_EQ(status("hilbert --sizes 1,2,3"), 0);
    EXPECT_EQ(status("--help"), 0);
}
