#include <doctest.h>

#include "demo.hpp"
#include "prox.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

using namespace proxsplit;
using namespace proxsplit::demo;

namespace {

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("proxsplit_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

Vector flat(const RowMatrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

DegradedInstance default_instance(const DemoConfig& cfg) {
    return degrade(make_phantom(cfg.rows, cfg.cols, cfg.seed), cfg.p, cfg.sigma, cfg.seed ^ 0x9e3779b97f4a7c15ULL);
}

double problem2_objective(const DegradedInstance& inst, double lambda, const Vector& x) {
    const Vector r = inst.mask_operator().forward(x) - flat(inst.observed);
    return lambda * r.squaredNorm() + tv_norm(to_image(x, inst.original.rows(), inst.original.cols()));
}

}  // namespace

TEST_CASE("phantom is deterministic, bounded and has edges") {
    const RowMatrix a = make_phantom(64, 64, 5);
    CHECK(a == make_phantom(64, 64, 5));
    CHECK(a != make_phantom(64, 64, 6));
    CHECK(a.minCoeff() >= 0.0);
    CHECK(a.maxCoeff() <= 1.0);
    CHECK(tv_norm(a) > 0.0);
    CHECK_THROWS_AS(make_phantom(7, 64, 1), InvalidArgument);
}

TEST_CASE("degrade examples") {
    const RowMatrix img = make_phantom(16, 20, 2);
    const DegradedInstance clean = degrade(img, 1.0, 0.0, 3);
    CHECK(clean.observed == img);
    CHECK(clean.kept() == img.size());

    const DegradedInstance noisy = degrade(img, 1.0, 0.1, 3);
    const RowMatrix noise = noisy.observed - img;
    CHECK(noise.cwiseAbs().maxCoeff() > 0.0);
    CHECK(std::abs(std::sqrt(noise.squaredNorm() / static_cast<double>(noise.size())) - 0.1) < 0.02);

    const DemoConfig cfg;
    const DegradedInstance inst = default_instance(cfg);
    const double density = static_cast<double>(inst.kept()) / static_cast<double>(inst.mask.size());
    CHECK(density >= 0.4);
    CHECK(density <= 0.6);
    CHECK(inst.kept() == 2003);
    for (std::size_t i = 0; i < inst.mask.size(); ++i)
        if (!inst.mask[i]) CHECK(inst.observed.data()[i] == 0.0);

    CHECK_THROWS_AS(degrade(img, 0.0, 0.1, 1), InvalidArgument);
    CHECK_THROWS_AS(degrade(img, 0.5, -0.1, 1), InvalidArgument);
}

TEST_CASE("compute_snr examples") {
    const RowMatrix ref = make_phantom(8, 8, 1);
    CHECK(std::isinf(compute_snr(ref, ref)));
    CHECK(compute_snr(ref, RowMatrix::Constant(8, 8, ref.mean())) == doctest::Approx(0.0).epsilon(1e-12));

    RowMatrix a(2, 2), b(2, 2);
    a << 0, 1, 0, 1;
    b << 0, 1, 0, 0.5;
    // |a - mean|^2 = 4 * 0.25 = 1, |a - b|^2 = 0.25.
    CHECK(compute_snr(a, b) == doctest::Approx(10.0 * std::log10(4.0)).epsilon(1e-14));
    CHECK(compute_snr(a, b) == doctest::Approx(6.0206).epsilon(1e-5));
    CHECK_THROWS_AS(compute_snr(a, RowMatrix::Zero(2, 3)), InvalidArgument);
}

TEST_CASE("constraint radius") {
    DemoConfig cfg;
    CHECK(constraint_radius(cfg) == doctest::Approx(20.0 / 255.0 * std::sqrt(4096 * 0.5)).epsilon(1e-15));
    cfg.sigma = 0.0;
    CHECK(constraint_radius(cfg) == 0.0);
}

TEST_CASE("problem I recovers a clean fully observed image") {
    DemoConfig cfg;
    cfg.rows = cfg.cols = 16;
    cfg.sigma = 0.0;
    cfg.p = 1.0;
    const DegradedInstance inst = degrade(make_phantom(16, 16, 4), cfg.p, cfg.sigma, 9);
    const SolveResult r = solve_problem1(inst, cfg);
    CHECK((r.solution - flat(inst.original)).cwiseAbs().maxCoeff() <= 1e-3);
}

TEST_CASE("problem I on the default seeded run") {
    const DemoConfig cfg;
    const DegradedInstance inst = default_instance(cfg);
    const SolveResult r = solve_problem1(inst, cfg);
    const double snr = compute_snr(inst.original, to_image(r.solution, cfg.rows, cfg.cols));
    CHECK(snr > compute_snr(inst.original, inst.observed));

    REQUIRE(r.trace.size() >= 11);
    for (double v : r.trace) CHECK(std::isfinite(v));
    for (std::size_t k = r.trace.size() - 10; k < r.trace.size(); ++k)
        CHECK(r.trace[k] <= r.trace[k - 1] + 1e-6);

    const double residual = (inst.mask_operator().forward(r.solution) - flat(inst.observed)).norm();
    CHECK(residual <= constraint_radius(cfg) * (1 + 1e-6));
}

TEST_CASE("problem II follows the data for a huge lambda") {
    DemoConfig cfg;
    cfg.lambda = 1e6;
    const DegradedInstance inst = default_instance(cfg);
    for (Algorithm a : {Algorithm::forward_backward, Algorithm::douglas_rachford}) {
        const SolveResult r = solve_problem2(inst, cfg, a);
        double worst = 0.0;
        for (std::size_t i = 0; i < inst.mask.size(); ++i)
            if (inst.mask[i])
                worst = std::max(worst, std::abs(r.solution[static_cast<Index>(i)] - inst.observed.data()[i]));
        CHECK(worst <= 1e-2);
    }
}

TEST_CASE("problem II forward-backward and Douglas-Rachford agree") {
    const DemoConfig cfg;
    const DegradedInstance inst = default_instance(cfg);
    const double fb = problem2_objective(inst, cfg.lambda, solve_problem2(inst, cfg, Algorithm::forward_backward).solution);
    const double dr = problem2_objective(inst, cfg.lambda, solve_problem2(inst, cfg, Algorithm::douglas_rachford).solution);
    CHECK(std::abs(fb - dr) <= 5e-2 * std::abs(fb));
}

TEST_CASE("problem II at full observation is a TV denoise") {
    DemoConfig cfg;
    cfg.rows = cfg.cols = 32;
    cfg.sigma = 0.0;
    cfg.p = 1.0;
    const RowMatrix img = make_phantom(32, 32, 8);
    const DegradedInstance inst = degrade(img, 1.0, 0.0, 1);
    const RowMatrix reference = prox_tv(img, 1.0 / (2.0 * cfg.lambda), TvParams{5000, 1e-10});
    for (Algorithm a : {Algorithm::forward_backward, Algorithm::douglas_rachford}) {
        const SolveResult r = solve_problem2(inst, cfg, a);
        CHECK((r.solution - flat(reference)).cwiseAbs().maxCoeff() <= 1e-2);
    }
}

TEST_CASE("config validation") {
    DemoConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    DemoConfig bad = cfg;
    bad.p = 1.5;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = cfg;
    bad.sigma = -1;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = cfg;
    bad.lambda = 0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = cfg;
    bad.rows = 4;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    CHECK_THROWS_AS(run_inpaint(bad), InvalidArgument);
}

TEST_CASE("PGM round trip clamps to the unit interval") {
    const auto dir = scratch("pgm");
    RowMatrix img(2, 3);
    img << -0.5, 0.0, 0.5, 1.0, 2.0, 128.0 / 255.0;
    write_pgm(dir / "a.pgm", img);
    const RowMatrix back = read_pgm(dir / "a.pgm");
    REQUIRE(back.rows() == 2);
    REQUIRE(back.cols() == 3);
    CHECK(back(0, 0) == 0.0);
    CHECK(back(1, 1) == 1.0);
    CHECK(back(1, 2) == 128.0 / 255.0);
    CHECK(std::abs(back(0, 2) - 0.5) <= 0.5 / 255.0);
    CHECK(slurp(dir / "a.pgm").substr(0, 11) == "P5\n3 2\n255\n");
    CHECK_THROWS_AS(read_pgm(dir / "missing.pgm"), Error);
}

TEST_CASE("trace CSV format") {
    const auto dir = scratch("csv");
    write_trace_csv(dir / "t.csv", {kInfinity, 2.5, 0.1});
    CHECK(slurp(dir / "t.csv") == "iteration,objective\n1,inf\n2,2.5\n3,0.10000000000000001\n");
}

TEST_CASE("inpaint outputs are complete and deterministic") {
    DemoConfig cfg;
    cfg.rows = cfg.cols = 24;
    cfg.maxit = 30;
    cfg.outdir = scratch("run_a");
    write_outputs(run_inpaint(cfg), cfg);
    DemoConfig again = cfg;
    again.outdir = scratch("run_b");
    write_outputs(run_inpaint(again), again);

    for (const char* name : {"original.pgm", "observed.pgm", "sol_p1_dr.pgm", "sol_p2_fb.pgm", "sol_p2_dr.pgm",
                             "trace_p1_dr.csv", "trace_p2_fb.csv", "trace_p2_dr.csv", "summary.txt"}) {
        CAPTURE(name);
        REQUIRE(std::filesystem::exists(cfg.outdir / name));
        CHECK(slurp(cfg.outdir / name) == slurp(again.outdir / name));
    }

    const std::string summary = slurp(cfg.outdir / "summary.txt");
    for (const char* key : {"snr_observed=", "snr_p1_dr=", "snr_p2_fb=", "snr_p2_dr=", "iterations_p1_dr=",
                            "iterations_p2_fb=", "iterations_p2_dr=", "stop_p1_dr=", "stop_p2_fb=", "stop_p2_dr="})
        CHECK(summary.find(std::string("\n") + key) != std::string::npos);

    std::istringstream lines(summary);
    std::string line;
    while (std::getline(lines, line)) CHECK(line.find('=') != std::string::npos);
}
