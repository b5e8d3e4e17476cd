#pragma once

#include "core.hpp"
#include "prox.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace proxsplit::demo {

struct DemoConfig {
    Index rows = 64;
    Index cols = 64;
    double p = 0.5;
    double sigma = 20.0 / 255.0;
    double lambda = 10.0;
    int maxit = 100;
    double tol = 1e-5;
    std::uint64_t seed = 1;
    int tv_maxit = 50;
    Verbosity verbosity = Verbosity::silent;
    std::filesystem::path outdir = "out";

    void validate() const;
};

struct DegradedInstance {
    RowMatrix original;
    std::vector<std::uint8_t> mask;  // row-major, 1 = observed
    RowMatrix observed;

    Index kept() const;
    LinearOperator mask_operator() const;
};

enum class Algorithm { forward_backward, douglas_rachford };

/// Seeded piecewise-constant image in [0, 1]: random axis-aligned rectangles over a
/// flat background. rows, cols >= 8.
RowMatrix make_phantom(Index rows, Index cols, std::uint64_t seed);

/// Gaussian noise (std sigma) on every pixel, then a Bernoulli(p) keep-mask.
DegradedInstance degrade(const RowMatrix& img, double p, double sigma, std::uint64_t seed);

/// sigma * sqrt(N p): the expected noise norm over the observed pixels.
double constraint_radius(const DemoConfig& cfg);

/// TV subject to |mask (x) - observed|_2 <= epsilon, by Douglas-Rachford with gamma = 1.
SolveResult solve_problem1(const DegradedInstance& inst, const DemoConfig& cfg);

/// lambda |mask (x) - observed|^2 + TV(x), with gamma = 0.5 / lambda.
SolveResult solve_problem2(const DegradedInstance& inst, const DemoConfig& cfg, Algorithm algorithm);

/// 10 log10(|ref - mean(ref)|^2 / |ref - est|^2); +inf when est == ref.
double compute_snr(const RowMatrix& ref, const RowMatrix& est);

RowMatrix to_image(const Vector& flat, Index rows, Index cols);

struct InpaintOutcome {
    DegradedInstance instance;
    double epsilon = 0.0;
    SolveResult p1_dr;
    SolveResult p2_fb;
    SolveResult p2_dr;
    double snr_observed = 0.0;
    double snr_p1_dr = 0.0;
    double snr_p2_fb = 0.0;
    double snr_p2_dr = 0.0;
    /// |mask (x) - observed|_2 for the Problem I solution.
    double constraint_norm_p1 = 0.0;
};

InpaintOutcome run_inpaint(const DemoConfig& cfg);

/// Writes the PGM images, CSV traces and summary.txt into cfg.outdir.
void write_outputs(const InpaintOutcome& outcome, const DemoConfig& cfg);

// File formats.
void write_pgm(const std::filesystem::path& path, const RowMatrix& img);
RowMatrix read_pgm(const std::filesystem::path& path);
void write_trace_csv(const std::filesystem::path& path, const std::vector<double>& trace);
std::string format_summary(const InpaintOutcome& outcome, const DemoConfig& cfg);

}  // namespace proxsplit::demo
