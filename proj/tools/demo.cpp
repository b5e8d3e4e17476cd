// Command-line front end for the inpainting demo and the oracle self-test. Talks to the
// library only through the C interface.

#include "proxsplit/proxsplit.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadArguments = 2;

void print_criterion(const char* name, int passed, const char* detail, double, void*) {
    std::printf("[%s] %s: %s\n", passed ? "PASS" : "FAIL", name, detail);
    std::fflush(stdout);
}

const char* stop_name(ps_stop_reason r) {
    return r == PS_STOP_TOLERANCE ? "tolerance" : "max_iterations";
}

int run_inpaint(const ps_demo_config& cfg, const std::string& outdir) {
    ps_demo_summary s{};
    const ps_status status = ps_demo_inpaint(&cfg, outdir.c_str(), &s);
    if (status == PS_ERR_INVALID_ARGUMENT) {
        std::fprintf(stderr, "demo inpaint: %s\n", ps_last_error());
        return kExitBadArguments;
    }
    if (status != PS_OK) {
        std::fprintf(stderr, "demo inpaint: %s: %s\n", ps_status_string(status), ps_last_error());
        return kExitCheckFailed;
    }

    std::printf("epsilon            %.6f (observed pixels: %zu)\n", s.epsilon, s.mask_kept);
    std::printf("SNR observed       %8.3f dB\n", s.snr_observed);
    std::printf("SNR Problem I  DR  %8.3f dB  (%zu iterations, %s)\n", s.snr_p1_dr, s.iterations_p1_dr,
                stop_name(s.stop_p1_dr));
    std::printf("SNR Problem II FB  %8.3f dB  (%zu iterations, %s)\n", s.snr_p2_fb, s.iterations_p2_fb,
                stop_name(s.stop_p2_fb));
    std::printf("SNR Problem II DR  %8.3f dB  (%zu iterations, %s)\n", s.snr_p2_dr, s.iterations_p2_dr,
                stop_name(s.stop_p2_dr));
    std::printf("outputs written to %s\n", outdir.c_str());

    bool ok = s.constraint_norm_p1_dr <= s.epsilon * (1.0 + 1e-6) + 1e-12;
    if (!ok)
        std::fprintf(stderr, "check failed: Problem I constraint %.9g exceeds epsilon %.9g\n",
                     s.constraint_norm_p1_dr, s.epsilon);
    for (double snr : {s.snr_p1_dr, s.snr_p2_fb, s.snr_p2_dr}) {
        if (!(snr > s.snr_observed)) {
            std::fprintf(stderr, "check failed: a restoration does not improve on the observed SNR\n");
            ok = false;
            break;
        }
    }
    return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Proximal splitting demo: TV inpainting and operator self-test"};
    app.require_subcommand(1);

    ps_demo_config cfg;
    ps_demo_config_default(&cfg);
    std::string outdir = "out";

    auto* inpaint = app.add_subcommand("inpaint", "Degrade a synthetic image and restore it three ways");
    inpaint->add_option("--rows", cfg.rows, "Image rows")->capture_default_str();
    inpaint->add_option("--cols", cfg.cols, "Image columns")->capture_default_str();
    inpaint->add_option("--p", cfg.p, "Probability a pixel is observed")->capture_default_str();
    inpaint->add_option("--sigma", cfg.sigma, "Noise standard deviation")->capture_default_str();
    inpaint->add_option("--lambda", cfg.lambda, "Regularization weight for Problem II")->capture_default_str();
    inpaint->add_option("--maxit", cfg.maxit, "Outer iteration cap")->capture_default_str();
    inpaint->add_option("--tol", cfg.tol, "Relative objective change tolerance")->capture_default_str();
    inpaint->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    inpaint->add_option("--verbose", cfg.verbosity, "0 silent, 1 summary, 2 per iteration")
        ->check(CLI::Range(0, 2))
        ->capture_default_str();
    inpaint->add_option("--outdir", outdir, "Output directory")->capture_default_str();

    auto* selftest = app.add_subcommand("selftest", "Run the oracle suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadArguments;
    }

    if (*inpaint) return run_inpaint(cfg, outdir);
    if (*selftest) {
        const int failed = ps_selftest_run(print_criterion, nullptr);
        if (failed < 0) {
            std::fprintf(stderr, "selftest: %s\n", ps_last_error());
            return kExitCheckFailed;
        }
        std::printf("%d suite(s) failed\n", failed);
        return failed == 0 ? kExitOk : kExitCheckFailed;
    }
    return kExitBadArguments;
}
