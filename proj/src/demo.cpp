#include "demo.hpp"

#include "proj.hpp"
#include "solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace proxsplit::demo {

void DemoConfig::validate() const {
    if (rows < 8 || cols < 8) throw InvalidArgument("demo: rows and cols must be at least 8");
    if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("demo: p must lie in (0, 1]");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("demo: sigma must be nonnegative");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("demo: lambda must be positive");
    if (maxit < 1) throw InvalidArgument("demo: maxit must be at least 1");
    if (!(tol >= 0.0)) throw InvalidArgument("demo: tol must be nonnegative");
    if (tv_maxit < 1) throw InvalidArgument("demo: tv_maxit must be at least 1");
}

Index DegradedInstance::kept() const {
    return static_cast<Index>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

LinearOperator DegradedInstance::mask_operator() const { return LinearOperator::mask(mask); }

RowMatrix make_phantom(Index rows, Index cols, std::uint64_t seed) {
    if (rows < 8 || cols < 8) throw InvalidArgument("make_phantom: rows and cols must be at least 8");
    Rng rng(seed);
    constexpr double background = 0.25;
    RowMatrix img = RowMatrix::Constant(rows, cols, background);

    auto draw_int = [&rng](Index lo, Index hi) {  // inclusive
        const auto span = static_cast<double>(hi - lo + 1);
        return std::min(hi, lo + static_cast<Index>(rng.uniform() * span));
    };
    const int count = 5 + static_cast<int>(rng.uniform() * 4.0);
    for (int r = 0; r < count; ++r) {
        const Index h = draw_int(std::max<Index>(2, rows / 8), rows / 2);
        const Index w = draw_int(std::max<Index>(2, cols / 8), cols / 2);
        const Index top = draw_int(0, rows - h);
        const Index left = draw_int(0, cols - w);
        double value = rng.uniform();
        while (std::abs(value - background) < 0.2) value = rng.uniform();
        img.block(top, left, h, w).setConstant(value);
    }
    return img.cwiseMax(0.0).cwiseMin(1.0);
}

DegradedInstance degrade(const RowMatrix& img, double p, double sigma, std::uint64_t seed) {
    if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("degrade: p must lie in (0, 1]");
    if (!(sigma >= 0.0)) throw InvalidArgument("degrade: sigma must be nonnegative");
    Rng rng(seed);
    DegradedInstance inst;
    inst.original = img;
    RowMatrix noisy = img;
    for (Index i = 0; i < noisy.size(); ++i) noisy.data()[i] += sigma * rng.normal();

    inst.mask.resize(static_cast<std::size_t>(img.size()));
    inst.observed = RowMatrix::Zero(img.rows(), img.cols());
    for (Index i = 0; i < img.size(); ++i) {
        const bool keep = rng.uniform() > 1.0 - p;
        inst.mask[static_cast<std::size_t>(i)] = keep ? 1 : 0;
        if (keep) inst.observed.data()[i] = noisy.data()[i];
    }
    return inst;
}

double constraint_radius(const DemoConfig& cfg) {
    return std::sqrt(cfg.sigma * cfg.sigma * static_cast<double>(cfg.rows * cfg.cols) * cfg.p);
}

namespace {

Vector flat(const RowMatrix& img) { return Eigen::Map<const Vector>(img.data(), img.size()); }

SolverParams outer_params(const DemoConfig& cfg, double gamma) {
    SolverParams params;
    params.gamma = gamma;
    params.lambda = 1.0;
    params.tol = cfg.tol;
    params.maxit = cfg.maxit;
    params.verbosity = cfg.verbosity;
    params.method = Method::fista;
    return params;
}

FunctionObject tv_regularizer(const DegradedInstance& inst, const DemoConfig& cfg) {
    TvParams tv;
    tv.maxit = cfg.tv_maxit;
    // Inner solver reports one line per call only at the most verbose outer level.
    tv.verbosity = cfg.verbosity == Verbosity::per_iteration ? Verbosity::summary : Verbosity::silent;
    return tv_function(inst.original.rows(), inst.original.cols(), 1.0, tv);
}

}  // namespace

SolveResult solve_problem1(const DegradedInstance& inst, const DemoConfig& cfg) {
    cfg.validate();
    const double epsilon = constraint_radius(cfg);
    const FunctionObject f1 = tv_regularizer(inst, cfg);

    FunctionObject f2;
    const Vector observed = flat(inst.observed);
    const LinearOperator mask = inst.mask_operator();
    // The indicator is evaluated as a tiny constant: the iterate is always feasible.
    f2.eval = [](const Vector&) { return std::numeric_limits<double>::epsilon(); };
    f2.prox = [epsilon, observed, mask](const Vector& x, double) {
        return proj_b2(x, epsilon, observed, &mask);
    };
    return douglas_rachford(observed, f1, f2, outer_params(cfg, 1.0));
}

SolveResult solve_problem2(const DegradedInstance& inst, const DemoConfig& cfg, Algorithm algorithm) {
    cfg.validate();
    const FunctionObject tv = tv_regularizer(inst, cfg);
    const Vector observed = flat(inst.observed);
    const FunctionObject data = l2_sq_function(cfg.lambda, observed, inst.mask_operator());
    const SolverParams params = outer_params(cfg, 0.5 / cfg.lambda);
    if (algorithm == Algorithm::forward_backward)
        return forward_backward(observed, tv, data, params);
    return douglas_rachford(observed, data, tv, params);
}

double compute_snr(const RowMatrix& ref, const RowMatrix& est) {
    if (ref.rows() != est.rows() || ref.cols() != est.cols())
        throw InvalidArgument("compute_snr: shape mismatch");
    const double err = (ref - est).squaredNorm();
    if (err == 0.0) return kInfinity;
    const double energy = (ref.array() - ref.mean()).matrix().squaredNorm();
    return 10.0 * std::log10(energy / err);
}

RowMatrix to_image(const Vector& flat_img, Index rows, Index cols) {
    if (flat_img.size() != rows * cols) throw InvalidArgument("to_image: size does not match shape");
    return Eigen::Map<const RowMatrix>(flat_img.data(), rows, cols);
}

InpaintOutcome run_inpaint(const DemoConfig& cfg) {
    cfg.validate();
    InpaintOutcome out;
    const RowMatrix phantom = make_phantom(cfg.rows, cfg.cols, cfg.seed);
    // Separate stream for the degradation so the phantom does not shift the noise draws.
    out.instance = degrade(phantom, cfg.p, cfg.sigma, cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    out.epsilon = constraint_radius(cfg);

    out.p1_dr = solve_problem1(out.instance, cfg);
    out.p2_fb = solve_problem2(out.instance, cfg, Algorithm::forward_backward);
    out.p2_dr = solve_problem2(out.instance, cfg, Algorithm::douglas_rachford);

    const RowMatrix& ref = out.instance.original;
    out.snr_observed = compute_snr(ref, out.instance.observed);
    out.snr_p1_dr = compute_snr(ref, to_image(out.p1_dr.solution, cfg.rows, cfg.cols));
    out.snr_p2_fb = compute_snr(ref, to_image(out.p2_fb.solution, cfg.rows, cfg.cols));
    out.snr_p2_dr = compute_snr(ref, to_image(out.p2_dr.solution, cfg.rows, cfg.cols));

    const LinearOperator mask = out.instance.mask_operator();
    out.constraint_norm_p1 = (mask.forward(out.p1_dr.solution) - flat(out.instance.observed)).norm();
    return out;
}

void write_pgm(const std::filesystem::path& path, const RowMatrix& img) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::io, "cannot open " + path.string() + " for writing");
    os << "P5\n" << img.cols() << ' ' << img.rows() << "\n255\n";
    std::vector<char> bytes(static_cast<std::size_t>(img.size()));
    for (Index i = 0; i < img.size(); ++i) {
        const double v = std::clamp(img.data()[i], 0.0, 1.0);
        bytes[static_cast<std::size_t>(i)] = static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0)));
    }
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw Error(ErrorCode::io, "failed writing " + path.string());
}

RowMatrix read_pgm(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorCode::io, "cannot open " + path.string());
    std::string magic;
    Index cols = 0, rows = 0;
    int maxval = 0;
    is >> magic >> cols >> rows >> maxval;
    if (magic != "P5" || rows < 1 || cols < 1 || maxval != 255)
        throw Error(ErrorCode::io, path.string() + ": not an 8-bit binary PGM");
    is.get();
    std::vector<unsigned char> bytes(static_cast<std::size_t>(rows * cols));
    is.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!is) throw Error(ErrorCode::io, path.string() + ": truncated pixel data");
    RowMatrix img(rows, cols);
    for (Index i = 0; i < img.size(); ++i) img.data()[i] = bytes[static_cast<std::size_t>(i)] / 255.0;
    return img;
}

namespace {

std::string format_double(double v) {
    if (v == kInfinity) return "inf";
    if (v == -kInfinity) return "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_trace_csv(const std::filesystem::path& path, const std::vector<double>& trace) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorCode::io, "cannot open " + path.string() + " for writing");
    os << "iteration,objective\n";
    for (std::size_t k = 0; k < trace.size(); ++k) os << (k + 1) << ',' << format_double(trace[k]) << '\n';
    if (!os) throw Error(ErrorCode::io, "failed writing " + path.string());
}

std::string format_summary(const InpaintOutcome& out, const DemoConfig& cfg) {
    std::ostringstream os;
    os << "rows=" << cfg.rows << '\n'
       << "cols=" << cfg.cols << '\n'
       << "seed=" << cfg.seed << '\n'
       << "p=" << format_double(cfg.p) << '\n'
       << "sigma=" << format_double(cfg.sigma) << '\n'
       << "lambda=" << format_double(cfg.lambda) << '\n'
       << "maxit=" << cfg.maxit << '\n'
       << "tol=" << format_double(cfg.tol) << '\n'
       << "epsilon=" << format_double(out.epsilon) << '\n'
       << "mask_kept=" << out.instance.kept() << '\n'
       << "constraint_norm_p1_dr=" << format_double(out.constraint_norm_p1) << '\n'
       << "snr_observed=" << format_double(out.snr_observed) << '\n'
       << "snr_p1_dr=" << format_double(out.snr_p1_dr) << '\n'
       << "snr_p2_fb=" << format_double(out.snr_p2_fb) << '\n'
       << "snr_p2_dr=" << format_double(out.snr_p2_dr) << '\n'
       << "iterations_p1_dr=" << out.p1_dr.iterations << '\n'
       << "iterations_p2_fb=" << out.p2_fb.iterations << '\n'
       << "iterations_p2_dr=" << out.p2_dr.iterations << '\n'
       << "stop_p1_dr=" << to_string(out.p1_dr.stop_reason) << '\n'
       << "stop_p2_fb=" << to_string(out.p2_fb.stop_reason) << '\n'
       << "stop_p2_dr=" << to_string(out.p2_dr.stop_reason) << '\n';
    return os.str();
}

void write_outputs(const InpaintOutcome& out, const DemoConfig& cfg) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.outdir, ec);
    if (ec) throw Error(ErrorCode::io, "cannot create " + cfg.outdir.string() + ": " + ec.message());
    const auto& dir = cfg.outdir;
    write_pgm(dir / "original.pgm", out.instance.original);
    write_pgm(dir / "observed.pgm", out.instance.observed);
    write_pgm(dir / "sol_p1_dr.pgm", to_image(out.p1_dr.solution, cfg.rows, cfg.cols));
    write_pgm(dir / "sol_p2_fb.pgm", to_image(out.p2_fb.solution, cfg.rows, cfg.cols));
    write_pgm(dir / "sol_p2_dr.pgm", to_image(out.p2_dr.solution, cfg.rows, cfg.cols));
    write_trace_csv(dir / "trace_p1_dr.csv", out.p1_dr.trace);
    write_trace_csv(dir / "trace_p2_fb.csv", out.p2_fb.trace);
    write_trace_csv(dir / "trace_p2_dr.csv", out.p2_dr.trace);
    std::ofstream os(dir / "summary.txt");
    if (!os) throw Error(ErrorCode::io, "cannot write summary.txt");
    os << format_summary(out, cfg);
}

}  // namespace proxsplit::demo
