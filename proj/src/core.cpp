#include "core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace proxsplit {

LinearOperator::LinearOperator(Index in_dim, Index out_dim, Map forward, Map adjoint,
                               std::optional<double> nu, bool tight)
    : in_dim_(in_dim),
      out_dim_(out_dim),
      forward_(std::move(forward)),
      adjoint_(std::move(adjoint)),
      nu_(nu),
      tight_(tight) {
    if (in_dim < 0 || out_dim < 0) throw InvalidArgument("LinearOperator: negative dimension");
    if (!forward_ || !adjoint_) throw InvalidArgument("LinearOperator: forward and adjoint are required");
    if (nu_ && !(*nu_ > 0.0)) throw InvalidArgument("LinearOperator: nu must be positive");
    if (tight_ && !nu_) throw InvalidArgument("LinearOperator: a tight operator needs nu");
}

LinearOperator LinearOperator::identity(Index n) {
    auto id = [](const Vector& v) { return v; };
    return LinearOperator(n, n, id, id, 1.0, true);
}

LinearOperator LinearOperator::scaled_identity(Index n, double scale) {
    if (scale == 0.0) throw InvalidArgument("scaled_identity: scale must be nonzero");
    auto apply = [scale](const Vector& v) -> Vector { return scale * v; };
    return LinearOperator(n, n, apply, apply, scale * scale, true);
}

LinearOperator LinearOperator::mask(std::vector<std::uint8_t> keep) {
    const auto n = static_cast<Index>(keep.size());
    Vector diag(n);
    for (Index i = 0; i < n; ++i) diag[i] = keep[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    auto apply = [diag](const Vector& v) -> Vector { return diag.cwiseProduct(v); };
    LinearOperator op(n, n, apply, apply, 1.0, false);
    op.mask_ = true;
    return op;
}

Vector LinearOperator::forward(const Vector& x) const {
    if (x.size() != in_dim_) throw InvalidArgument("LinearOperator::forward: dimension mismatch");
    return forward_(x);
}

Vector LinearOperator::adjoint(const Vector& y) const {
    if (y.size() != out_dim_) throw InvalidArgument("LinearOperator::adjoint: dimension mismatch");
    return adjoint_(y);
}

double LinearOperator::lift_scale(const char* caller) const {
    if (tight_) return *nu_;
    if (mask_) return 1.0;
    throw UnsupportedOperator(std::string(caller) +
                              ": operator is not a tight frame; use a splitting formulation");
}

void FunctionObject::validate() const {
    if (!eval) throw InvalidArgument("FunctionObject: evaluator is required");
    if (!grad && !prox && !prox_composed)
        throw InvalidArgument("FunctionObject: needs a gradient or a proximity map");
    if (lipschitz && !(*lipschitz > 0.0))
        throw InvalidArgument("FunctionObject: Lipschitz constant must be positive");
}

const char* to_string(StopReason reason) noexcept {
    switch (reason) {
        case StopReason::tolerance: return "tolerance";
        case StopReason::max_iterations: return "max_iterations";
    }
    return "unknown";
}

void SolverParams::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be positive");
    if (maxit < 1) throw InvalidArgument("maxit must be at least 1");
    if (!(tol >= 0.0)) throw InvalidArgument("tol must be nonnegative");
}

void ProblemSpec::validate() const {
    if (functions.empty()) throw InvalidArgument("ProblemSpec: at least one function required");
    if (dimension < 1) throw InvalidArgument("ProblemSpec: dimension must be positive");
    for (const auto& f : functions) f.validate();
}

double evaluate_objective(const ProblemSpec& problem, const Vector& x) {
    if (x.size() != problem.dimension)
        throw InvalidArgument("evaluate_objective: dimension mismatch");
    double total = 0.0;
    for (const auto& f : problem.functions) {
        const double v = f.eval(x);
        if (v == kInfinity) return kInfinity;
        total += v;
    }
    return total;
}

bool should_stop(double current, double previous, double tol) noexcept {
    if (!std::isfinite(current) || !std::isfinite(previous)) return false;
    constexpr double floor = 2.2e-16;
    return std::abs(current - previous) / std::max(std::abs(current), floor) < tol;
}

AdjointReport check_adjoint(const LinearOperator& op, int trials, std::uint64_t seed) {
    Rng rng(seed);
    AdjointReport report;
    for (int t = 0; t < trials; ++t) {
        const Vector x = rng.normal_vector(op.in_dim());
        const Vector y = rng.normal_vector(op.out_dim());
        const double scale = x.norm() * y.norm();
        if (scale == 0.0) continue;
        const double gap = std::abs(op.forward(x).dot(y) - x.dot(op.adjoint(y))) / scale;
        report.max_discrepancy = std::max(report.max_discrepancy, gap);
    }
    return report;
}

IterationMonitor::IterationMonitor(const char* solver, const SolverParams& params)
    : solver_(solver), params_(params) {
    trace_.reserve(static_cast<std::size_t>(params.maxit));
}

bool IterationMonitor::record(double objective) {
    trace_.push_back(objective);
    const auto k = trace_.size();
    if (params_.verbosity == Verbosity::per_iteration)
        std::fprintf(stderr, "%s: iter %zu, objective %.10g\n", solver_, k, objective);
    if (k >= 2 && should_stop(objective, trace_[k - 2], params_.tol)) {
        reason_ = StopReason::tolerance;
        return true;
    }
    return k >= static_cast<std::size_t>(params_.maxit);
}

void IterationMonitor::finish(SolveResult& result) const {
    result.trace = trace_;
    result.iterations = static_cast<int>(trace_.size());
    result.stop_reason = reason_;
    if (params_.verbosity != Verbosity::silent) {
        std::fprintf(stderr, "%s: %s after %d iterations, objective %.10g\n", solver_,
                     to_string(reason_), result.iterations,
                     trace_.empty() ? 0.0 : trace_.back());
    }
}

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform() {
    // 53 random mantissa bits in [0, 1).
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

Vector Rng::normal_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = normal();
    return v;
}

}  // namespace proxsplit
