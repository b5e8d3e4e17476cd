#include "solvers.hpp"

#include <cmath>
#include <string>

namespace proxsplit {

namespace {

constexpr double kRangeSlack = 1e-12;

double objective(const FunctionObject& f1, const FunctionObject& f2, const Vector& x) {
    const double a = f1.eval(x);
    if (a == kInfinity) return kInfinity;
    const double b = f2.eval(x);
    if (b == kInfinity) return kInfinity;
    return a + b;
}

void require_eval(const FunctionObject& f, const char* solver, const char* slot) {
    if (!f.eval)
        throw MissingCapability(std::string(solver) + ": " + slot + " has no evaluator");
}

void require_prox(const FunctionObject& f, const char* solver, const char* slot) {
    require_eval(f, solver, slot);
    if (!f.has_prox())
        throw MissingCapability(std::string(solver) + ": " + slot + " has no proximity map");
}

}  // namespace

SolveResult forward_backward(const Vector& x0, const FunctionObject& f1,
                             const FunctionObject& f2, const SolverParams& params) {
    params.validate();
    require_prox(f1, "forward_backward", "f1");
    require_eval(f2, "forward_backward", "f2");
    if (!f2.has_grad()) throw MissingCapability("forward_backward: f2 has no gradient");
    if (!f2.lipschitz) throw MissingCapability("forward_backward: f2 has no Lipschitz constant");

    const double beta = *f2.lipschitz;
    const double gamma = params.gamma;
    if (gamma < kRangeSlack || gamma > 2.0 / beta - kRangeSlack)
        throw InvalidArgument("forward_backward: gamma must lie in (0, 2/beta)");
    if (params.method == Method::ista && !(params.lambda > 0.0 && params.lambda <= 1.0))
        throw InvalidArgument("forward_backward: ISTA lambda must lie in (0, 1]");

    auto step = [&](const Vector& v) -> Vector { return f1.prox(v - gamma * f2.grad(v), gamma); };

    IterationMonitor monitor("forward_backward", params);
    SolveResult result;
    Vector x = x0;
    if (params.method == Method::ista) {
        const double lambda = params.lambda;
        for (;;) {
            x += lambda * (step(x) - x);
            if (monitor.record(objective(f1, f2, x))) break;
        }
    } else {
        Vector y = x0;
        double t = 1.0;
        for (;;) {
            Vector next = step(y);
            const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
            y = next + ((t - 1.0) / t_next) * (next - x);
            x = std::move(next);
            t = t_next;
            if (monitor.record(objective(f1, f2, x))) break;
        }
    }
    monitor.finish(result);
    result.solution = std::move(x);
    return result;
}

SolveResult douglas_rachford(const Vector& x0, const FunctionObject& f1,
                             const FunctionObject& f2, const SolverParams& params) {
    params.validate();
    require_prox(f1, "douglas_rachford", "f1");
    require_prox(f2, "douglas_rachford", "f2");
    const double lambda = params.lambda;
    if (!(lambda > 0.0 && lambda < 2.0))
        throw InvalidArgument("douglas_rachford: lambda must lie in (0, 2)");
    const double gamma = params.gamma;

    IterationMonitor monitor("douglas_rachford", params);
    SolveResult result;
    Vector y = x0;
    Vector x;
    for (;;) {
        x = f2.prox(y, gamma);
        y += lambda * (f1.prox(2.0 * x - y, gamma) - x);
        if (monitor.record(objective(f1, f2, x))) break;
    }
    monitor.finish(result);
    result.solution = std::move(x);
    result.auxiliary = std::move(y);
    return result;
}

SolveResult admm(const Vector& x0, const FunctionObject& f1, const FunctionObject& f2,
                 const LinearOperator* l, const SolverParams& params) {
    params.validate();
    require_eval(f1, "admm", "f1");
    require_prox(f2, "admm", "f2");
    FunctionObject::Prox prox_l = f1.prox_composed;
    if (!prox_l && !l) prox_l = f1.prox;
    if (!prox_l) throw MissingCapability("admm: f1 has no L-composed proximity map");
    if (l && l->in_dim() != x0.size()) throw InvalidArgument("admm: operator dimension mismatch");

    auto apply = [l](const Vector& v) -> Vector { return l ? l->forward(v) : v; };
    const double gamma = params.gamma;

    IterationMonitor monitor("admm", params);
    SolveResult result;
    Vector x = x0;
    Vector split = apply(x0);
    Vector dual = Vector::Zero(split.size());
    for (;;) {
        x = prox_l(split - dual, gamma);
        const Vector lx = apply(x);
        split = f2.prox(lx + dual, gamma);
        dual += lx - split;

        const double a = f1.eval(x);
        const double b = a == kInfinity ? kInfinity : f2.eval(lx);
        if (monitor.record(b == kInfinity ? kInfinity : a + b)) break;
    }
    monitor.finish(result);
    result.solution = std::move(x);
    result.auxiliary = std::move(split);
    return result;
}

SolveResult solve_sum(const Vector& x0, const ProblemSpec& problem, const SolverParams& params) {
    problem.validate();
    if (problem.functions.size() < 2) throw InvalidArgument("solve_sum: needs K >= 2 functions");
    if (x0.size() != problem.dimension) throw InvalidArgument("solve_sum: dimension mismatch");
    for (const auto& f : problem.functions) require_prox(f, "solve_sum", "a summand");

    const Index n = problem.dimension;
    const auto k = static_cast<Index>(problem.functions.size());
    const auto& fs = problem.functions;

    FunctionObject separable;
    separable.eval = [&fs, n](const Vector& z) {
        double total = 0.0;
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const double v = fs[i].eval(z.segment(static_cast<Index>(i) * n, n));
            if (v == kInfinity) return kInfinity;
            total += v;
        }
        return total;
    };
    separable.prox = [&fs, n](const Vector& z, double tau) {
        Vector out(z.size());
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const Index at = static_cast<Index>(i) * n;
            out.segment(at, n) = fs[i].prox(z.segment(at, n), tau);
        }
        return out;
    };

    FunctionObject consensus;
    consensus.eval = [n, k](const Vector& z) {
        const Vector first = z.head(n);
        for (Index i = 1; i < k; ++i)
            if ((z.segment(i * n, n) - first).lpNorm<Eigen::Infinity>() >
                1e-12 * (1.0 + first.lpNorm<Eigen::Infinity>()))
                return kInfinity;
        return 0.0;
    };
    consensus.prox = [n, k](const Vector& z, double) {
        Vector mean = Vector::Zero(n);
        for (Index i = 0; i < k; ++i) mean += z.segment(i * n, n);
        mean /= static_cast<double>(k);
        return Vector(mean.replicate(k, 1));
    };

    SolveResult lifted = douglas_rachford(Vector(x0.replicate(k, 1)), separable, consensus, params);
    SolveResult result;
    result.solution = lifted.solution.head(n);
    result.trace = std::move(lifted.trace);
    result.iterations = lifted.iterations;
    result.stop_reason = lifted.stop_reason;
    result.auxiliary = std::move(lifted.auxiliary);
    return result;
}

}  // namespace proxsplit
