#include "proxsplit/proxsplit.h"

#include "core.hpp"
#include "demo.hpp"
#include "proj.hpp"
#include "prox.hpp"
#include "selftest.hpp"
#include "solvers.hpp"

#include <new>
#include <string>
#include <vector>

using namespace proxsplit;

struct ps_linop {
    LinearOperator op;
};

struct ps_function {
    FunctionObject f;
    std::size_t n;
};

struct ps_result {
    SolveResult r;
};

namespace {

thread_local std::string last_error;

ps_status fail(ps_status status, const std::string& message) {
    last_error = message;
    return status;
}

template <class Body>
ps_status guarded(Body&& body) {
    try {
        body();
        return PS_OK;
    } catch (const Error& e) {
        switch (e.code()) {
            case ErrorCode::invalid_argument: return fail(PS_ERR_INVALID_ARGUMENT, e.what());
            case ErrorCode::unsupported_operator: return fail(PS_ERR_UNSUPPORTED_OPERATOR, e.what());
            case ErrorCode::missing_capability: return fail(PS_ERR_MISSING_CAPABILITY, e.what());
            case ErrorCode::io: return fail(PS_ERR_IO, e.what());
        }
        return fail(PS_ERR_INTERNAL, e.what());
    } catch (const std::bad_alloc&) {
        return fail(PS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(PS_ERR_INTERNAL, e.what());
    }
}

void require(bool condition, const char* message) {
    if (!condition) throw InvalidArgument(message);
}

Vector copy_in(const double* data, std::size_t n) {
    require(data != nullptr || n == 0, "null input array");
    return Eigen::Map<const Vector>(data, static_cast<Index>(n));
}

void copy_out(const Vector& v, double* out) {
    require(out != nullptr || v.size() == 0, "null output array");
    Eigen::Map<Vector>(out, v.size()) = v;
}

Index as_index(std::size_t n) { return static_cast<Index>(n); }

const LinearOperator* unwrap(const ps_linop* op) { return op ? &op->op : nullptr; }

std::optional<LinearOperator> unwrap_optional(const ps_linop* op) {
    if (!op) return std::nullopt;
    return op->op;
}

template <class Make>
ps_status make_function(std::size_t n, ps_function** out, Make&& make) {
    return guarded([&] {
        require(out != nullptr, "null output handle");
        *out = nullptr;
        auto* handle = new ps_function{make(), n};
        *out = handle;
    });
}

SolverParams to_params(const ps_params* p) {
    SolverParams params;
    if (!p) return params;
    params.gamma = p->gamma;
    params.lambda = p->lambda;
    params.tol = p->tol;
    params.maxit = p->maxit;
    require(p->verbosity >= 0 && p->verbosity <= 2, "verbosity must be 0, 1 or 2");
    params.verbosity = static_cast<Verbosity>(p->verbosity);
    require(p->method == PS_METHOD_ISTA || p->method == PS_METHOD_FISTA, "unknown method");
    params.method = p->method == PS_METHOD_ISTA ? Method::ista : Method::fista;
    return params;
}

TvParams to_tv_params(const ps_tv_params* p) {
    TvParams params;
    if (!p) return params;
    params.maxit = p->maxit;
    params.tol = p->tol;
    require(p->verbosity >= 0 && p->verbosity <= 2, "verbosity must be 0, 1 or 2");
    params.verbosity = static_cast<Verbosity>(p->verbosity);
    return params;
}

ps_stop_reason to_c(StopReason r) {
    return r == StopReason::tolerance ? PS_STOP_TOLERANCE : PS_STOP_MAX_ITERATIONS;
}

void check_function(const ps_function* f, std::size_t n, const char* slot) {
    if (!f) throw InvalidArgument(std::string(slot) + " is null");
    if (f->n != n) throw InvalidArgument(std::string(slot) + " dimension does not match x0");
}

void emit_result(SolveResult r, ps_result** out) { *out = new ps_result{std::move(r)}; }

}  // namespace

extern "C" {

const char* ps_last_error(void) { return last_error.c_str(); }

const char* ps_status_string(ps_status status) {
    switch (status) {
        case PS_OK: return "ok";
        case PS_ERR_INVALID_ARGUMENT: return "invalid argument";
        case PS_ERR_UNSUPPORTED_OPERATOR: return "unsupported operator";
        case PS_ERR_MISSING_CAPABILITY: return "missing capability";
        case PS_ERR_IO: return "i/o error";
        case PS_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* ps_version(void) { return "1.0.0"; }

ps_status ps_linop_create(size_t in_dim, size_t out_dim, ps_apply_fn forward, ps_apply_fn adjoint,
                          void* user, double nu, int tight, ps_linop** out) {
    return guarded([&] {
        require(out != nullptr, "null output handle");
        *out = nullptr;
        require(forward != nullptr && adjoint != nullptr, "forward and adjoint callbacks are required");
        const Index m = as_index(out_dim);
        const Index n = as_index(in_dim);
        auto fwd = [forward, user, m](const Vector& x) {
            Vector y(m);
            forward(x.data(), y.data(), user);
            return y;
        };
        auto adj = [adjoint, user, n](const Vector& y) {
            Vector x(n);
            adjoint(y.data(), x.data(), user);
            return x;
        };
        std::optional<double> known_nu;
        if (nu > 0.0) known_nu = nu;
        *out = new ps_linop{LinearOperator(n, m, fwd, adj, known_nu, tight != 0)};
    });
}

ps_status ps_linop_identity(size_t n, ps_linop** out) {
    return guarded([&] {
        require(out != nullptr, "null output handle");
        *out = new ps_linop{LinearOperator::identity(as_index(n))};
    });
}

ps_status ps_linop_scaled_identity(size_t n, double scale, ps_linop** out) {
    return guarded([&] {
        require(out != nullptr, "null output handle");
        *out = new ps_linop{LinearOperator::scaled_identity(as_index(n), scale)};
    });
}

ps_status ps_linop_mask(const unsigned char* keep, size_t n, ps_linop** out) {
    return guarded([&] {
        require(out != nullptr, "null output handle");
        require(keep != nullptr || n == 0, "null mask");
        std::vector<std::uint8_t> bits(n);
        for (std::size_t i = 0; i < n; ++i) bits[i] = keep[i] ? 1 : 0;
        *out = new ps_linop{LinearOperator::mask(std::move(bits))};
    });
}

void ps_linop_destroy(ps_linop* op) { delete op; }

ps_status ps_linop_apply(const ps_linop* op, const double* x, double* out) {
    return guarded([&] {
        require(op != nullptr, "null operator");
        copy_out(op->op.forward(copy_in(x, static_cast<std::size_t>(op->op.in_dim()))), out);
    });
}

ps_status ps_linop_apply_adjoint(const ps_linop* op, const double* y, double* out) {
    return guarded([&] {
        require(op != nullptr, "null operator");
        copy_out(op->op.adjoint(copy_in(y, static_cast<std::size_t>(op->op.out_dim()))), out);
    });
}

ps_status ps_linop_check_adjoint(const ps_linop* op, size_t trials, uint64_t seed, double* discrepancy) {
    return guarded([&] {
        require(op != nullptr && discrepancy != nullptr, "null argument");
        require(trials >= 1, "trials must be at least 1");
        *discrepancy = check_adjoint(op->op, static_cast<int>(trials), seed).max_discrepancy;
    });
}

ps_status ps_prox_l1(const double* x, size_t n, double tau, const ps_linop* psi, double* out) {
    return guarded([&] { copy_out(prox_l1(copy_in(x, n), tau, unwrap(psi)), out); });
}

ps_status ps_prox_l2_sq(const double* x, size_t n, double tau, const double* y, const ps_linop* a,
                        double* out) {
    return guarded([&] {
        const std::size_t m = a ? static_cast<std::size_t>(a->op.out_dim()) : n;
        copy_out(prox_l2_sq(copy_in(x, n), tau, copy_in(y, m), unwrap(a)), out);
    });
}

ps_status ps_prox_linf(const double* x, size_t n, double tau, double* out) {
    return guarded([&] { copy_out(prox_linf(copy_in(x, n), tau), out); });
}

ps_status ps_prox_l12(const double* x, size_t n, double tau, const size_t* group_of, double* out) {
    return guarded([&] {
        require(group_of != nullptr || n == 0, "null group labels");
        const auto groups = GroupPartition::from_labels({group_of, n});
        copy_out(prox_l12(copy_in(x, n), tau, groups), out);
    });
}

ps_status ps_prox_l1inf(const double* x, size_t n, double tau, const size_t* group_of, double* out) {
    return guarded([&] {
        require(group_of != nullptr || n == 0, "null group labels");
        const auto groups = GroupPartition::from_labels({group_of, n});
        copy_out(prox_l1inf(copy_in(x, n), tau, groups), out);
    });
}

void ps_tv_params_default(ps_tv_params* params) {
    if (!params) return;
    const TvParams d;
    params->maxit = d.maxit;
    params->tol = d.tol;
    params->verbosity = static_cast<int>(d.verbosity);
}

ps_status ps_prox_tv(const double* img, size_t rows, size_t cols, double tau,
                     const ps_tv_params* params, double* out) {
    return guarded([&] {
        require(rows >= 1 && cols >= 1, "image must have at least one pixel");
        const Vector flat = copy_in(img, rows * cols);
        const RowMatrix m = Eigen::Map<const RowMatrix>(flat.data(), as_index(rows), as_index(cols));
        const RowMatrix r = prox_tv(m, tau, to_tv_params(params));
        copy_out(Eigen::Map<const Vector>(r.data(), r.size()), out);
    });
}

ps_status ps_tv_norm(const double* img, size_t rows, size_t cols, double* value) {
    return guarded([&] {
        require(value != nullptr, "null output");
        const Vector flat = copy_in(img, rows * cols);
        *value = tv_norm(Eigen::Map<const RowMatrix>(flat.data(), as_index(rows), as_index(cols)));
    });
}

ps_status ps_prox_nuclear(const double* mat, size_t rows, size_t cols, double tau, double* out) {
    return guarded([&] {
        const Vector flat = copy_in(mat, rows * cols);
        const Eigen::MatrixXd m = Eigen::Map<const RowMatrix>(flat.data(), as_index(rows), as_index(cols));
        const RowMatrix r = prox_nuclear(m, tau);
        copy_out(Eigen::Map<const Vector>(r.data(), r.size()), out);
    });
}

ps_status ps_proj_b1(const double* x, size_t n, double epsilon, double* out) {
    return guarded([&] { copy_out(proj_b1(copy_in(x, n), epsilon), out); });
}

ps_status ps_proj_b2(const double* x, size_t n, double epsilon, const double* y, const ps_linop* a,
                     double* out) {
    return guarded([&] {
        const std::size_t m = a ? static_cast<std::size_t>(a->op.out_dim()) : n;
        copy_out(proj_b2(copy_in(x, n), epsilon, copy_in(y, m), unwrap(a)), out);
    });
}

ps_status ps_function_create(size_t n, const ps_function_callbacks* cb, void* user, ps_function** out) {
    return make_function(n, out, [&] {
        require(cb != nullptr && cb->eval != nullptr, "an eval callback is required");
        FunctionObject f;
        const auto eval = cb->eval;
        f.eval = [eval, user, n](const Vector& x) {
            if (static_cast<std::size_t>(x.size()) != n) throw InvalidArgument("eval: dimension mismatch");
            return eval(x.data(), n, user);
        };
        if (cb->grad) {
            const auto grad = cb->grad;
            f.grad = [grad, user, n](const Vector& x) {
                Vector g(as_index(n));
                grad(x.data(), n, g.data(), user);
                return g;
            };
        }
        if (cb->prox) {
            const auto prox = cb->prox;
            f.prox = [prox, user, n](const Vector& x, double tau) {
                Vector p(as_index(n));
                prox(x.data(), n, tau, p.data(), user);
                return p;
            };
        }
        if (cb->prox_composed) {
            const auto prox = cb->prox_composed;
            const std::size_t m = cb->composed_input_dim ? cb->composed_input_dim : n;
            f.prox_composed = [prox, user, n, m](const Vector& z, double tau) {
                if (static_cast<std::size_t>(z.size()) != m)
                    throw InvalidArgument("prox_composed: dimension mismatch");
                Vector p(as_index(n));
                prox(z.data(), m, tau, p.data(), user);
                return p;
            };
        }
        if (cb->lipschitz > 0.0) f.lipschitz = cb->lipschitz;
        f.validate();
        return f;
    });
}

ps_status ps_function_l1(size_t n, double weight, ps_function** out) {
    return make_function(n, out, [&] { return l1_function(weight); });
}

ps_status ps_function_linf(size_t n, double weight, ps_function** out) {
    return make_function(n, out, [&] { return linf_function(weight); });
}

ps_status ps_function_l2_sq(size_t n, double weight, const double* y, size_t m, const ps_linop* a,
                            ps_function** out) {
    return make_function(n, out, [&] {
        if (a) {
            require(static_cast<std::size_t>(a->op.in_dim()) == n &&
                        static_cast<std::size_t>(a->op.out_dim()) == m,
                    "operator dimensions do not match");
        } else {
            require(m == n, "target length must equal n without an operator");
        }
        return l2_sq_function(weight, copy_in(y, m), unwrap_optional(a));
    });
}

ps_status ps_function_tv(size_t rows, size_t cols, double weight, const ps_tv_params* params,
                         ps_function** out) {
    return make_function(rows * cols, out, [&] {
        return tv_function(as_index(rows), as_index(cols), weight, to_tv_params(params));
    });
}

ps_status ps_function_nuclear(size_t rows, size_t cols, double weight, ps_function** out) {
    return make_function(rows * cols, out, [&] {
        return nuclear_function(as_index(rows), as_index(cols), weight);
    });
}

ps_status ps_function_ball_b1(size_t n, double epsilon, ps_function** out) {
    return make_function(n, out, [&] { return indicator_b1(epsilon); });
}

ps_status ps_function_ball_b2(size_t n, double epsilon, const double* y, size_t m, const ps_linop* a,
                              ps_function** out) {
    return make_function(n, out, [&] {
        if (!a) require(m == n, "center length must equal n without an operator");
        return indicator_b2(epsilon, copy_in(y, m), unwrap_optional(a));
    });
}

void ps_function_destroy(ps_function* f) { delete f; }

size_t ps_function_dimension(const ps_function* f) { return f ? f->n : 0; }

ps_status ps_function_eval(const ps_function* f, const double* x, double* value) {
    return guarded([&] {
        require(f != nullptr && value != nullptr, "null argument");
        *value = f->f.eval(copy_in(x, f->n));
    });
}

ps_status ps_function_grad(const ps_function* f, const double* x, double* out) {
    return guarded([&] {
        require(f != nullptr, "null function");
        if (!f->f.has_grad()) throw MissingCapability("function has no gradient");
        copy_out(f->f.grad(copy_in(x, f->n)), out);
    });
}

ps_status ps_function_prox(const ps_function* f, const double* x, double tau, double* out) {
    return guarded([&] {
        require(f != nullptr, "null function");
        if (!f->f.has_prox()) throw MissingCapability("function has no proximity map");
        copy_out(f->f.prox(copy_in(x, f->n), tau), out);
    });
}

void ps_params_default(ps_params* params) {
    if (!params) return;
    const SolverParams d;
    params->gamma = d.gamma;
    params->lambda = d.lambda;
    params->tol = d.tol;
    params->maxit = d.maxit;
    params->verbosity = static_cast<int>(d.verbosity);
    params->method = d.method == Method::ista ? PS_METHOD_ISTA : PS_METHOD_FISTA;
}

ps_status ps_forward_backward(const double* x0, size_t n, const ps_function* f1, const ps_function* f2,
                              const ps_params* params, ps_result** out) {
    return guarded([&] {
        require(out != nullptr, "null output handle");
        *out = nullptr;
        check_function(f1, n, "f1");
        check_function(f2, n, "f2");
        emit_result(forward_backward(copy_in(x0, n), f1->f, f2->f, to_params(params)), out);
    });
}

ps_status ps_douglas_rachford(const double* x0, size_t n, const ps_function* f1, const ps_function* f2,
                              const ps_params* params, ps_result** out) {
    return guarded([&] {
        require(out != nullptr, "null output handle");
        *out = nullptr;
        check_function(f1, n, "f1");
        check_function(f2, n, "f2");
        emit_result(douglas_rachford(copy_in(x0, n), f1->f, f2->f, to_params(params)), out);
    });
}

ps_status ps_admm(const double* x0, size_t n, const ps_function* f1, const ps_function* f2,
                  const ps_linop* l, const ps_params* params, ps_result** out) {
    return guarded([&] {
        require(out != nullptr, "null output handle");
        *out = nullptr;
        check_function(f1, n, "f1");
        const std::size_t m = l ? static_cast<std::size_t>(l->op.out_dim()) : n;
        check_function(f2, m, "f2");
        emit_result(admm(copy_in(x0, n), f1->f, f2->f, unwrap(l), to_params(params)), out);
    });
}

ps_status ps_solve_sum(const double* x0, size_t n, const ps_function* const* functions, size_t count,
                       const ps_params* params, ps_result** out) {
    return guarded([&] {
        require(out != nullptr, "null output handle");
        *out = nullptr;
        require(functions != nullptr || count == 0, "null function list");
        ProblemSpec problem;
        problem.dimension = as_index(n);
        for (std::size_t k = 0; k < count; ++k) {
            check_function(functions[k], n, "summand");
            problem.functions.push_back(functions[k]->f);
        }
        emit_result(solve_sum(copy_in(x0, n), problem, to_params(params)), out);
    });
}

void ps_result_destroy(ps_result* r) { delete r; }

size_t ps_result_dimension(const ps_result* r) {
    return r ? static_cast<std::size_t>(r->r.solution.size()) : 0;
}

void ps_result_solution(const ps_result* r, double* out) {
    if (r && out) Eigen::Map<Vector>(out, r->r.solution.size()) = r->r.solution;
}

size_t ps_result_iterations(const ps_result* r) {
    return r ? static_cast<std::size_t>(r->r.iterations) : 0;
}

void ps_result_trace(const ps_result* r, double* out) {
    if (r && out) std::copy(r->r.trace.begin(), r->r.trace.end(), out);
}

ps_stop_reason ps_result_stop_reason(const ps_result* r) {
    return r ? to_c(r->r.stop_reason) : PS_STOP_MAX_ITERATIONS;
}

size_t ps_result_auxiliary_dimension(const ps_result* r) {
    return r ? static_cast<std::size_t>(r->r.auxiliary.size()) : 0;
}

void ps_result_auxiliary(const ps_result* r, double* out) {
    if (r && out) Eigen::Map<Vector>(out, r->r.auxiliary.size()) = r->r.auxiliary;
}

void ps_demo_config_default(ps_demo_config* cfg) {
    if (!cfg) return;
    const demo::DemoConfig d;
    cfg->rows = static_cast<std::size_t>(d.rows);
    cfg->cols = static_cast<std::size_t>(d.cols);
    cfg->p = d.p;
    cfg->sigma = d.sigma;
    cfg->lambda = d.lambda;
    cfg->maxit = d.maxit;
    cfg->tol = d.tol;
    cfg->seed = d.seed;
    cfg->verbosity = static_cast<int>(d.verbosity);
}

ps_status ps_demo_inpaint(const ps_demo_config* cfg, const char* outdir, ps_demo_summary* summary) {
    return guarded([&] {
        require(cfg != nullptr && outdir != nullptr, "null argument");
        require(cfg->verbosity >= 0 && cfg->verbosity <= 2, "verbosity must be 0, 1 or 2");
        demo::DemoConfig c;
        c.rows = as_index(cfg->rows);
        c.cols = as_index(cfg->cols);
        c.p = cfg->p;
        c.sigma = cfg->sigma;
        c.lambda = cfg->lambda;
        c.maxit = cfg->maxit;
        c.tol = cfg->tol;
        c.seed = cfg->seed;
        c.verbosity = static_cast<Verbosity>(cfg->verbosity);
        c.outdir = outdir;
        const demo::InpaintOutcome o = demo::run_inpaint(c);
        demo::write_outputs(o, c);
        if (summary) {
            summary->epsilon = o.epsilon;
            summary->mask_kept = static_cast<std::size_t>(o.instance.kept());
            summary->constraint_norm_p1_dr = o.constraint_norm_p1;
            summary->snr_observed = o.snr_observed;
            summary->snr_p1_dr = o.snr_p1_dr;
            summary->snr_p2_fb = o.snr_p2_fb;
            summary->snr_p2_dr = o.snr_p2_dr;
            summary->iterations_p1_dr = static_cast<std::size_t>(o.p1_dr.iterations);
            summary->iterations_p2_fb = static_cast<std::size_t>(o.p2_fb.iterations);
            summary->iterations_p2_dr = static_cast<std::size_t>(o.p2_dr.iterations);
            summary->stop_p1_dr = to_c(o.p1_dr.stop_reason);
            summary->stop_p2_fb = to_c(o.p2_fb.stop_reason);
            summary->stop_p2_dr = to_c(o.p2_dr.stop_reason);
        }
    });
}

int ps_selftest_run(ps_report_fn report, void* user) {
    int failed = -1;
    const ps_status status = guarded([&] {
        const auto results = selftest::run_oracle_suites([&](const selftest::CriterionResult& r) {
            if (report) report(r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str(), r.seconds, user);
        });
        failed = 0;
        for (const auto& r : results) failed += r.passed ? 0 : 1;
    });
    return status == PS_OK ? failed : -1;
}

}  // extern "C"
