#include <doctest.h>

#include "oracles.hpp"
#include "proj.hpp"
#include "prox.hpp"
#include "solvers.hpp"

#include <cmath>

using namespace proxsplit;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

// 1/2 |x - c|^2
FunctionObject quad(Vector c) { return l2_sq_function(0.5, std::move(c)); }

// Indicator of {y : y = c}.
FunctionObject pinned(Vector c) {
    FunctionObject f;
    f.eval = [c](const Vector& y) { return (y - c).norm() <= 1e-9 ? 0.0 : kInfinity; };
    f.prox = [c](const Vector&, double) { return c; };
    return f;
}

SolverParams precise(int maxit = 5000) {
    SolverParams p;
    p.tol = 1e-12;
    p.maxit = maxit;
    return p;
}

// min 0.5 |x| + 1/2 (x - 2)^2
const FunctionObject kLassoL1 = l1_function(0.5);
const FunctionObject kLassoQuad = quad(vec({2}));

// Grid oracle for the scalar lasso, computed independently of the solvers.
double lasso_oracle() {
    return oracle::grid_minimize(
        [](const Vector& v) { return 0.5 * std::abs(v[0]) + 0.5 * (v[0] - 2) * (v[0] - 2); },
        vec({-3}), vec({3}), 1e-3)[0];
}

void check_result_shape(const SolveResult& r, const SolverParams& p) {
    CHECK(r.trace.size() == static_cast<std::size_t>(r.iterations));
    CHECK(r.iterations <= p.maxit);
    CHECK(r.iterations >= 1);
}

}  // namespace

TEST_CASE("lasso oracle") {
    CHECK(std::abs(lasso_oracle() - 1.5) <= 2e-3);
    CHECK(soft_threshold(2.0, 0.5) == 1.5);
}

TEST_CASE("forward_backward examples") {
    SolverParams p = precise();
    p.method = Method::ista;
    FunctionObject zero;
    zero.eval = [](const Vector&) { return 0.0; };
    zero.prox = [](const Vector& x, double) { return x; };
    const SolveResult r = forward_backward(Vector::Zero(2), zero, quad(vec({2, -1})), p);
    CHECK((r.solution - vec({2, -1})).norm() <= 1e-12);
    check_result_shape(r, p);

    for (Method m : {Method::ista, Method::fista}) {
        SolverParams q = precise();
        q.method = m;
        const SolveResult s = forward_backward(vec({0}), kLassoL1, kLassoQuad, q);
        CHECK(std::abs(s.solution[0] - 1.5) <= 1e-4);
        check_result_shape(s, q);
    }
}

TEST_CASE("forward_backward with under-relaxed ISTA converges to the same point") {
    SolverParams p = precise();
    p.method = Method::ista;
    p.lambda = 0.5;
    CHECK(std::abs(forward_backward(vec({-4}), kLassoL1, kLassoQuad, p).solution[0] - 1.5) <= 1e-4);
}

TEST_CASE("forward_backward errors") {
    SolverParams p;
    FunctionObject no_grad = l1_function();
    CHECK_THROWS_AS(forward_backward(vec({0}), kLassoL1, no_grad, p), MissingCapability);

    FunctionObject no_beta = kLassoQuad;
    no_beta.lipschitz.reset();
    CHECK_THROWS_AS(forward_backward(vec({0}), kLassoL1, no_beta, p), MissingCapability);

    FunctionObject no_prox = kLassoQuad;
    no_prox.prox = nullptr;
    CHECK_THROWS_AS(forward_backward(vec({0}), no_prox, kLassoQuad, p), MissingCapability);

    SolverParams big = p;
    big.gamma = 2.0;
    CHECK_THROWS_AS(forward_backward(vec({0}), kLassoL1, kLassoQuad, big), InvalidArgument);
    SolverParams ok = p;
    ok.gamma = 1.9;
    CHECK_NOTHROW(forward_backward(vec({0}), kLassoL1, kLassoQuad, ok));

    SolverParams bad_lambda = p;
    bad_lambda.method = Method::ista;
    bad_lambda.lambda = 1.5;
    CHECK_THROWS_AS(forward_backward(vec({0}), kLassoL1, kLassoQuad, bad_lambda), InvalidArgument);
    bad_lambda.method = Method::fista;
    CHECK_NOTHROW(forward_backward(vec({0}), kLassoL1, kLassoQuad, bad_lambda));
}

TEST_CASE("douglas_rachford examples") {
    const SolverParams p = precise();
    const SolveResult r = douglas_rachford(vec({5}), quad(vec({0})), quad(vec({2})), p);
    CHECK(std::abs(r.solution[0] - 1.0) <= 1e-6);
    check_result_shape(r, p);

    CHECK(std::abs(douglas_rachford(vec({0}), kLassoL1, kLassoQuad, p).solution[0] - 1.5) <= 1e-4);

    const SolveResult ball = douglas_rachford(Vector::Zero(2), indicator_b2(1.0, Vector::Zero(2)),
                                              quad(vec({3, 0})), p);
    CHECK((ball.solution - vec({1, 0})).norm() <= 1e-6);
}

TEST_CASE("douglas_rachford errors") {
    SolverParams p;
    FunctionObject grad_only;
    grad_only.eval = [](const Vector& x) { return x.squaredNorm(); };
    grad_only.grad = [](const Vector& x) { return Vector(2.0 * x); };
    grad_only.lipschitz = 2.0;
    CHECK_THROWS_AS(douglas_rachford(vec({0}), kLassoL1, grad_only, p), MissingCapability);
    CHECK_THROWS_AS(douglas_rachford(vec({0}), grad_only, kLassoL1, p), MissingCapability);

    for (double lambda : {0.0, 2.0, -1.0}) {
        SolverParams q = p;
        q.lambda = lambda;
        CHECK_THROWS_AS(douglas_rachford(vec({0}), kLassoL1, kLassoQuad, q), InvalidArgument);
    }
    SolverParams relaxed = precise();
    relaxed.lambda = 1.8;
    CHECK(std::abs(douglas_rachford(vec({0}), kLassoL1, kLassoQuad, relaxed).solution[0] - 1.5) <= 1e-4);
}

TEST_CASE("douglas_rachford optimality pair at convergence") {
    Rng rng(31);
    const Vector b = 2.0 * rng.normal_vector(10);
    const FunctionObject f1 = l1_function(0.3);
    const FunctionObject f2 = quad(b);
    for (double gamma : {0.1, 1.0, 3.0}) {
        SolverParams p = precise();
        p.gamma = gamma;
        p.tol = 0.0;
        const SolveResult r = douglas_rachford(Vector::Zero(10), f1, f2, p);
        const Vector& y = r.auxiliary;
        const Vector x = f2.prox(y, gamma);
        CHECK((x - f1.prox(2.0 * x - y, gamma)).norm() <= 1e-4 * (1.0 + y.norm()));
        CHECK((r.solution - prox_l1(b, 0.3)).norm() <= 1e-6);
    }
}

TEST_CASE("forward_backward fixed-point residual") {
    Rng rng(32);
    const Eigen::MatrixXd m = rng.normal_vector(12 * 8).reshaped(12, 8);
    const Vector b = rng.normal_vector(12);
    const double beta = 2.0 * m.squaredNorm();
    FunctionObject f2;
    f2.eval = [&](const Vector& x) { return (m * x - b).squaredNorm() + 0.05 * x.squaredNorm(); };
    f2.grad = [&](const Vector& x) { return Vector(2.0 * m.transpose() * (m * x - b) + 0.1 * x); };
    f2.lipschitz = beta + 0.1;
    const FunctionObject f1 = l1_function(0.2);
    for (Method method : {Method::ista, Method::fista}) {
        SolverParams p = precise(20000);
        p.method = method;
        p.gamma = 1.0 / *f2.lipschitz;
        const SolveResult r = forward_backward(Vector::Zero(8), f1, f2, p);
        const Vector& x = r.solution;
        CHECK((x - f1.prox(x - p.gamma * f2.grad(x), p.gamma)).norm() <= 1e-4 * (1.0 + x.norm()));
    }
}

TEST_CASE("ISTA objective is nonincreasing") {
    Rng rng(33);
    for (int inst = 0; inst < 5; ++inst) {
        const Vector b = rng.normal_vector(6);
        const FunctionObject f2 = l2_sq_function(0.5 + rng.uniform(), b);
        SolverParams p;
        p.method = Method::ista;
        p.tol = 0.0;
        p.maxit = 60;
        p.gamma = 1.0 / *f2.lipschitz;
        const SolveResult r = forward_backward(3.0 * rng.normal_vector(6), l1_function(0.4), f2, p);
        CHECK(r.iterations == 60);
        CHECK(r.stop_reason == StopReason::max_iterations);
        for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] <= r.trace[k - 1] + 1e-10);
    }
}

TEST_CASE("admm examples") {
    const SolverParams p = precise();
    const SolveResult lasso = admm(vec({0}), kLassoL1, kLassoQuad, nullptr, p);
    CHECK(std::abs(lasso.solution[0] - 1.5) <= 1e-4);
    check_result_shape(lasso, p);

    const SolveResult pin = admm(vec({0}), quad(vec({0})), pinned(vec({1})), nullptr, p);
    CHECK(std::abs(pin.solution[0] - 1.0) <= 1e-6);

    // Constrained 1-D oracle: minimize 1/2 x^2 on the grid subject to 2x = 2.
    const Vector constrained = oracle::grid_minimize(
        [](const Vector& v) { return std::abs(2 * v[0] - 2) <= 1e-9 ? 0.5 * v[0] * v[0] : kInfinity; },
        vec({-3}), vec({3}), 1e-3);
    CHECK(std::abs(constrained[0] - 1.0) <= 1e-12);

    // prox_composed of 1/2 x^2 with L = 2I: argmin tau/2 x^2 + 1/2 (2x - z)^2 = 2z / (tau + 4).
    const LinearOperator two = LinearOperator::scaled_identity(1, 2.0);
    FunctionObject half_sq = quad(vec({0}));
    half_sq.prox_composed = [](const Vector& z, double tau) { return Vector(2.0 * z / (tau + 4.0)); };
    const SolveResult scaled = admm(vec({0}), half_sq, pinned(vec({2})), &two, p);
    CHECK(std::abs(scaled.solution[0] - constrained[0]) <= 1e-6);
}

TEST_CASE("admm primal residual vanishes") {
    Rng rng(34);
    const Vector b = rng.normal_vector(5);
    const LinearOperator two = LinearOperator::scaled_identity(5, 2.0);
    FunctionObject f1 = quad(b);
    // argmin tau/2 |x - b|^2 + 1/2 |2x - z|^2
    f1.prox_composed = [b](const Vector& z, double tau) { return Vector((tau * b + 2.0 * z) / (tau + 4.0)); };
    const SolveResult r = admm(Vector::Zero(5), f1, l1_function(0.7), &two, precise());
    CHECK((two.forward(r.solution) - r.auxiliary).norm() <= 1e-4);
    // Optimum of 1/2 |x - b|^2 + 0.7 |2x|_1 is soft(b, 1.4).
    CHECK((r.solution - prox_l1(b, 1.4)).norm() <= 1e-5);
}

TEST_CASE("admm errors") {
    const LinearOperator two = LinearOperator::scaled_identity(1, 2.0);
    CHECK_THROWS_AS(admm(vec({0}), kLassoL1, kLassoQuad, &two, SolverParams{}), MissingCapability);
    FunctionObject grad_only = kLassoQuad;
    grad_only.prox = nullptr;
    CHECK_THROWS_AS(admm(vec({0}), kLassoL1, grad_only, nullptr, SolverParams{}), MissingCapability);
}

TEST_CASE("solve_sum examples") {
    const SolverParams p = precise();
    const SolveResult three = solve_sum(vec({0}), {{quad(vec({1})), quad(vec({2})), quad(vec({3}))}, 1}, p);
    CHECK(std::abs(three.solution[0] - 2.0) <= 1e-6);
    check_result_shape(three, p);

    const SolveResult lasso = solve_sum(vec({0}), {{kLassoL1, kLassoQuad}, 1}, p);
    const SolveResult dr = douglas_rachford(vec({0}), kLassoL1, kLassoQuad, p);
    CHECK(std::abs(lasso.solution[0] - dr.solution[0]) <= 1e-4);

    const Vector c1 = vec({0, 0}), c2 = vec({1.5, 0});
    const SolveResult balls =
        solve_sum(vec({0, 3}), {{indicator_b2(1.0, c1), indicator_b2(1.0, c2)}, 2}, precise(20000));
    CHECK((balls.solution - c1).norm() <= 1.0 + 1e-6);
    CHECK((balls.solution - c2).norm() <= 1.0 + 1e-6);
}

TEST_CASE("solve_sum errors") {
    FunctionObject grad_only = kLassoQuad;
    grad_only.prox = nullptr;
    CHECK_THROWS_AS(solve_sum(vec({0}), {{kLassoL1, grad_only}, 1}, SolverParams{}), MissingCapability);
    CHECK_THROWS_AS(solve_sum(vec({0}), {{kLassoL1}, 1}, SolverParams{}), InvalidArgument);
    CHECK_THROWS_AS(solve_sum(vec({0, 0}), {{kLassoL1, kLassoQuad}, 1}, SolverParams{}), InvalidArgument);
}

TEST_CASE("solvers agree on the lasso objective") {
    Rng rng(35);
    const Vector b = 2.0 * rng.normal_vector(4);
    const FunctionObject f1 = l1_function(0.6);
    const FunctionObject f2 = quad(b);
    const Vector x0 = Vector::Zero(4);
    const SolverParams p = precise();
    SolverParams ista = p;
    ista.method = Method::ista;
    const std::vector<Vector> sols{
        forward_backward(x0, f1, f2, ista).solution, forward_backward(x0, f1, f2, p).solution,
        douglas_rachford(x0, f1, f2, p).solution, admm(x0, f1, f2, nullptr, p).solution,
        solve_sum(x0, {{f1, f2}, 4}, p).solution};
    const double reference = f1.eval(prox_l1(b, 0.6)) + f2.eval(prox_l1(b, 0.6));
    for (const Vector& s : sols) {
        const double obj = f1.eval(s) + f2.eval(s);
        CHECK(std::abs(obj - reference) <= 1e-4 * std::abs(reference));
    }
}

TEST_CASE("douglas_rachford limit does not depend on gamma") {
    SolverParams a = precise(), b = precise();
    a.gamma = 0.1;
    b.gamma = 1.0;
    const double xa = douglas_rachford(vec({0}), kLassoL1, kLassoQuad, a).solution[0];
    const double xb = douglas_rachford(vec({0}), kLassoL1, kLassoQuad, b).solution[0];
    CHECK(std::abs(xa - xb) <= 1e-4);
}

TEST_CASE("stopping on tolerance and on the iteration cap") {
    SolverParams loose;
    loose.tol = 1e-3;
    const SolveResult r = douglas_rachford(vec({10}), kLassoL1, kLassoQuad, loose);
    CHECK(r.stop_reason == StopReason::tolerance);
    CHECK(r.iterations < loose.maxit);

    SolverParams capped;
    capped.tol = 0.0;
    capped.maxit = 7;
    const SolveResult c = douglas_rachford(vec({10}), kLassoL1, kLassoQuad, capped);
    CHECK(c.stop_reason == StopReason::max_iterations);
    CHECK(c.iterations == 7);
}
