#include <doctest.h>

#include "oracles.hpp"
#include "proj.hpp"
#include "prox.hpp"

#include <cmath>
#include <numbers>

using namespace proxsplit;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

double max_abs(const Vector& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("proj_b1 examples") {
    // Grid oracle: minimize |z - x|^2 over the ball, by exhaustive search over a grid whose
    // step divides the radius so the boundary is sampled.
    const Vector x = vec({2, 1});
    const auto F = [&](const Vector& z) {
        return z.lpNorm<1>() <= 1.0 + 1e-12 ? (z - x).squaredNorm() : kInfinity;
    };
    const Vector grid = oracle::grid_minimize(F, vec({-1, -1}), vec({1, 1}), 1e-3);
    CHECK(max_abs(grid - vec({1, 0})) <= 2e-3);
    CHECK(max_abs(proj_b1(x, 1.0) - vec({1, 0})) <= 1e-15);

    const Vector inside = vec({0.3, -0.3});
    CHECK(proj_b1(inside, 1.0) == inside);
    CHECK(max_abs(proj_b1(vec({1, 1}), 1.0) - vec({0.5, 0.5})) <= 1e-15);
}

TEST_CASE("proj_b1 rejects a nonpositive radius") {
    CHECK_THROWS_AS(proj_b1(vec({1, 2}), 0.0), InvalidArgument);
    CHECK_THROWS_AS(proj_b1(vec({1, 2}), -1.0), InvalidArgument);
    CHECK(project_l1_ball(vec({1, 2}), 0.0) == Vector::Zero(2));
}

TEST_CASE("proj_b1 treats ties identically") {
    const Vector p = proj_b1(vec({2, -2, 2, 0.1}), 3.0);
    CHECK(std::abs(p[0]) == std::abs(p[1]));
    CHECK(p[0] == p[2]);
    CHECK(p.lpNorm<1>() == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("proj_b2 examples") {
    CHECK(max_abs(proj_b2(vec({3, 4}), 1.0, Vector::Zero(2)) - vec({0.6, 0.8})) <= 1e-15);
    const Vector y = vec({1, 1});
    const Vector near = vec({1.2, 0.9});
    CHECK(proj_b2(near, 0.5, y) == near);
}

TEST_CASE("proj_b2 with the tight frame 2I") {
    const LinearOperator two = LinearOperator::scaled_identity(2, 2.0);
    REQUIRE(*two.nu() == 4.0);
    const Vector x = vec({3, 4});
    const Vector out = proj_b2(x, 2.0, Vector::Zero(2), &two);
    CHECK(max_abs(out - vec({0.6, 0.8})) <= 1e-15);
    CHECK(two.forward(out).norm() == doctest::Approx(2.0).epsilon(1e-14));

    // On the boundary circle |z| = 1 (the feasible set |2 z| <= 2), the closest point
    // to x found by an angular grid is the projection.
    double best = kInfinity;
    Vector arg(2);
    for (int k = 0; k < 100000; ++k) {
        const double t = 2.0 * std::numbers::pi * k / 100000.0;
        const Vector z = vec({std::cos(t), std::sin(t)});
        const double d = (z - x).squaredNorm();
        if (d < best) best = d, arg = z;
    }
    CHECK(max_abs(arg - out) <= 1e-4);

    Rng rng(1);
    const FunctionObject ball = indicator_b2(2.0, Vector::Zero(2), two);
    CHECK(oracle::first_order_violation(
              [&](const Vector& z) { return 0.5 * (z - x).squaredNorm() + ball.eval(z); }, out, rng) <= 1e-8);
}

TEST_CASE("proj_b2 errors") {
    auto id = [](const Vector& v) { return v; };
    const LinearOperator loose(2, 2, id, id);
    CHECK_THROWS_AS(proj_b2(vec({1, 2}), 1.0, Vector::Zero(2), &loose), UnsupportedOperator);
    CHECK_THROWS_AS(proj_b2(vec({1, 2}), -1.0, Vector::Zero(2)), InvalidArgument);
    CHECK_THROWS_AS(proj_b2(vec({1, 2}), 1.0, Vector::Zero(3)), InvalidArgument);
    CHECK_THROWS_AS(indicator_b2(1.0, Vector::Zero(2), loose), UnsupportedOperator);
    CHECK(proj_b2(vec({1, 2}), 0.0, vec({5, 5})) == vec({5, 5}));
}

TEST_CASE("proj_b2 with a coordinate mask only moves observed pixels") {
    const LinearOperator m = LinearOperator::mask({1, 0, 1});
    const Vector y = vec({0, 0, 0});
    const Vector x = vec({3, 7, 4});
    const Vector out = proj_b2(x, 1.0, y, &m);
    CHECK(out[1] == 7.0);
    CHECK(max_abs(out - vec({0.6, 7, 0.8})) <= 1e-15);
}

TEST_CASE("projection invariants on random points") {
    Rng rng(2);
    const LinearOperator id = LinearOperator::identity(5);
    const LinearOperator two = LinearOperator::scaled_identity(5, 2.0);
    const Vector y = rng.normal_vector(5);
    for (int t = 0; t < 1000; ++t) {
        const Vector x = 3.0 * rng.normal_vector(5);
        const Vector z = 3.0 * rng.normal_vector(5);
        const double eps = 0.1 + 2.0 * rng.uniform();

        const Vector p1 = proj_b1(x, eps);
        CHECK(max_abs(proj_b1(p1, eps) - p1) <= 1e-12);
        CHECK(p1.lpNorm<1>() <= eps * (1 + 1e-12));
        CHECK((p1 - proj_b1(z, eps)).norm() <= (x - z).norm() * (1 + 1e-12));
        CHECK(x - p1 == prox_linf(x, eps));

        const Vector p2 = proj_b2(x, eps, y);
        CHECK(p2 == proj_b2(x, eps, y, &id));
        CHECK(max_abs(proj_b2(p2, eps, y) - p2) <= 1e-12);
        CHECK((p2 - y).norm() <= eps * (1 + 1e-10));
        CHECK((p2 - proj_b2(z, eps, y)).norm() <= (x - z).norm() * (1 + 1e-12));

        const Vector p3 = proj_b2(x, eps, y, &two);
        CHECK(max_abs(proj_b2(p3, eps, y, &two) - p3) <= 1e-12);
        CHECK((two.forward(p3) - y).norm() <= eps * (1 + 1e-10));
        CHECK((p3 - proj_b2(z, eps, y, &two)).norm() <= (x - z).norm() * (1 + 1e-12));
    }
}

TEST_CASE("indicator wrappers ignore the prox weight") {
    const FunctionObject b1 = indicator_b1(1.0);
    const Vector x = vec({2, 1});
    CHECK(b1.prox(x, 0.1) == b1.prox(x, 10.0));
    CHECK(b1.eval(vec({0.5, 0.5})) == 0.0);
    CHECK(std::isinf(b1.eval(x)));
    CHECK_THROWS_AS(indicator_b1(0.0), InvalidArgument);
}
