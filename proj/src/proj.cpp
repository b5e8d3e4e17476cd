#include "proj.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace proxsplit {

Vector project_l1_ball(const Vector& x, double epsilon) {
    if (!(epsilon >= 0.0)) throw InvalidArgument("project_l1_ball: negative radius");
    const Vector mag = x.cwiseAbs();
    if (mag.sum() <= epsilon) return x;
    if (epsilon == 0.0) return Vector::Zero(x.size());

    // Largest rho with u_rho > (sum_{j<=rho} u_j - epsilon) / rho over the sorted
    // magnitudes; theta is that threshold.
    std::vector<double> sorted(mag.data(), mag.data() + mag.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        cumulative += sorted[j];
        const double candidate = (cumulative - epsilon) / static_cast<double>(j + 1);
        if (sorted[j] > candidate) theta = candidate;
        else break;
    }

    Vector out(x.size());
    for (Index i = 0; i < x.size(); ++i) {
        const double shrunk = std::max(mag[i] - theta, 0.0);
        out[i] = std::copysign(shrunk, x[i]);
    }
    return out;
}

Vector proj_b1(const Vector& x, double epsilon) {
    if (!(epsilon > 0.0)) throw InvalidArgument("proj_b1: epsilon must be positive");
    return project_l1_ball(x, epsilon);
}

Vector proj_b2(const Vector& x, double epsilon, const Vector& y, const LinearOperator* a) {
    if (!(epsilon >= 0.0)) throw InvalidArgument("proj_b2: epsilon must be nonnegative");
    if (!a) {
        if (y.size() != x.size()) throw InvalidArgument("proj_b2: center dimension mismatch");
        const Vector r = x - y;
        const double norm = r.norm();
        if (norm <= epsilon) return x;
        // Same expression as the operator branch so that A = I reproduces it bit for bit.
        return x + (epsilon / norm - 1.0) * r;
    }
    const double nu = a->lift_scale("proj_b2");
    if (a->in_dim() != x.size() || a->out_dim() != y.size())
        throw InvalidArgument("proj_b2: operator dimension mismatch");
    const Vector r = a->forward(x) - y;
    const double norm = r.norm();
    if (norm <= epsilon) return x;
    return x + (1.0 / nu) * a->adjoint((epsilon / norm - 1.0) * r);
}

FunctionObject indicator_b1(double epsilon) {
    if (!(epsilon > 0.0)) throw InvalidArgument("indicator_b1: epsilon must be positive");
    FunctionObject f;
    f.eval = [epsilon](const Vector& x) {
        return x.lpNorm<1>() <= epsilon * (1.0 + 1e-12) ? 0.0 : kInfinity;
    };
    f.prox = [epsilon](const Vector& x, double) { return proj_b1(x, epsilon); };
    return f;
}

FunctionObject indicator_b2(double epsilon, Vector y, std::optional<LinearOperator> a) {
    if (!(epsilon >= 0.0)) throw InvalidArgument("indicator_b2: epsilon must be nonnegative");
    if (a) a->lift_scale("indicator_b2");
    FunctionObject f;
    f.eval = [epsilon, y, a](const Vector& x) {
        const double r = a ? (a->forward(x) - y).norm() : (x - y).norm();
        return r <= epsilon * (1.0 + 1e-10) + 1e-14 ? 0.0 : kInfinity;
    };
    f.prox = [epsilon, y, a](const Vector& x, double) {
        return proj_b2(x, epsilon, y, a ? &*a : nullptr);
    };
    return f;
}

}  // namespace proxsplit
