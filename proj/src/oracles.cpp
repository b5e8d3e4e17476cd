#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace proxsplit::oracle {

Vector grid_minimize(const Objective& f, const Vector& lo, const Vector& hi, double step) {
    const Index dim = lo.size();
    if (dim < 1 || dim > 4 || hi.size() != dim || !(step > 0.0))
        throw InvalidArgument("grid_minimize: unsupported grid");
    std::vector<long> first(static_cast<std::size_t>(dim)), last(static_cast<std::size_t>(dim));
    for (Index i = 0; i < dim; ++i) {
        first[static_cast<std::size_t>(i)] = static_cast<long>(std::floor(lo[i] / step));
        last[static_cast<std::size_t>(i)] = static_cast<long>(std::ceil(hi[i] / step));
    }
    std::vector<long> k = first;
    Vector z(dim), best(dim);
    double best_value = kInfinity;
    for (;;) {
        for (Index i = 0; i < dim; ++i) z[i] = static_cast<double>(k[static_cast<std::size_t>(i)]) * step;
        const double v = f(z);
        if (v < best_value) {
            best_value = v;
            best = z;
        }
        Index i = 0;
        for (; i < dim; ++i) {
            auto& ki = k[static_cast<std::size_t>(i)];
            if (ki < last[static_cast<std::size_t>(i)]) {
                ++ki;
                break;
            }
            ki = first[static_cast<std::size_t>(i)];
        }
        if (i == dim) break;
    }
    if (best_value == kInfinity) throw InvalidArgument("grid_minimize: no finite grid point");
    return best;
}

Vector grid_minimize_refined(const Objective& f, const Vector& lo, const Vector& hi,
                             double coarse_step, double fine_step) {
    Vector best = grid_minimize(f, lo, hi, coarse_step);
    double step = coarse_step;
    while (step > fine_step * (1.0 + 1e-9)) {
        const double next = std::max(step / 5.0, fine_step);
        const Vector window = Vector::Constant(lo.size(), 2.0 * step);
        best = grid_minimize(f, (best - window).cwiseMax(lo), (best + window).cwiseMin(hi), next);
        step = next;
    }
    return best;
}

double first_order_violation(const Objective& f, const Vector& p, Rng& rng, int directions,
                             double delta) {
    const double base = f(p);
    double worst = 0.0;
    for (int k = 0; k < directions; ++k) {
        Vector d = rng.normal_vector(p.size());
        d.normalize();
        worst = std::max(worst, base - f(p + delta * d));
    }
    return worst;
}

Eigen::MatrixXd random_orthogonal(Index n, Rng& rng) {
    Eigen::MatrixXd g(n, n);
    for (Index i = 0; i < g.size(); ++i) g.data()[i] = rng.normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q;
}

}  // namespace proxsplit::oracle
