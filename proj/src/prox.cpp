#include "prox.hpp"

#include "proj.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace proxsplit {

GroupPartition::GroupPartition(std::vector<std::vector<Index>> groups, Index dimension)
    : groups_(std::move(groups)), dimension_(dimension) {
    if (dimension < 0) throw InvalidArgument("GroupPartition: negative dimension");
    std::vector<bool> seen(static_cast<std::size_t>(dimension), false);
    Index covered = 0;
    for (const auto& g : groups_) {
        if (g.empty()) throw InvalidArgument("GroupPartition: empty group");
        for (Index i : g) {
            if (i < 0 || i >= dimension)
                throw InvalidArgument("GroupPartition: index out of range");
            if (seen[static_cast<std::size_t>(i)])
                throw InvalidArgument("GroupPartition: groups overlap");
            seen[static_cast<std::size_t>(i)] = true;
            ++covered;
        }
    }
    if (covered != dimension) throw InvalidArgument("GroupPartition: groups do not cover all indices");
}

GroupPartition GroupPartition::from_labels(std::span<const std::size_t> labels) {
    std::size_t count = 0;
    for (auto l : labels) count = std::max(count, l + 1);
    std::vector<std::vector<Index>> groups(count);
    for (std::size_t i = 0; i < labels.size(); ++i)
        groups[labels[i]].push_back(static_cast<Index>(i));
    return GroupPartition(std::move(groups), static_cast<Index>(labels.size()));
}

GroupPartition GroupPartition::singletons(Index dimension) {
    std::vector<std::vector<Index>> groups;
    groups.reserve(static_cast<std::size_t>(std::max<Index>(dimension, 0)));
    for (Index i = 0; i < dimension; ++i) groups.push_back({i});
    return GroupPartition(std::move(groups), dimension);
}

namespace {

void require_weight(double tau, const char* caller) {
    if (!(tau >= 0.0) || !std::isfinite(tau))
        throw InvalidArgument(std::string(caller) + ": weight must be finite and nonnegative");
}

void require_partition(const Vector& x, const GroupPartition& groups, const char* caller) {
    if (groups.dimension() != x.size())
        throw InvalidArgument(std::string(caller) + ": partition does not match vector size");
}

Vector soft_threshold_all(const Vector& v, double tau) {
    return v - v.cwiseMax(-tau).cwiseMin(tau);
}

Vector gather(const Vector& x, const std::vector<Index>& idx) {
    Vector out(static_cast<Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) out[static_cast<Index>(k)] = x[idx[k]];
    return out;
}

void scatter(Vector& x, const std::vector<Index>& idx, const Vector& block) {
    for (std::size_t k = 0; k < idx.size(); ++k) x[idx[k]] = block[static_cast<Index>(k)];
}

// Forward differences with zero difference leaving the last column (h) / row (v).
void gradient(const RowMatrix& z, RowMatrix& gh, RowMatrix& gv) {
    const Index rows = z.rows();
    const Index cols = z.cols();
    gh.setZero(rows, cols);
    gv.setZero(rows, cols);
    if (cols > 1) gh.leftCols(cols - 1) = z.rightCols(cols - 1) - z.leftCols(cols - 1);
    if (rows > 1) gv.topRows(rows - 1) = z.bottomRows(rows - 1) - z.topRows(rows - 1);
}

// Negative adjoint of `gradient`.
RowMatrix divergence(const RowMatrix& ph, const RowMatrix& pv) {
    const Index rows = ph.rows();
    const Index cols = ph.cols();
    RowMatrix div = RowMatrix::Zero(rows, cols);
    if (cols > 1) {
        div.leftCols(cols - 1) += ph.leftCols(cols - 1);
        div.rightCols(cols - 1) -= ph.leftCols(cols - 1);
    }
    if (rows > 1) {
        div.topRows(rows - 1) += pv.topRows(rows - 1);
        div.bottomRows(rows - 1) -= pv.topRows(rows - 1);
    }
    return div;
}

RowMatrix as_image(const Vector& x, Index rows, Index cols) {
    if (x.size() != rows * cols) throw InvalidArgument("image size does not match shape");
    return Eigen::Map<const RowMatrix>(x.data(), rows, cols);
}

Vector as_vector(const RowMatrix& img) {
    return Eigen::Map<const Vector>(img.data(), img.size());
}

}  // namespace

double soft_threshold(double v, double tau) noexcept {
    return v - std::clamp(v, -tau, tau);
}

Vector prox_l1(const Vector& x, double tau, const LinearOperator* psi) {
    require_weight(tau, "prox_l1");
    if (!psi) return soft_threshold_all(x, tau);
    const double nu = psi->lift_scale("prox_l1");
    const Vector px = psi->forward(x);
    return x + (1.0 / nu) * psi->adjoint(soft_threshold_all(px, tau * nu) - px);
}

Vector prox_l2_sq(const Vector& x, double tau, const Vector& y, const LinearOperator* a) {
    require_weight(tau, "prox_l2_sq");
    if (!a) {
        if (y.size() != x.size()) throw InvalidArgument("prox_l2_sq: target dimension mismatch");
        return (x + 2.0 * tau * y) / (1.0 + 2.0 * tau);
    }
    const double nu = a->lift_scale("prox_l2_sq");
    if (a->out_dim() != y.size()) throw InvalidArgument("prox_l2_sq: target dimension mismatch");
    const Vector ax = a->forward(x);
    const double w = 2.0 * tau * nu;
    return x + (1.0 / nu) * a->adjoint((ax + w * y) / (1.0 + w) - ax);
}

Vector prox_linf(const Vector& x, double tau) {
    require_weight(tau, "prox_linf");
    return x - project_l1_ball(x, tau);
}

Vector prox_l12(const Vector& x, double tau, const GroupPartition& groups) {
    require_weight(tau, "prox_l12");
    require_partition(x, groups, "prox_l12");
    Vector out(x.size());
    for (const auto& g : groups.groups()) {
        if (g.size() == 1) {
            out[g[0]] = soft_threshold(x[g[0]], tau);
            continue;
        }
        const Vector block = gather(x, g);
        const double norm = block.norm();
        const double scale = norm > 0.0 ? std::max(1.0 - tau / norm, 0.0) : 0.0;
        scatter(out, g, scale * block);
    }
    return out;
}

Vector prox_l1inf(const Vector& x, double tau, const GroupPartition& groups) {
    require_weight(tau, "prox_l1inf");
    require_partition(x, groups, "prox_l1inf");
    Vector out(x.size());
    for (const auto& g : groups.groups()) {
        if (g.size() == 1) {
            out[g[0]] = soft_threshold(x[g[0]], tau);
            continue;
        }
        const Vector block = gather(x, g);
        scatter(out, g, block - project_l1_ball(block, tau));
    }
    return out;
}

double tv_norm(const RowMatrix& img) {
    RowMatrix gh, gv;
    gradient(img, gh, gv);
    return (gh.array().square() + gv.array().square()).sqrt().sum();
}

RowMatrix prox_tv(const RowMatrix& img, double tau, const TvParams& params) {
    require_weight(tau, "prox_tv");
    if (params.maxit < 1) throw InvalidArgument("prox_tv: maxit must be at least 1");
    if (tau == 0.0 || img.size() == 0) return img;

    const Index rows = img.rows();
    const Index cols = img.cols();
    // Dual variable p (one 2-vector per pixel, |p_ij| <= 1); primal z = img + tau div p.
    // The normalized dual gradient is D z / tau with |D|^2 <= 8.
    RowMatrix ph = RowMatrix::Zero(rows, cols), pv = RowMatrix::Zero(rows, cols);
    RowMatrix qh = ph, qv = pv;
    RowMatrix gh, gv;
    double t = 1.0;
    int iter = 0;
    double change = 0.0;
    for (; iter < params.maxit; ++iter) {
        const RowMatrix z = img + tau * divergence(qh, qv);
        gradient(z, gh, gv);
        RowMatrix nh = qh + gh / (8.0 * tau);
        RowMatrix nv = qv + gv / (8.0 * tau);
        const auto mag = (nh.array().square() + nv.array().square()).sqrt().max(1.0).eval();
        nh.array() /= mag;
        nv.array() /= mag;

        const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
        const double momentum = (t - 1.0) / t_next;
        const double diff = std::sqrt((nh - ph).squaredNorm() + (nv - pv).squaredNorm());
        const double size = std::sqrt(nh.squaredNorm() + nv.squaredNorm());
        qh = nh + momentum * (nh - ph);
        qv = nv + momentum * (nv - pv);
        ph = std::move(nh);
        pv = std::move(nv);
        t = t_next;

        change = diff / std::max(size, 1e-300);
        if (params.verbosity == Verbosity::per_iteration)
            std::fprintf(stderr, "prox_tv: iter %d, dual change %.3e\n", iter + 1, change);
        if (iter > 0 && change < params.tol) {
            ++iter;
            break;
        }
    }
    if (params.verbosity != Verbosity::silent)
        std::fprintf(stderr, "prox_tv: %d iterations, dual change %.3e\n", iter, change);
    return img + tau * divergence(ph, pv);
}

Eigen::MatrixXd prox_nuclear(const Eigen::MatrixXd& xmat, double tau) {
    require_weight(tau, "prox_nuclear");
    if (tau == 0.0 || xmat.size() == 0) return xmat;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(xmat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector shrunk = (svd.singularValues().array() - tau).max(0.0).matrix();
    return svd.matrixU() * shrunk.asDiagonal() * svd.matrixV().transpose();
}

double nuclear_norm(const Eigen::MatrixXd& xmat) {
    if (xmat.size() == 0) return 0.0;
    return Eigen::JacobiSVD<Eigen::MatrixXd>(xmat).singularValues().sum();
}

FunctionObject l1_function(double weight) {
    require_weight(weight, "l1_function");
    FunctionObject f;
    f.eval = [weight](const Vector& x) { return weight * x.lpNorm<1>(); };
    f.prox = [weight](const Vector& x, double tau) { return prox_l1(x, weight * tau); };
    return f;
}

FunctionObject l2_sq_function(double weight, Vector y, std::optional<LinearOperator> a) {
    require_weight(weight, "l2_sq_function");
    FunctionObject f;
    auto residual = [y, a](const Vector& x) -> Vector {
        return a ? Vector(a->forward(x) - y) : Vector(x - y);
    };
    f.eval = [weight, residual](const Vector& x) { return weight * residual(x).squaredNorm(); };
    f.grad = [weight, residual, a](const Vector& x) -> Vector {
        const Vector r = residual(x);
        return 2.0 * weight * (a ? a->adjoint(r) : r);
    };
    if (!a || a->tight() || a->is_mask()) {
        const double nu = a ? a->lift_scale("l2_sq_function") : 1.0;
        f.lipschitz = 2.0 * weight * nu;
        f.prox = [weight, y, a](const Vector& x, double tau) {
            return prox_l2_sq(x, weight * tau, y, a ? &*a : nullptr);
        };
    }
    return f;
}

FunctionObject linf_function(double weight) {
    require_weight(weight, "linf_function");
    FunctionObject f;
    f.eval = [weight](const Vector& x) { return weight * x.lpNorm<Eigen::Infinity>(); };
    f.prox = [weight](const Vector& x, double tau) { return prox_linf(x, weight * tau); };
    return f;
}

FunctionObject l12_function(GroupPartition groups, double weight) {
    require_weight(weight, "l12_function");
    FunctionObject f;
    f.eval = [groups, weight](const Vector& x) {
        double total = 0.0;
        for (const auto& g : groups.groups()) total += gather(x, g).norm();
        return weight * total;
    };
    f.prox = [groups, weight](const Vector& x, double tau) {
        return prox_l12(x, weight * tau, groups);
    };
    return f;
}

FunctionObject l1inf_function(GroupPartition groups, double weight) {
    require_weight(weight, "l1inf_function");
    FunctionObject f;
    f.eval = [groups, weight](const Vector& x) {
        double total = 0.0;
        for (const auto& g : groups.groups()) total += gather(x, g).lpNorm<Eigen::Infinity>();
        return weight * total;
    };
    f.prox = [groups, weight](const Vector& x, double tau) {
        return prox_l1inf(x, weight * tau, groups);
    };
    return f;
}

FunctionObject tv_function(Index rows, Index cols, double weight, TvParams params) {
    require_weight(weight, "tv_function");
    FunctionObject f;
    f.eval = [rows, cols, weight](const Vector& x) {
        return weight * tv_norm(as_image(x, rows, cols));
    };
    f.prox = [rows, cols, weight, params](const Vector& x, double tau) {
        return as_vector(prox_tv(as_image(x, rows, cols), weight * tau, params));
    };
    return f;
}

FunctionObject nuclear_function(Index rows, Index cols, double weight) {
    require_weight(weight, "nuclear_function");
    FunctionObject f;
    f.eval = [rows, cols, weight](const Vector& x) {
        return weight * nuclear_norm(as_image(x, rows, cols));
    };
    f.prox = [rows, cols, weight](const Vector& x, double tau) {
        const Eigen::MatrixXd m = as_image(x, rows, cols);
        return as_vector(RowMatrix(prox_nuclear(m, weight * tau)));
    };
    return f;
}

}  // namespace proxsplit
