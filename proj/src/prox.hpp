#pragma once

#include "core.hpp"

#include <span>
#include <vector>

namespace proxsplit {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Disjoint index groups covering {0, ..., N-1}.
class GroupPartition {
public:
    GroupPartition(std::vector<std::vector<Index>> groups, Index dimension);

    /// Group g holds every index i with labels[i] == g; labels must be 0..G-1 with no gap.
    static GroupPartition from_labels(std::span<const std::size_t> labels);
    static GroupPartition singletons(Index dimension);

    const std::vector<std::vector<Index>>& groups() const noexcept { return groups_; }
    Index dimension() const noexcept { return dimension_; }

private:
    std::vector<std::vector<Index>> groups_;
    Index dimension_;
};

struct TvParams {
    int maxit = 200;
    double tol = 1e-4;
    Verbosity verbosity = Verbosity::silent;
};

double soft_threshold(double v, double tau) noexcept;

/// argmin_y 1/2 |x - y|^2 + tau |Psi y|_1. Psi must be a tight frame (Psi Psi^T = nu I)
/// or a coordinate mask.
Vector prox_l1(const Vector& x, double tau, const LinearOperator* psi = nullptr);

/// argmin_v 1/2 |x - v|^2 + tau |A v - y|_2^2.
Vector prox_l2_sq(const Vector& x, double tau, const Vector& y,
                  const LinearOperator* a = nullptr);

/// argmin_y 1/2 |x - y|^2 + tau |y|_inf, via x - P_{tau B1}(x).
Vector prox_linf(const Vector& x, double tau);

/// Group shrinkage for sum_g |x_g|_2.
Vector prox_l12(const Vector& x, double tau, const GroupPartition& groups);

/// Group-wise Moreau decomposition for sum_g |x_g|_inf.
Vector prox_l1inf(const Vector& x, double tau, const GroupPartition& groups);

/// Isotropic total variation with forward differences; the difference leaving the
/// last row/column is zero.
double tv_norm(const RowMatrix& img);

/// Approximate argmin_z 1/2 |img - z|_F^2 + tau TV(z) by accelerated projected gradient
/// on the dual (pointwise unit-ball constraint, step 1/8 in normalized units).
RowMatrix prox_tv(const RowMatrix& img, double tau, const TvParams& params = {});

/// Singular value soft-thresholding.
Eigen::MatrixXd prox_nuclear(const Eigen::MatrixXd& xmat, double tau);

double nuclear_norm(const Eigen::MatrixXd& xmat);

// Function objects over flat vectors. Images are interpreted row-major.
FunctionObject l1_function(double weight = 1.0);
FunctionObject l2_sq_function(double weight, Vector y, std::optional<LinearOperator> a = std::nullopt);
FunctionObject linf_function(double weight = 1.0);
FunctionObject l12_function(GroupPartition groups, double weight = 1.0);
FunctionObject l1inf_function(GroupPartition groups, double weight = 1.0);
FunctionObject tv_function(Index rows, Index cols, double weight = 1.0, TvParams params = {});
FunctionObject nuclear_function(Index rows, Index cols, double weight = 1.0);

}  // namespace proxsplit
