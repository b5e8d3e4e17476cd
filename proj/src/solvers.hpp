#pragma once

#include "core.hpp"

namespace proxsplit {

/// min f1(x) + f2(x) with f2 smooth (beta-Lipschitz gradient). Requires
/// 0 < gamma < 2/beta; ISTA additionally needs lambda in (0, 1].
SolveResult forward_backward(const Vector& x0, const FunctionObject& f1,
                             const FunctionObject& f2, const SolverParams& params);

/// min f1(x) + f2(x) from the two proximity maps; lambda in (0, 2).
/// x_k = prox_{gamma f2}(y_k), y_{k+1} = y_k + lambda (prox_{gamma f1}(2 x_k - y_k) - x_k).
/// `auxiliary` of the result holds the final y.
SolveResult douglas_rachford(const Vector& x0, const FunctionObject& f1,
                             const FunctionObject& f2, const SolverParams& params);

/// min f1(x) + f2(L x), scaled-dual augmented Lagrangian iteration. f1 must supply
/// prox_composed for the same L. `l == nullptr` means identity, in which case a plain
/// prox of f1 is accepted as well. `auxiliary` of the result holds the split variable.
///
/// Callers are responsible for L^T L being invertible and for the relative interiors
/// of the domains intersecting; neither is checked.
SolveResult admm(const Vector& x0, const FunctionObject& f1, const FunctionObject& f2,
                 const LinearOperator* l, const SolverParams& params);

/// min sum_k f_k(x) for K >= 2 prox-capable functions, by Douglas-Rachford on the
/// K-fold product space against the consensus (diagonal) subspace.
SolveResult solve_sum(const Vector& x0, const ProblemSpec& problem, const SolverParams& params);

}  // namespace proxsplit
