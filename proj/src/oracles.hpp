#pragma once

// Brute-force reference computations used by the self-test suites. Nothing here calls
// into the operators being checked.

#include "core.hpp"

#include <functional>

namespace proxsplit::oracle {

using Objective = std::function<double(const Vector&)>;

/// Exhaustive search over the grid {lo_i + k step} intersected with the box, for up to
/// four dimensions. Grid nodes are aligned to integer multiples of `step`.
Vector grid_minimize(const Objective& f, const Vector& lo, const Vector& hi, double step);

/// Coarse exhaustive grid, then repeated exhaustive refinement in a window around the
/// incumbent until `fine_step` is reached.
Vector grid_minimize_refined(const Objective& f, const Vector& lo, const Vector& hi,
                             double coarse_step, double fine_step);

/// Worst violation of F(p + delta d) >= F(p) over `directions` random unit d.
/// Returns max(F(p) - F(p + delta d), 0) over the sampled directions.
double first_order_violation(const Objective& f, const Vector& p, Rng& rng,
                             int directions = 100, double delta = 1e-3);

/// Random orthogonal matrix (QR of a Gaussian matrix with sign-fixed R diagonal).
Eigen::MatrixXd random_orthogonal(Index n, Rng& rng);

}  // namespace proxsplit::oracle
