#pragma once

#include "core.hpp"

namespace proxsplit {

/// Euclidean projection onto the closed l1 ball {v : |v|_1 <= epsilon}.
/// Throws InvalidArgument for epsilon <= 0.
Vector proj_b1(const Vector& x, double epsilon);

/// Same projection but also accepts epsilon == 0 (returns the origin). Used by the
/// Moreau-decomposition proxes where the radius is a prox weight that may vanish.
Vector project_l1_ball(const Vector& x, double epsilon);

/// Euclidean projection onto {v : |A v - y|_2 <= epsilon}. With `a` absent the set is
/// the ball of radius epsilon around y. A present operator must be a tight frame or a
/// coordinate mask.
Vector proj_b2(const Vector& x, double epsilon, const Vector& y,
               const LinearOperator* a = nullptr);

/// Indicator-function wrappers; the prox weight is accepted and ignored.
FunctionObject indicator_b1(double epsilon);
FunctionObject indicator_b2(double epsilon, Vector y, std::optional<LinearOperator> a = std::nullopt);

}  // namespace proxsplit
