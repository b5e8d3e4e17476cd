#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace proxsplit {

using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class ErrorCode {
    invalid_argument = 1,
    unsupported_operator = 2,
    missing_capability = 3,
    io = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& what) : Error(ErrorCode::invalid_argument, what) {}
};

/// Raised when a closed-form composed prox/projection is requested for an operator that
/// is neither a tight frame nor a coordinate mask.
struct UnsupportedOperator : Error {
    explicit UnsupportedOperator(const std::string& what)
        : Error(ErrorCode::unsupported_operator, what) {}
};

/// Raised when a solver needs a gradient, prox, L-prox or Lipschitz constant that the
/// function object does not provide.
struct MissingCapability : Error {
    explicit MissingCapability(const std::string& what)
        : Error(ErrorCode::missing_capability, what) {}
};

/// Linear map with its adjoint. `forward` maps R^N -> R^M.
///
/// `tight` asserts forward(adjoint(y)) = nu * y. A coordinate mask (0/1 diagonal) is
/// self-adjoint and idempotent but not tight; closed-form composed proxes of separable
/// functions still hold for it with nu = 1, so it is tracked separately.
class LinearOperator {
public:
    using Map = std::function<Vector(const Vector&)>;

    LinearOperator(Index in_dim, Index out_dim, Map forward, Map adjoint,
                   std::optional<double> nu = std::nullopt, bool tight = false);

    static LinearOperator identity(Index n);
    static LinearOperator scaled_identity(Index n, double scale);
    static LinearOperator mask(std::vector<std::uint8_t> keep);

    Vector forward(const Vector& x) const;
    Vector adjoint(const Vector& y) const;

    Index in_dim() const noexcept { return in_dim_; }
    Index out_dim() const noexcept { return out_dim_; }
    std::optional<double> nu() const noexcept { return nu_; }
    bool tight() const noexcept { return tight_; }
    bool is_mask() const noexcept { return mask_; }

    /// Scale to use in the closed-form lift x + (1/nu) A^T (prox(Ax) - Ax). Throws
    /// UnsupportedOperator when no closed form applies.
    double lift_scale(const char* caller) const;

private:
    Index in_dim_;
    Index out_dim_;
    Map forward_;
    Map adjoint_;
    std::optional<double> nu_;
    bool tight_;
    bool mask_ = false;
};

/// A convex function given by its evaluator plus whichever maps are available.
/// `prox(x, tau)` returns argmin_y 1/2 |x - y|^2 + tau f(y).
/// `prox_composed(z, tau)` returns argmin_x tau f(x) + 1/2 |Lx - z|^2 for the operator L
/// the function is paired with in ADMM.
struct FunctionObject {
    using Eval = std::function<double(const Vector&)>;
    using Grad = std::function<Vector(const Vector&)>;
    using Prox = std::function<Vector(const Vector&, double)>;

    Eval eval;
    Grad grad;
    Prox prox;
    Prox prox_composed;
    std::optional<double> lipschitz;

    bool has_grad() const noexcept { return static_cast<bool>(grad); }
    bool has_prox() const noexcept { return static_cast<bool>(prox); }
    bool has_prox_composed() const noexcept { return static_cast<bool>(prox_composed); }

    /// Checks the structural invariants (evaluator present, at least one map, beta > 0).
    void validate() const;
};

enum class Verbosity { silent = 0, summary = 1, per_iteration = 2 };
enum class Method { ista, fista };
enum class StopReason { tolerance, max_iterations };

const char* to_string(StopReason reason) noexcept;

struct SolverParams {
    double gamma = 1.0;
    double lambda = 1.0;
    double tol = 1e-4;
    int maxit = 200;
    Verbosity verbosity = Verbosity::silent;
    Method method = Method::fista;

    void validate() const;
};

struct SolveResult {
    Vector solution;
    std::vector<double> trace;
    int iterations = 0;
    StopReason stop_reason = StopReason::max_iterations;
    /// Solver-specific companion iterate: the Douglas-Rachford y sequence, or the ADMM
    /// split variable that should equal L x at convergence.
    Vector auxiliary;
};

struct ProblemSpec {
    std::vector<FunctionObject> functions;
    Index dimension = 0;

    void validate() const;
};

double evaluate_objective(const ProblemSpec& problem, const Vector& x);

/// Relative-objective stopping rule |n(t) - n(t-1)| / max(|n(t)|, eps) < tol.
/// Never stops when either value is non-finite.
bool should_stop(double current, double previous, double tol) noexcept;

struct AdjointReport {
    double max_discrepancy = 0.0;
};

/// Largest normalized |<Ax, y> - <x, A^T y>| / (|x| |y|) over seeded random pairs.
AdjointReport check_adjoint(const LinearOperator& op, int trials, std::uint64_t seed);

/// Tracks the objective trace and applies the stopping rule; shared by all solvers.
class IterationMonitor {
public:
    IterationMonitor(const char* solver, const SolverParams& params);

    /// Records n(t); returns true when the loop should terminate.
    bool record(double objective);
    void finish(SolveResult& result) const;

private:
    const char* solver_;
    const SolverParams& params_;
    std::vector<double> trace_;
    StopReason reason_ = StopReason::max_iterations;
};

/// Deterministic uniform/normal draws on top of std::mt19937_64. The standard
/// distributions are implementation-defined, which would make seeded outputs differ
/// between standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    double uniform();
    double normal();
    Vector normal_vector(Index n);

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

}  // namespace proxsplit
