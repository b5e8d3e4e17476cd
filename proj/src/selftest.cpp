#include "selftest.hpp"

#include "core.hpp"
#include "oracles.hpp"
#include "proj.hpp"
#include "prox.hpp"
#include "solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace proxsplit::selftest {

namespace {

using oracle::Objective;

class Tally {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok) {
            ++failures_;
            if (failures_ <= 5) notes_ << what << "; ";
        }
    }
    void worst(const char* label, double value) {
        auto it = std::find_if(maxima_.begin(), maxima_.end(),
                               [label](const auto& e) { return e.first == label; });
        if (it == maxima_.end()) maxima_.emplace_back(label, value);
        else it->second = std::max(it->second, value);
    }
    CriterionResult finish(std::string name, double seconds, double budget) {
        CriterionResult r;
        r.name = std::move(name);
        r.seconds = seconds;
        std::ostringstream os;
        for (const auto& [label, v] : maxima_) os << label << "=" << v << " ";
        os << "time=" << seconds << "s/" << budget << "s";
        if (seconds >= budget) {
            ++failures_;
            notes_ << "over time budget; ";
        }
        if (failures_ > 0) os << " FAILURES(" << failures_ << "): " << notes_.str();
        r.passed = failures_ == 0;
        r.detail = os.str();
        return r;
    }

private:
    int failures_ = 0;
    std::ostringstream notes_;
    std::vector<std::pair<std::string, double>> maxima_;
};

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

Vector uniform_vector(Index n, double lo, double hi, Rng& rng) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = lo + (hi - lo) * rng.uniform();
    return v;
}

double uniform(double lo, double hi, Rng& rng) { return lo + (hi - lo) * rng.uniform(); }

double inf_dist(const Vector& a, const Vector& b) { return (a - b).lpNorm<Eigen::Infinity>(); }

// Independent reference evaluations of the defining objectives.
double ref_l1(const Vector& v) { return v.cwiseAbs().sum(); }
double ref_linf(const Vector& v) { return v.cwiseAbs().maxCoeff(); }

double ref_tv(const Vector& z, Index rows, Index cols) {
    double total = 0.0;
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            const double c = z[i * cols + j];
            const double dh = j + 1 < cols ? z[i * cols + j + 1] - c : 0.0;
            const double dv = i + 1 < rows ? z[(i + 1) * cols + j] - c : 0.0;
            total += std::sqrt(dh * dh + dv * dv);
        }
    }
    return total;
}

double ref_nuclear(const Vector& flat_m, Index rows, Index cols) {
    const Eigen::MatrixXd m = Eigen::Map<const RowMatrix>(flat_m.data(), rows, cols);
    return Eigen::BDCSVD<Eigen::MatrixXd>(m).singularValues().sum();
}

Objective prox_objective(const Vector& x, double tau, std::function<double(const Vector&)> f) {
    return [x, tau, f = std::move(f)](const Vector& y) {
        const double v = f(y);
        return v == kInfinity ? kInfinity : 0.5 * (x - y).squaredNorm() + tau * v;
    };
}

// Group membership used by the l12 / l1inf cases: six coordinates in three groups.
GroupPartition six_in_three() { return GroupPartition({{0, 3}, {1, 4, 5}, {2}}, 6); }

double ref_group(const Vector& v, const GroupPartition& g, bool inf_norm) {
    double total = 0.0;
    for (const auto& grp : g.groups()) {
        double acc = 0.0;
        for (Index i : grp) acc = inf_norm ? std::max(acc, std::abs(v[i])) : acc + v[i] * v[i];
        total += inf_norm ? acc : std::sqrt(acc);
    }
    return total;
}

struct FirstOrderCase {
    const char* name;
    Index dim;
    // Returns (p, F) for one random draw.
    std::function<std::pair<Vector, Objective>(Rng&)> draw;
};

std::vector<FirstOrderCase> first_order_cases() {
    std::vector<FirstOrderCase> cases;
    cases.push_back({"prox_l1", 5, [](Rng& rng) {
        const Vector x = 2.0 * rng.normal_vector(5);
        const double tau = uniform(0.05, 2.0, rng);
        return std::pair{prox_l1(x, tau), prox_objective(x, tau, ref_l1)};
    }});
    cases.push_back({"prox_l1_tight_psi", 4, [](Rng& rng) {
        const Eigen::MatrixXd q = 1.5 * oracle::random_orthogonal(4, rng);
        const LinearOperator psi(4, 4, [q](const Vector& v) -> Vector { return q * v; },
                                 [q](const Vector& v) -> Vector { return q.transpose() * v; }, 2.25, true);
        const Vector x = 2.0 * rng.normal_vector(4);
        const double tau = uniform(0.05, 1.0, rng);
        return std::pair{prox_l1(x, tau, &psi),
                         prox_objective(x, tau, [q](const Vector& y) { return ref_l1(q * y); })};
    }});
    cases.push_back({"prox_l1_mask_psi", 5, [](Rng& rng) {
        std::vector<std::uint8_t> keep{1, 0, 1, 1, 0};
        const LinearOperator psi = LinearOperator::mask(keep);
        const Vector x = 2.0 * rng.normal_vector(5);
        const double tau = uniform(0.05, 1.5, rng);
        const Vector m = Vector{{1, 0, 1, 1, 0}};
        return std::pair{prox_l1(x, tau, &psi),
                         prox_objective(x, tau, [m](const Vector& y) { return ref_l1(m.cwiseProduct(y)); })};
    }});
    cases.push_back({"prox_l2_sq", 5, [](Rng& rng) {
        const Vector x = rng.normal_vector(5), t = rng.normal_vector(5);
        const double tau = uniform(0.05, 2.0, rng);
        return std::pair{prox_l2_sq(x, tau, t),
                         prox_objective(x, tau, [t](const Vector& y) { return (y - t).squaredNorm(); })};
    }});
    cases.push_back({"prox_l2_sq_tight", 4, [](Rng& rng) {
        const Eigen::MatrixXd q = 0.7 * oracle::random_orthogonal(4, rng);
        const LinearOperator a(4, 4, [q](const Vector& v) -> Vector { return q * v; },
                               [q](const Vector& v) -> Vector { return q.transpose() * v; }, 0.49, true);
        const Vector x = rng.normal_vector(4), t = rng.normal_vector(4);
        const double tau = uniform(0.05, 2.0, rng);
        return std::pair{prox_l2_sq(x, tau, t, &a),
                         prox_objective(x, tau, [q, t](const Vector& y) { return (q * y - t).squaredNorm(); })};
    }});
    cases.push_back({"prox_l2_sq_mask", 5, [](Rng& rng) {
        const LinearOperator a = LinearOperator::mask({0, 1, 1, 0, 1});
        const Vector m = Vector{{0, 1, 1, 0, 1}};
        const Vector x = rng.normal_vector(5);
        const Vector t = m.cwiseProduct(rng.normal_vector(5));
        const double tau = uniform(0.05, 2.0, rng);
        return std::pair{prox_l2_sq(x, tau, t, &a),
                         prox_objective(x, tau, [m, t](const Vector& y) {
                             return (m.cwiseProduct(y) - t).squaredNorm();
                         })};
    }});
    cases.push_back({"prox_linf", 5, [](Rng& rng) {
        const Vector x = 2.0 * rng.normal_vector(5);
        const double tau = uniform(0.05, 3.0, rng);
        return std::pair{prox_linf(x, tau), prox_objective(x, tau, ref_linf)};
    }});
    cases.push_back({"prox_l12", 6, [](Rng& rng) {
        const Vector x = 2.0 * rng.normal_vector(6);
        const double tau = uniform(0.05, 2.0, rng);
        const auto g = six_in_three();
        return std::pair{prox_l12(x, tau, g),
                         prox_objective(x, tau, [g](const Vector& y) { return ref_group(y, g, false); })};
    }});
    cases.push_back({"prox_l1inf", 6, [](Rng& rng) {
        const Vector x = 2.0 * rng.normal_vector(6);
        const double tau = uniform(0.05, 2.0, rng);
        const auto g = six_in_three();
        return std::pair{prox_l1inf(x, tau, g),
                         prox_objective(x, tau, [g](const Vector& y) { return ref_group(y, g, true); })};
    }});
    cases.push_back({"prox_tv", 9, [](Rng& rng) {
        const Vector x = uniform_vector(9, 0.0, 1.0, rng);
        const double tau = uniform(0.02, 0.4, rng);
        TvParams params;
        params.maxit = 5000;
        params.tol = 1e-12;
        const RowMatrix out = prox_tv(Eigen::Map<const RowMatrix>(x.data(), 3, 3), tau, params);
        return std::pair{Vector(Eigen::Map<const Vector>(out.data(), 9)),
                         prox_objective(x, tau, [](const Vector& y) { return ref_tv(y, 3, 3); })};
    }});
    cases.push_back({"prox_nuclear", 6, [](Rng& rng) {
        const Vector x = 2.0 * rng.normal_vector(6);
        const double tau = uniform(0.05, 2.0, rng);
        const Eigen::MatrixXd m = Eigen::Map<const RowMatrix>(x.data(), 3, 2);
        const RowMatrix out = prox_nuclear(m, tau);
        return std::pair{Vector(Eigen::Map<const Vector>(out.data(), 6)),
                         prox_objective(x, tau, [](const Vector& y) { return ref_nuclear(y, 3, 2); })};
    }});
    cases.push_back({"proj_b1", 5, [](Rng& rng) {
        const Vector x = 2.0 * rng.normal_vector(5);
        const double eps = uniform(0.2, 3.0, rng);
        return std::pair{proj_b1(x, eps), prox_objective(x, 1.0, [eps](const Vector& y) {
                             return ref_l1(y) <= eps * (1.0 + 1e-12) ? 0.0 : kInfinity;
                         })};
    }});
    cases.push_back({"proj_b2", 5, [](Rng& rng) {
        const Vector x = 2.0 * rng.normal_vector(5), c = rng.normal_vector(5);
        const double eps = uniform(0.2, 2.0, rng);
        return std::pair{proj_b2(x, eps, c), prox_objective(x, 1.0, [eps, c](const Vector& y) {
                             return (y - c).norm() <= eps * (1.0 + 1e-12) ? 0.0 : kInfinity;
                         })};
    }});
    return cases;
}

// Grid step and window for the low-dimensional brute-force comparisons.
constexpr double kGridStep = 1e-3;
constexpr double kGridTol = 2e-3;

Vector box_lo(std::initializer_list<Vector> pts) {
    Vector lo = *pts.begin();
    for (const auto& p : pts) lo = lo.cwiseMin(p);
    return lo.array() - 0.01;
}

Vector box_hi(std::initializer_list<Vector> pts) {
    Vector hi = *pts.begin();
    for (const auto& p : pts) hi = hi.cwiseMax(p);
    return hi.array() + 0.01;
}

void grid_checks(Tally& tally, Rng& rng) {
    auto compare = [&tally](const char* name, const Vector& got, const Vector& want) {
        const double d = inf_dist(got, want);
        tally.worst(name, d);
        tally.expect(d <= kGridTol, std::string(name) + fmt(" grid mismatch %.3g", d));
    };

    // Separable operators: the 3-D objective is a sum of 1-D terms, so per-coordinate
    // exhaustive search is the exhaustive 3-D search.
    auto per_coordinate = [](const Vector& x, const std::function<double(double, double)>& term,
                             double lo, double hi) {
        Vector out(x.size());
        for (Index i = 0; i < x.size(); ++i) {
            const double xi = x[i];
            out[i] = oracle::grid_minimize(
                [&](const Vector& v) { return term(v[0], xi); }, Vector::Constant(1, lo),
                Vector::Constant(1, hi), kGridStep)[0];
        }
        return out;
    };

    std::vector<std::pair<Vector, double>> l1_cases{{Vector{{3.0, -1.0, 0.5}}, 1.0}};
    for (int k = 0; k < 5; ++k) l1_cases.push_back({uniform_vector(3, -2.0, 2.0, rng), uniform(0.1, 1.5, rng)});
    for (const auto& [x, tau] : l1_cases) {
        auto term = [t = tau](double v, double xi) { return 0.5 * (v - xi) * (v - xi) + t * std::abs(v); };
        compare("grid_prox_l1", prox_l1(x, tau), per_coordinate(x, term, -3.5, 3.5));
    }

    for (int k = 0; k < 5; ++k) {
        const Vector x = uniform_vector(3, -2.0, 2.0, rng);
        const Vector t = uniform_vector(3, -2.0, 2.0, rng);
        const double tau = uniform(0.1, 1.5, rng);
        Vector want(3);
        for (Index i = 0; i < 3; ++i) {
            const double xi = x[i], ti = t[i];
            want[i] = oracle::grid_minimize(
                [&](const Vector& v) { return 0.5 * (v[0] - xi) * (v[0] - xi) + tau * (v[0] - ti) * (v[0] - ti); },
                Vector::Constant(1, -2.5), Vector::Constant(1, 2.5), kGridStep)[0];
        }
        compare("grid_prox_l2_sq", prox_l2_sq(x, tau, t), want);
    }

    std::vector<std::pair<Vector, double>> linf_cases{{Vector{{2.0, 1.0}}, 1.0}};
    for (int k = 0; k < 4; ++k) linf_cases.push_back({uniform_vector(2, -1.5, 1.5, rng), uniform(0.1, 1.5, rng)});
    for (const auto& [x, tau] : linf_cases) {
        const Vector zero = Vector::Zero(2);
        const Vector want = oracle::grid_minimize(
            prox_objective(x, tau, ref_linf), box_lo({x, zero}), box_hi({x, zero}), kGridStep);
        compare("grid_prox_linf", prox_linf(x, tau), want);
    }

    // l12 / l1inf with groups {0,1}, {2}: exhaustive 2-D search on the first block,
    // 1-D on the second.
    const GroupPartition g3({{0, 1}, {2}}, 3);
    std::vector<std::pair<Vector, double>> group_cases{{Vector{{3.0, 4.0, 1.0}}, 2.5}, {Vector{{2.0, 1.0, 5.0}}, 1.0}};
    for (int k = 0; k < 4; ++k) group_cases.push_back({uniform_vector(3, -1.5, 1.5, rng), uniform(0.1, 1.5, rng)});
    for (const auto& [x, tau] : group_cases) {
        for (bool inf_norm : {false, true}) {
            const Vector head = x.head(2);
            const Vector zero = Vector::Zero(2);
            const Vector block = oracle::grid_minimize(
                prox_objective(head, tau, [inf_norm](const Vector& y) { return inf_norm ? ref_linf(y) : y.norm(); }),
                box_lo({head, zero}), box_hi({head, zero}), kGridStep);
            const Vector tail = x.tail(1);
            const Vector single = oracle::grid_minimize(
                prox_objective(tail, tau, ref_l1), box_lo({tail, Vector::Zero(1)}),
                box_hi({tail, Vector::Zero(1)}), kGridStep);
            const Vector want{{block[0], block[1], single[0]}};
            if (inf_norm) compare("grid_prox_l1inf", prox_l1inf(x, tau, g3), want);
            else compare("grid_prox_l12", prox_l12(x, tau, g3), want);
        }
    }

    // 1x2 total variation.
    std::vector<std::pair<Vector, double>> tv_cases{{Vector{{2.0, 0.0}}, 0.5}, {Vector{{2.0, 0.0}}, 5.0}};
    for (int k = 0; k < 4; ++k) tv_cases.push_back({uniform_vector(2, 0.0, 1.5, rng), uniform(0.05, 1.0, rng)});
    for (const auto& [x, tau] : tv_cases) {
        TvParams params;
        params.maxit = 2000;
        const RowMatrix img = Eigen::Map<const RowMatrix>(x.data(), 1, 2);
        const RowMatrix out = prox_tv(img, tau, params);
        const Vector got = Eigen::Map<const Vector>(out.data(), 2);
        const Vector want = oracle::grid_minimize(
            prox_objective(x, tau, [](const Vector& y) { return ref_tv(y, 1, 2); }),
            Vector::Constant(2, x.minCoeff() - 0.01), Vector::Constant(2, x.maxCoeff() + 0.01), kGridStep);
        compare("grid_prox_tv", got, want);
    }

    // Nuclear norm on diagonal 2x2 matrices: search over the two diagonal entries.
    std::vector<std::pair<Vector, double>> nuc_cases{{Vector{{3.0, 1.0}}, 2.0}};
    for (int k = 0; k < 4; ++k) nuc_cases.push_back({uniform_vector(2, -2.0, 2.0, rng), uniform(0.1, 1.5, rng)});
    for (const auto& [d, tau] : nuc_cases) {
        const Eigen::MatrixXd m = d.asDiagonal();
        const Eigen::MatrixXd out = prox_nuclear(m, tau);
        const Vector got = out.diagonal();
        const Vector zero = Vector::Zero(2);
        const Vector want = oracle::grid_minimize(
            prox_objective(d, tau, [](const Vector& y) { return ref_l1(y); }), box_lo({d, zero}),
            box_hi({d, zero}), kGridStep);
        compare("grid_prox_nuclear_diag", got, want);
        tally.expect(std::abs(out(0, 1)) + std::abs(out(1, 0)) < 1e-12, "nuclear off-diagonal nonzero");
    }

    // l1 ball in 2-D; radii on the grid so the boundary edges contain grid nodes.
    std::vector<std::pair<Vector, double>> b1_cases{{Vector{{2.0, 1.0}}, 1.0}, {Vector{{1.0, 1.0}}, 1.0}};
    for (int k = 0; k < 4; ++k)
        b1_cases.push_back({uniform_vector(2, -1.5, 1.5, rng), std::round(uniform(0.2, 1.2, rng) * 1000.0) / 1000.0});
    for (const auto& [x, eps] : b1_cases) {
        const Vector zero = Vector::Zero(2);
        const Vector want = oracle::grid_minimize(
            [x, eps](const Vector& y) {
                return ref_l1(y) <= eps + 1e-9 ? (x - y).squaredNorm() : kInfinity;
            },
            box_lo({x, zero}), box_hi({x, zero}), kGridStep);
        compare("grid_proj_b1", proj_b1(x, eps), want);
    }

    // l2 ball in 2-D: exhaustive search along the boundary at arc step 1e-3 (and the
    // center itself when feasible).
    for (int k = 0; k < 6; ++k) {
        const Vector x = uniform_vector(2, -2.0, 2.0, rng), c = uniform_vector(2, -0.5, 0.5, rng);
        const double eps = uniform(0.2, 1.5, rng);
        Vector want = x;
        if ((x - c).norm() > eps) {
            const Vector angle = oracle::grid_minimize(
                [&](const Vector& th) {
                    const Vector y = c + eps * Vector{{std::cos(th[0]), std::sin(th[0])}};
                    return (x - y).squaredNorm();
                },
                Vector::Constant(1, -std::numbers::pi), Vector::Constant(1, std::numbers::pi), kGridStep / eps);
            want = c + eps * Vector{{std::cos(angle[0]), std::sin(angle[0])}};
        }
        compare("grid_proj_b2", proj_b2(x, eps, c), want);
    }
}

}  // namespace

CriterionResult prox_oracle_suite() {
    Stopwatch clock;
    Tally tally;
    Rng rng(20240101);
    for (const auto& c : first_order_cases()) {
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            auto [p, objective] = c.draw(rng);
            worst = std::max(worst, oracle::first_order_violation(objective, p, rng, 100, 1e-3));
        }
        tally.worst(c.name, worst);
        tally.expect(worst <= 1e-8, std::string(c.name) + fmt(" first-order violation %.3g", worst));
    }
    grid_checks(tally, rng);
    return tally.finish("1 prox oracle suite", clock.seconds(), 30.0);
}

CriterionResult exact_identities() {
    Stopwatch clock;
    Tally tally;
    Rng rng(7);
    double moreau = 0.0, decomposition = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const Index n = 1 + static_cast<Index>(rng.uniform() * 20.0);
        const Vector x = 3.0 * rng.normal_vector(n);
        const double tau = uniform(1e-3, 3.0, rng);
        const Vector clamp = x.cwiseMax(-tau).cwiseMin(tau);
        moreau = std::max(moreau, inf_dist(prox_l1(x, tau) + clamp, x));
        decomposition = std::max(decomposition, inf_dist(prox_linf(x, tau) + proj_b1(x, tau), x));
    }
    tally.worst("moreau_l1", moreau);
    tally.worst("linf_b1_decomposition", decomposition);
    tally.expect(moreau <= 1e-12, "Moreau identity");
    tally.expect(decomposition <= 1e-12, "prox_linf/proj_b1 decomposition");
    return tally.finish("2 exact identities", clock.seconds(), 1.0);
}

CriterionResult projection_suite() {
    Stopwatch clock;
    Tally tally;
    Rng rng(11);
    const Index n = 6;
    const LinearOperator identity = LinearOperator::identity(n);
    const LinearOperator twice = LinearOperator::scaled_identity(n, 2.0);

    double idem = 0.0, expand = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const Vector x = 2.0 * rng.normal_vector(n), z = 2.0 * rng.normal_vector(n);
        const double eps = uniform(0.1, 4.0, rng);

        const Vector px = proj_b1(x, eps), pz = proj_b1(z, eps);
        idem = std::max(idem, inf_dist(proj_b1(px, eps), px));
        tally.expect(px.lpNorm<1>() <= eps * (1.0 + 1e-12), "proj_b1 infeasible output");
        expand = std::max(expand, (px - pz).norm() - (x - z).norm());

        const Vector c = rng.normal_vector(n);
        for (const LinearOperator* a : {static_cast<const LinearOperator*>(nullptr), &identity, &twice}) {
            const Vector qx = proj_b2(x, eps, c, a), qz = proj_b2(z, eps, c, a);
            idem = std::max(idem, inf_dist(proj_b2(qx, eps, c, a), qx));
            const double r = a ? (a->forward(qx) - c).norm() : (qx - c).norm();
            tally.expect(r <= eps * (1.0 + 1e-10), "proj_b2 infeasible output");
            expand = std::max(expand, (qx - qz).norm() - (x - z).norm());
        }
        tally.expect((proj_b2(x, eps, c) - proj_b2(x, eps, c, &identity)).lpNorm<Eigen::Infinity>() == 0.0,
                     "proj_b2 identity operator differs from plain projection");
    }
    tally.worst("idempotence", idem);
    tally.worst("expansion", expand);
    tally.expect(idem <= 1e-12, fmt("idempotence %.3g", idem));
    tally.expect(expand <= 1e-12, fmt("nonexpansiveness violated by %.3g", expand));
    return tally.finish("3 projection suite", clock.seconds(), 1.0);
}

namespace {

FunctionObject scalar_abs(double weight) { return l1_function(weight); }

FunctionObject scalar_quadratic(double center) {
    return l2_sq_function(0.5, Vector::Constant(1, center));
}

}  // namespace

CriterionResult solver_agreement() {
    Stopwatch clock;
    Tally tally;
    const Vector x0 = Vector::Zero(1);
    const FunctionObject f1 = scalar_abs(0.5);
    const FunctionObject f2 = scalar_quadratic(2.0);

    SolverParams params;
    params.tol = 1e-12;
    params.maxit = 2000;

    auto check = [&](const char* name, const SolveResult& r) {
        const double err = std::abs(r.solution[0] - 1.5);
        tally.worst(name, err);
        tally.expect(err <= 1e-4, std::string(name) + fmt(" off by %.3g", err));
    };
    params.method = Method::ista;
    check("fb_ista", forward_backward(x0, f1, f2, params));
    params.method = Method::fista;
    check("fb_fista", forward_backward(x0, f1, f2, params));
    check("douglas_rachford", douglas_rachford(x0, f1, f2, params));
    check("admm", admm(x0, f1, f2, nullptr, params));
    ProblemSpec problem{{f1, f2}, 1};
    check("solve_sum", solve_sum(x0, problem, params));
    return tally.finish("4 solver agreement", clock.seconds(), 5.0);
}

CriterionResult fixed_point_residuals() {
    Stopwatch clock;
    Tally tally;
    Rng rng(50);
    const Index n = 50;
    Eigen::MatrixXd m(60, n);
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal() / std::sqrt(60.0);
    const Vector b = rng.normal_vector(60);
    const double mu = 0.1;
    const Eigen::MatrixXd hessian = m.transpose() * m + mu * Eigen::MatrixXd::Identity(n, n);
    const Vector mtb = m.transpose() * b;
    const double beta = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hessian).eigenvalues().maxCoeff();

    // f2(x) = 1/2 |Mx - b|^2 + mu/2 |x|^2 (strongly convex), f1 = 0.3 |x|_1.
    FunctionObject smooth;
    smooth.eval = [m, b, mu](const Vector& x) { return 0.5 * (m * x - b).squaredNorm() + 0.5 * mu * x.squaredNorm(); };
    smooth.grad = [hessian, mtb](const Vector& x) -> Vector { return hessian * x - mtb; };
    smooth.lipschitz = beta;
    smooth.prox = [hessian, mtb, n](const Vector& x, double tau) -> Vector {
        const Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(n, n) + tau * hessian;
        return sys.ldlt().solve(x + tau * mtb);
    };
    const FunctionObject sparse = l1_function(0.3);

    SolverParams params;
    params.tol = 0.0;
    params.maxit = 3000;
    params.gamma = 1.0 / beta;
    params.method = Method::fista;
    const Vector x0 = Vector::Zero(n);

    const SolveResult fb = forward_backward(x0, sparse, smooth, params);
    const Vector& x = fb.solution;
    const double fb_res =
        (x - sparse.prox(x - params.gamma * smooth.grad(x), params.gamma)).norm() / (1.0 + x.norm());

    params.gamma = 1.0;
    const SolveResult dr = douglas_rachford(x0, sparse, smooth, params);
    const Vector& y = dr.auxiliary;
    const Vector py = smooth.prox(y, params.gamma);
    const double dr_res = (py - sparse.prox(2.0 * py - y, params.gamma)).norm() / (1.0 + y.norm());

    tally.worst("fb_relative_residual", fb_res);
    tally.worst("dr_relative_residual", dr_res);
    tally.expect(fb_res <= 1e-4, fmt("forward-backward residual %.3g", fb_res));
    tally.expect(dr_res <= 1e-4, fmt("Douglas-Rachford residual %.3g", dr_res));
    return tally.finish("5 fixed-point residuals", clock.seconds(), 10.0);
}

CriterionResult ista_monotonicity() {
    Stopwatch clock;
    Tally tally;
    Rng rng(6);
    double worst_rise = -kInfinity;
    for (int instance = 0; instance < 20; ++instance) {
        const Index n = 10 + static_cast<Index>(rng.uniform() * 20.0);
        const Index rows = n + 5;
        Eigen::MatrixXd m(rows, n);
        for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
        const Vector b = rng.normal_vector(rows);
        const Eigen::MatrixXd hessian = m.transpose() * m;
        const Vector mtb = m.transpose() * b;
        const double beta = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hessian).eigenvalues().maxCoeff();

        FunctionObject quad;
        quad.eval = [m, b](const Vector& x) { return 0.5 * (m * x - b).squaredNorm(); };
        quad.grad = [hessian, mtb](const Vector& x) -> Vector { return hessian * x - mtb; };
        quad.lipschitz = beta;

        SolverParams params;
        params.method = Method::ista;
        params.lambda = 1.0;
        params.gamma = 1.0 / beta;
        params.tol = 0.0;
        params.maxit = 300;
        const SolveResult r = forward_backward(3.0 * rng.normal_vector(n), l1_function(uniform(0.1, 2.0, rng)), quad, params);
        for (std::size_t k = 1; k < r.trace.size(); ++k) {
            const double rise = r.trace[k] - r.trace[k - 1];
            worst_rise = std::max(worst_rise, rise);
            tally.expect(rise <= 1e-10, fmt("objective rose by %.3g at iteration %g", rise, double(k)));
        }
    }
    tally.worst("max_increase", worst_rise);
    return tally.finish("6 ISTA monotonicity", clock.seconds(), 5.0);
}

CriterionResult tv_grid_oracle() {
    Stopwatch clock;
    Tally tally;
    constexpr double levels[] = {0.0, 0.5, 1.0};
    constexpr double taus[] = {0.1, 0.25, 0.6};
    TvParams params;
    params.maxit = 2000;

    auto run_shape = [&](Index rows, Index cols) {
        const Index n = rows * cols;
        Index combos = 1;
        for (Index i = 0; i < n; ++i) combos *= 3;
        for (Index code = 0; code < combos; ++code) {
            Vector x(n);
            Index c = code;
            for (Index i = 0; i < n; ++i, c /= 3) x[i] = levels[c % 3];
            for (double tau : taus) {
                const RowMatrix out = prox_tv(Eigen::Map<const RowMatrix>(x.data(), rows, cols), tau, params);
                const Vector got = Eigen::Map<const Vector>(out.data(), n);
                const Objective f = [&x, tau, rows, cols](const Vector& z) {
                    return 0.5 * (x - z).squaredNorm() + tau * ref_tv(z, rows, cols);
                };
                const Vector lo = Vector::Zero(n), hi = Vector::Ones(n);
                const Vector want = n <= 2 ? oracle::grid_minimize(f, lo, hi, 1e-2)
                                           : oracle::grid_minimize_refined(f, lo, hi, 0.05, 1e-2);
                const double d = inf_dist(got, want);
                tally.worst(rows == 1 ? "max_dev_1x2" : "max_dev_2x2", d);
                tally.expect(d <= 2e-2, fmt("TV grid mismatch %.3g at tau %.2f", d, tau));
            }
        }
    };
    run_shape(1, 2);
    run_shape(2, 2);
    return tally.finish("8 TV grid oracle", clock.seconds(), 60.0);
}

std::vector<CriterionResult> run_oracle_suites(const Reporter& report) {
    std::vector<CriterionResult> results;
    using Suite = CriterionResult (*)();
    const std::pair<const char*, Suite> suites[] = {
        {"1 prox oracle suite", prox_oracle_suite},
        {"2 exact identities", exact_identities},
        {"3 projection suite", projection_suite},
        {"4 solver agreement", solver_agreement},
        {"5 fixed-point residuals", fixed_point_residuals},
        {"6 ISTA monotonicity", ista_monotonicity},
        {"8 TV grid oracle", tv_grid_oracle},
    };
    for (const auto& [name, suite] : suites) {
        CriterionResult r;
        try {
            r = suite();
        } catch (const std::exception& e) {
            r.name = name;
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        if (report) report(r);
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace proxsplit::selftest
