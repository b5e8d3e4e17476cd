#pragma once

#include <functional>
#include <string>
#include <vector>

namespace proxsplit::selftest {

struct CriterionResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

using Reporter = std::function<void(const CriterionResult&)>;

/// Oracle suites: prox first-order + grid oracle, exact identities, projections,
/// solver agreement, fixed-point residuals, ISTA monotonicity, TV grid oracle.
/// Each result is passed to `report` as soon as it is available.
std::vector<CriterionResult> run_oracle_suites(const Reporter& report = {});

CriterionResult prox_oracle_suite();
CriterionResult exact_identities();
CriterionResult projection_suite();
CriterionResult solver_agreement();
CriterionResult fixed_point_residuals();
CriterionResult ista_monotonicity();
CriterionResult tv_grid_oracle();

}  // namespace proxsplit::selftest
