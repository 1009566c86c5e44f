#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "leafspace/properness.hpp"

namespace leafspace {

/// Closed-form oracles available for a scenario. Each handle is pure and
/// total on its declared domain; absent handles are empty functions.
struct OracleSet {
    /// Trajectory through x0 at group parameter phi (ignores obstacles).
    std::function<Vec(double phi, const Vec& x0)> trajectory;
    /// Maximal parameter interval (t-, t+) of the leaf through (e, x0).
    std::function<std::pair<double, double>(const Vec& x0)> escape_interval;
    /// Exact recurrence set within the deck budget.
    std::function<std::vector<Vec>(const Vec& x0, int budget_K)> recurrence;
    /// Exact isotropy order at a point.
    std::function<int(const Vec& x0)> isotropy_order;
};

struct ExpectedVerdicts {
    std::optional<bool> orbifold_like;
    std::optional<bool> hausdorff;
    std::optional<bool> proper;
    std::optional<int> isotropy_at_center;
    std::optional<bool> free_action;
};

enum class GroupKind { circle, line };  // R^k/Z^k vs R^k

/// A fully wired catalog scenario: domain, action, group, oracles, expected
/// verdicts and default budgets.
struct Scenario {
    std::string name;
    int n = 0;  // rotation order for disc scenarios
    GroupKind group_kind = GroupKind::circle;
    VectorFieldAlgebra algebra;
    GroupSpec group;
    OracleSet oracles;
    ExpectedVerdicts expected;
    int default_K = 8;
    double default_B = 10.0;
    int default_grid = 8;
    int default_samples = 50;
    std::vector<Vec> interesting_loci;   // seeds for sequence-family generation
    Vec sample_box_halfwidth;            // random sampling window
    double sample_margin = 0.05;

    Vec random_point(CounterRng& rng, double margin = -1.0) const;
};

/// Catalog names: full_disc, wedge, wedge_plus_ray, translation_plane,
/// affine_line. Disc scenarios require integer n > 2.
Scenario make_scenario(const std::string& name, int n = 4, GroupKind group = GroupKind::circle);

bool scenario_known(const std::string& name);
std::vector<std::string> scenario_names();

/// Residual between a numeric operation and the scenario's closed-form
/// oracle on identical inputs.
struct OracleResidual {
    std::string what;
    double residual = 0.0;
    int points = 0;
};

OracleResidual oracle_compare_trajectory(const Scenario& sc, const Vec& x0, double phi_lo,
                                         double phi_hi, int samples,
                                         const IntegrateOptions& opts = {});
OracleResidual oracle_compare_escape(const Scenario& sc, const Vec& x0,
                                     const IntegrateOptions& opts = {});
OracleResidual oracle_compare_recurrence(const Scenario& sc, const Vec& x0, int budget_K,
                                         const IntegrateOptions& opts = {});

}  // namespace leafspace
