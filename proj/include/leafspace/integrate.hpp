#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "leafspace/algebra.hpp"
#include "leafspace/domain.hpp"
#include "leafspace/vec.hpp"

namespace leafspace {

struct IntegrateOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double boundary_tol = 1e-9;     // distance at which a trajectory counts as escaped
    double event_param_tol = 1e-10; // bisection resolution for the escape parameter
    double max_step = 0.0;          // optional step-size cap (0 = none)
    long max_steps = 4'000'000;
    int dense_checks = 6;           // containment probes per accepted step
    bool record_samples = false;
    int max_samples = 4096;
};

/// Right-hand side f(t, y). Must return a vector of the state dimension.
using OdeRhs = std::function<Vec(double, const Vec&)>;

enum class IntegrationStatus { reached, escaped, failed };

struct IntegrationResult {
    IntegrationStatus status = IntegrationStatus::failed;
    double t_end = 0.0;              // final parameter (escape parameter t* if escaped)
    Vec y_end;                       // state at t_end (last inside point if escaped)
    double min_boundary_distance = 0.0;
    std::vector<std::pair<double, Vec>> samples;
    std::string error;

    bool reached() const { return status == IntegrationStatus::reached; }
    bool escaped() const { return status == IntegrationStatus::escaped; }
};

/// Adaptive Dormand-Prince 5(4) with dense output, containment events against
/// `domain` on the leading `guard_dims` state components, and step capping
/// while approaching the boundary (this is what makes slit obstacles of
/// width ~1e-9 detectable). Integrates from t0 to t1 in either direction.
IntegrationResult integrate_ode(const OdeRhs& rhs, double t0, double t1, const Vec& y0,
                                const ChartDomain& domain, int guard_dims,
                                const IntegrateOptions& opts = {});

// --- flows of single algebra elements -------------------------------------

enum class FlowTag { reached, escaped };

/// Outcome of flowing zeta_X for parameter t from x0.
struct FlowOutcome {
    FlowTag tag = FlowTag::reached;
    Vec endpoint;                                  // for reached
    double escape_parameter = 0.0;                 // t* for escaped, |t*| < |t|
    Vec last_inside;                               // trajectory point at t*
    std::vector<std::pair<double, Vec>> samples;   // (t, point) along the way
    double min_boundary_distance = 0.0;

    bool reached() const { return tag == FlowTag::reached; }
    bool escaped() const { return tag == FlowTag::escaped; }
};

/// Fl^{zeta_X}_t(x0) with escape detection. Fixed points short-circuit to
/// reached(x0). Throws point_outside_domain / nonfinite_field.
FlowOutcome flow(const VectorFieldAlgebra& algebra, const Vec& X, double t, const Vec& x0,
                 const IntegrateOptions& opts = {});

}  // namespace leafspace
