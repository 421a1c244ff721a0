#pragma once

#include <string>
#include <vector>

#include "chana/analytic_norms.hpp"
#include "chana/mode_field.hpp"
#include "chana/neumann_pressure.hpp"

namespace chana {

// Closed-form steady background field. All scenarios are divergence-free by
// construction; parse_config re-checks that symbolically.
//   uniform:  (c1, 0)
//   constant: (c1, c2)
//   shear:    (c1 + amp cos(m pi x2), 0)
//   inflow:   (c1, 0) + curl of amp cos(2 pi k x1) cos(m pi x2), which has a
//             nonzero wall-normal component (flow through the channel walls)
// "channel-inflow-shear" is shorthand for shear with c1 = 1, amp = 1/2, m = 1.
struct ScenarioSpec {
    std::string name = "uniform";
    double c1 = 1.0, c2 = 0.0;
    double amp = 0.0;
    int k = 1, m = 1;
};

// One stream-function mode: amp * trig(2 pi k x1) sin(m pi x2). The induced
// velocity (d2 psi, -d1 psi) is divergence-free and impermeable.
struct ModeSpec {
    int k = 1, m = 1;
    double sin_amp = 0.0, cos_amp = 0.0;
};

struct RunConfig {
    ScenarioSpec scenario;
    std::vector<ModeSpec> v0;
    int K = 8, P = 32;
    double dt = 1e-3;
    RadiusSchedule schedule{0.1, 1.0, 0.005};
    NormParams norms{3, 0.1, 0.5, 5};  // tau follows the schedule at runtime
    std::string driver = "rk4";        // rk4 | picard
    BoundaryForm boundary_form = BoundaryForm::FullTrace;
    int picard_iters = 6, picard_samples = 32;
    unsigned long seed = 12345;

    /// Revalidates every invariant with a named diagnostic.
    void validate() const;
};

/// Parses a JSON config. Missing keys get defaults; unknown keys and
/// invariant violations are rejected with a named diagnostic.
RunConfig parse_config(const std::string& text);

/// Canonical JSON echo of a config; parse_config(config_echo(c)) round-trips.
std::string config_echo(const RunConfig& cfg);

/// Hex digest of the canonical echo, recorded in run manifests.
std::string config_hash(const RunConfig& cfg);

VectorModeField scenario_field(const ScenarioSpec& s);
VectorModeField stream_modes(const std::vector<ModeSpec>& modes);

}  // namespace chana
