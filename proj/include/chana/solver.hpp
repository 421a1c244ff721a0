#pragma once

#include <vector>

#include "chana/analytic_norms.hpp"
#include "chana/grid_field.hpp"
#include "chana/mode_field.hpp"
#include "chana/neumann_pressure.hpp"

namespace chana {

struct SolverOptions {
    BoundaryForm boundary_form = BoundaryForm::FullTrace;
    double invariant_tol = 1e-9;   // relative divergence / trace threshold
    double blowup_factor = 1e3;    // ceiling multiple of the initial Xt norm
    double cfl = 0.5;              // fraction of the advective step bound
};

// Accepted state of the shifted system, with per-step diagnostics. The
// divergence and wall-trace norms are kept below
// invariant_tol * max(1, ||v||) or the step is rejected.
struct SolverState {
    double t = 0.0;
    double tau = 0.0;
    VectorGridField v;
    double div_norm = 0.0;
    double trace_norm = 0.0;
    double energy = 0.0;  // 1/2 ||v + ubar||^2
};

struct NormSample {
    double t = 0.0, tau = 0.0;
    double X = 0.0, Xt = 0.0, Y = 0.0, Yt = 0.0, Yb = 0.0, Hr = 0.0;
    double div = 0.0, trace = 0.0, energy = 0.0;
};

struct RunResult {
    std::vector<double> times;
    std::vector<VectorGridField> states;  // aligned with times
    std::vector<NormSample> series;
    double final_time = 0.0;
};

// Successive-approximation differences: a[n] = sup_t ||w^(n)||_Xt and
// b[n] = integral of ||w^(n)||_Yb over [0, T0], where w^(n) is the gap
// between consecutive iterates (n starts at 1). composite[n] = a[n] + M b[n].
struct IterationTrace {
    std::vector<double> a, b, composite;
    double M = 0.0;
    // A = 3 ||v0||_Yb(tau0) + ||ubar||_Yb(tau0), the target of the uniform
    // bound sup ||v^(n)||_Xt + M int ||v^(n)||_Yb <= A.
    double A = 0.0;
    std::vector<double> uniform_lhs;  // one entry per iterate, n >= 1
    bool uniform_bound_ok = false;

    /// composite[n] / composite[n-1] for n >= 1 (empty first entry skipped).
    std::vector<double> contraction_ratios() const;
};

// Pseudospectral solver for the shifted incompressible Euler system on the
// periodic channel: dv/dt = -(v + ubar) . grad (v + ubar) - grad p, with p
// chosen so that v stays divergence-free and impermeable. ubar is a steady
// divergence-free closed-form field, sampled onto the grid once.
class EulerChannelSolver {
  public:
    EulerChannelSolver(int K, int P, const VectorModeField& ubar,
                       RadiusSchedule sched, SolverOptions opts = {});

    int K() const { return K_; }
    int P() const { return P_; }
    const VectorGridField& ubar() const { return ubar_; }
    const RadiusSchedule& schedule() const { return sched_; }
    const SolverOptions& options() const { return opts_; }

    /// Full right side: advection assembled with dealiased products, pressure
    /// from the divergence of the advection term (so the discrete
    /// compatibility defect vanishes identically), boundary data per the
    /// configured form. The result is divergence-free and impermeable up to
    /// the tau-row truncation.
    VectorGridField rhs_shifted(const VectorGridField& v) const;

    /// Largest time step admitted by the advective CFL-like bound
    /// cfl * (grid spacing) / (max speed of v + ubar).
    double max_step(const VectorGridField& v) const;

    /// State with diagnostics evaluated at time t. Throws if the invariants
    /// are violated.
    SolverState make_state(const VectorGridField& v, double t) const;

    /// Classical 4-stage step with one pressure solve per stage. Throws if dt
    /// exceeds the CFL-like bound or the stepped state violates an invariant.
    SolverState step_rk4(const SolverState& s, double dt) const;

    /// Integrate from t = 0 to the schedule's T0 (halting exactly there, so
    /// tau never goes negative), recording every accepted state and its norm
    /// report at tau(t). Throws if ||v||_Xt exceeds the blow-up ceiling.
    RunResult run(const VectorGridField& v0, double dt,
                  const NormParams& base) const;

    /// Successive approximation on [0, T0]: each iterate freezes the right
    /// side at the previous one, so the update is a cumulative trapezoid
    /// quadrature on n_samples + 1 time points. Returns the gap trace; the
    /// final iterate trajectory is written through final_iterate when given.
    /// Throws if the composite gap grows on two consecutive iterations.
    IterationTrace picard_run(const VectorGridField& v0, int n_iters,
                              int n_samples, const NormParams& base,
                              std::vector<VectorGridField>* final_iterate =
                                  nullptr) const;

    /// Relative defect of d/dt (1/2 ||v + ubar||^2) against the boundary
    /// flux of (1/2 |u|^2 + p) u . n.
    double energy_balance_residual(const VectorGridField& v) const;

  private:
    int K_, P_;
    VectorGridField ubar_;
    RadiusSchedule sched_;
    SolverOptions opts_;
    GridNeumannSolver psolver_;

    struct Assembled {
        VectorGridField N;  // advection term of v + ubar
        GridPressureSolution sol;
    };
    Assembled assemble(const VectorGridField& v) const;
    void check_invariants(const VectorGridField& v, double t) const;
};

}  // namespace chana
