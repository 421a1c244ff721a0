#pragma once

#include <map>
#include <memory>

#include "chana/analytic_norms.hpp"
#include "chana/grid_field.hpp"
#include "chana/mode_field.hpp"

namespace chana {

// Boundary datum for the pressure problem. `Background` uses
// -ubar . grad(ubar_2 + v_2); `FullTrace` uses the full normal momentum trace
// -(u . grad u)_2 with u = v + ubar. The two coincide when v_1 d1 ubar_2
// vanishes on the walls; FullTrace keeps v_2 = 0 exact in the solver and is
// the default there.
enum class BoundaryForm { Background, FullTrace };

// Fourier coefficients of d2 p prescribed at the two walls (the value of the
// x2-derivative, not the outward normal derivative, on both walls).
struct BoundaryData {
    std::map<int, Complex> bottom, top;

    Complex at_bottom(int k) const;
    Complex at_top(int k) const;
};

struct ResidualReport {
    double interior = 0.0;  // ||laplacian p - rhs||
    double boundary = 0.0;  // l2 of wall trace mismatch of d2 p
    double mean = 0.0;      // integral of p
};

struct ModeNeumannProblem {
    ModeField rhs;
    BoundaryData g;
    /// integral of rhs minus the boundary flux (top minus bottom k=0 data);
    /// zero for solvable data.
    double compatibility_defect() const;
};

struct GridNeumannProblem {
    GridField rhs;
    BoundaryData g;
    double compatibility_defect() const;
};

struct ModePressureSolution {
    ModeField p;
    ResidualReport residual;
};

struct GridPressureSolution {
    GridField p;
    ResidualReport residual;
};

/// Assembles Delta p = -grad u : grad u (u = v + ubar) with the selected
/// boundary form. v must be impermeable. Throws if the compatibility defect
/// exceeds tol.
ModeNeumannProblem build_pressure_problem(const VectorModeField& v,
                                          const VectorModeField& ubar,
                                          BoundaryForm form,
                                          double tol = 1e-10);
GridNeumannProblem build_pressure_problem(const VectorGridField& v,
                                          const VectorGridField& ubar,
                                          BoundaryForm form,
                                          double tol = 1e-7);

/// Closed-form solve of the per-k problems p'' - (2 pi k)^2 p = f with the
/// prescribed end derivatives; trig particular solution plus cosh/sinh (k != 0)
/// or polynomial (k = 0) correction, zero mean. rhs must be trig-pure.
ModePressureSolution solve_neumann_mode(const ModeNeumannProblem& pb);

/// Chebyshev tau solver with cached per-k factorizations. The k = 0 null space
/// is handled by subtracting the compatibility defect from the rhs mean and
/// replacing the top Neumann row with the zero-mean row; that row's mismatch
/// shows up in the reported boundary residual.
class GridNeumannSolver {
  public:
    GridNeumannSolver(int K, int P);
    int K() const { return K_; }
    int P() const { return P_; }

    /// Throws if the compatibility defect exceeds defect_tol.
    GridPressureSolution solve(const GridNeumannProblem& pb,
                               double defect_tol = 1e-8) const;

  private:
    int K_, P_;
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

GridPressureSolution solve_neumann_grid(const GridNeumannProblem& pb,
                                        double defect_tol = 1e-8);

/// Measured constant of the pressure bound: ||grad p||_X divided by
/// ||f1||_Xt ||f2||_Xt + ||g1||_Xt ||g2||_Yb, for the problem
/// Delta p = grad f1 : grad f2, d2 p = (g1 . grad g2)_2 on the walls.
double pressure_estimate_ratio(const VectorModeField& f1,
                               const VectorModeField& f2,
                               const VectorModeField& g1,
                               const VectorModeField& g2,
                               const NormParams& p);

}  // namespace chana
