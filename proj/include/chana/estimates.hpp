#pragma once

#include <string>
#include <vector>

#include "chana/analytic_norms.hpp"
#include "chana/grid_field.hpp"
#include "chana/mode_field.hpp"

namespace chana {

struct EstimateMeasurement {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool vacuous = false;  // rhs below 1e-14; ratio not meaningful
    double t = 0.0;        // sample time where applicable
};

EstimateMeasurement make_measurement(std::string name, double lhs, double rhs,
                                     double t = 0.0);

// Commutator sum S_alpha(u, w) = sum_{0 < beta <= alpha} C(alpha, beta)
// (d^beta u . grad) d^{alpha-beta} w; the beta = 0 term is excluded, so
// d^alpha(u . grad w) = (u . grad) d^alpha w + S_alpha(u, w).
ModeField s_alpha(const VectorModeField& u, const ModeField& w, int a1, int a2);
VectorModeField s_alpha(const VectorModeField& u, const VectorModeField& w,
                        int a1, int a2);
/// Grid variants check that a1 + a2 + 1 axis-2 derivatives stay within the
/// conditioning cap.
GridField s_alpha(const VectorGridField& u, const GridField& w, int a1, int a2,
                  double trust_tol = 1e-3);
VectorGridField s_alpha(const VectorGridField& u, const VectorGridField& w,
                        int a1, int a2, double trust_tol = 1e-3);

/// lhs = sum_{r <= |a| <= N_max} |a|^r/|a|! tau^{|a|-r} eps^{a2}
/// ||S_a(u, v)||, rhs = ||v||_Yt ||u||_Xt + ||v||_Xt ||u||_Yt.
EstimateMeasurement product_estimate_ratio(const VectorModeField& u,
                                           const VectorModeField& v,
                                           const NormParams& p);

// Four related product measurements:
//  reduced_vertical: weighted sum of ||d^{(a1,a2-2)} grad(d2 u1 d1 v2)|| over
//      a2 >= 2, vs ||u||_Xt ||v||_Xt
//  tangential_product: weighted sum of ||d1^{|a|-1}(d2 u1 d1 v2)||, same rhs
//  tangential_advection_h1: weighted sum of ||d1^{|a|-1}(u . grad v)||_H1,
//      vs ||u||_Xt ||v||_Yb
//  advection_x: ||u . grad v||_X vs ||u||_Xt ||v||_Yb + ||u||_Yb ||v||_Xt
std::vector<EstimateMeasurement> corollary_ratios(const VectorModeField& u,
                                                  const VectorModeField& v,
                                                  const NormParams& p);

// Differential inequality along a trajectory: at interior samples,
//   lhs = centered difference of ||v||_Xt(tau(t)) + M ||v||_Y(tau(t))
//   rhs = ||v||_Xt ||v||_Yt + ||ubar||_Yb ||v||_Xt + ||ubar||_Xt ||v||_Yb
//         + ||ubar||_Xt ||ubar||_Yb,  all at tau(t).
// Sample spacing must satisfy dt <= 1e-3 tau0 / M. At most max_measurements
// evenly spaced interior samples are measured (each uses its immediate
// neighbors for the difference quotient).
std::vector<EstimateMeasurement> apriori_check(
    const std::vector<double>& times, const std::vector<VectorGridField>& v,
    const VectorGridField& ubar, const RadiusSchedule& sched,
    const NormParams& base, int max_measurements = 8);

}  // namespace chana
