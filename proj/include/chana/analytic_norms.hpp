#pragma once

#include <vector>

#include "chana/grid_field.hpp"
#include "chana/mode_field.hpp"

namespace chana {

// Parameters of the weighted derivative-sum norms:
//   X  = sum_{r <= |a| <= N_max} |a|^r/|a|! tau^{|a|-r} eps^{a2} ||d^a u||
//   Y  = same with r+1 in the power and tau^{|a|-r-1}
//   Hr = sum_{|a| <= r} ||d^a u||   (additive convention)
//   Xt = X + Hr,  Yt = tau*Y + Hr,  Yb = Y + Hr.
struct NormParams {
    int r = 3;
    double tau = 0.1;
    double eps = 0.1;
    int N_max = 12;

    void validate() const;  // r >= 3, tau > 0, eps in (0,1), N_max >= r+2
};

enum class NormFamily { X, Xt, Y, Yt, Yb, Hr };

const char* family_name(NormFamily f);

/// Weight of ||d^a u|| in the X or Y sum. Throws if |a| is below the family
/// threshold (r for X, r+1 for Y).
double coeff_flat(int a1, int a2, const NormParams& p, NormFamily family);

// Cached L2 norms ||d^a u|| for all |a| <= N_max, with a per-entry relative
// roundoff estimate (zero for exact mode algebra).
class DerivativeTable {
  public:
    DerivativeTable() = default;
    explicit DerivativeTable(int N_max);

    int n_max() const { return N_; }
    double entry(int a1, int a2) const { return e_[idx(a1, a2)]; }
    double roundoff(int a1, int a2) const { return r_[idx(a1, a2)]; }
    void set(int a1, int a2, double value, double roundoff);
    double max_entry() const;

  private:
    int N_ = -1;
    std::vector<double> e_, r_;
    std::size_t idx(int a1, int a2) const;
};

DerivativeTable derivative_table(const ModeField& u, int N_max);
DerivativeTable derivative_table(const VectorModeField& u, int N_max);
/// Grid variants: axis-2 differentiation amplifies roundoff, so N_max must
/// not exceed conditioning_cap(P, trust_tol); otherwise throws an error that
/// names the maximum trustworthy order.
DerivativeTable derivative_table(const GridField& u, int N_max,
                                 double trust_tol = 1e-3);
DerivativeTable derivative_table(const VectorGridField& u, int N_max,
                                 double trust_tol = 1e-3);

double norm_from_table(const DerivativeTable& t, const NormParams& p,
                       NormFamily family);

/// First omitted coefficient (at |a| = N_max+1, a2 = 0) times the largest
/// table entry; an honesty metric for the truncation, not a rigorous bound.
double truncation_tail_bound(const DerivativeTable& t, const NormParams& p,
                             NormFamily family);

double norm(const ModeField& u, const NormParams& p, NormFamily family);
double norm(const VectorModeField& u, const NormParams& p, NormFamily family);
double norm(const GridField& u, const NormParams& p, NormFamily family,
            double trust_tol = 1e-3);
double norm(const VectorGridField& u, const NormParams& p, NormFamily family,
            double trust_tol = 1e-3);

/// (||d1 u||_Xt + ||d2 u||_Xt) / ||u||_Yb with the gradient tables truncated
/// at N_max - 1. Throws on a zero denominator.
double grad_embedding_ratio(const ModeField& u, const NormParams& p);
double grad_embedding_ratio(const VectorModeField& u, const NormParams& p);

// Shrinking analyticity radius tau(t) = tau0 - M*t on [0, T0], T0 <= tau0/M.
struct RadiusSchedule {
    double tau0 = 0.1;
    double M = 1.0;
    double T0 = 0.1;

    void validate() const;
    double tau(double t) const { return tau0 - M * t; }
};

}  // namespace chana
