#include "chana/analytic_norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace chana {

void NormParams::validate() const {
    if (r < 3) throw std::invalid_argument("NormParams: r must be >= 3");
    if (!(tau > 0.0)) throw std::invalid_argument("NormParams: tau must be > 0");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("NormParams: eps must be in (0,1)");
    if (N_max < r + 2)
        throw std::invalid_argument("NormParams: N_max must be >= r+2");
}

const char* family_name(NormFamily f) {
    switch (f) {
        case NormFamily::X: return "X";
        case NormFamily::Xt: return "Xt";
        case NormFamily::Y: return "Y";
        case NormFamily::Yt: return "Yt";
        case NormFamily::Yb: return "Yb";
        case NormFamily::Hr: return "Hr";
    }
    return "?";
}

namespace {
double coeff_raw(int n, int a2, int power, int shift, const NormParams& p) {
    // n^power / n! * tau^{n-shift} * eps^{a2}
    double c = 1.0;
    for (int i = 1; i <= n; ++i) c *= static_cast<double>(n) / i;  // n^n/n!
    c *= std::pow(static_cast<double>(n), power - n);
    return c * std::pow(p.tau, n - shift) * std::pow(p.eps, a2);
}
}  // namespace

double coeff_flat(int a1, int a2, const NormParams& p, NormFamily family) {
    if (a1 < 0 || a2 < 0)
        throw std::invalid_argument("coeff_flat: negative index");
    const int n = a1 + a2;
    if (family == NormFamily::X) {
        if (n < p.r)
            throw std::invalid_argument("coeff_flat: |alpha| < r for family X");
        return coeff_raw(n, a2, p.r, p.r, p);
    }
    if (family == NormFamily::Y) {
        if (n < p.r + 1)
            throw std::invalid_argument("coeff_flat: |alpha| < r+1 for family Y");
        return coeff_raw(n, a2, p.r + 1, p.r + 1, p);
    }
    throw std::invalid_argument("coeff_flat: family must be X or Y");
}

DerivativeTable::DerivativeTable(int N_max) : N_(N_max) {
    if (N_max < 0) throw std::invalid_argument("DerivativeTable: N_max < 0");
    const std::size_t sz = static_cast<std::size_t>(N_ + 1) * (N_ + 1);
    e_.assign(sz, 0.0);
    r_.assign(sz, 0.0);
}

std::size_t DerivativeTable::idx(int a1, int a2) const {
    if (a1 < 0 || a2 < 0 || a1 + a2 > N_)
        throw std::out_of_range("DerivativeTable: index out of range");
    return static_cast<std::size_t>(a1) * (N_ + 1) + a2;
}

void DerivativeTable::set(int a1, int a2, double value, double roundoff) {
    e_[idx(a1, a2)] = value;
    r_[idx(a1, a2)] = roundoff;
}

double DerivativeTable::max_entry() const {
    double m = 0.0;
    for (int a1 = 0; a1 <= N_; ++a1)
        for (int a2 = 0; a1 + a2 <= N_; ++a2) m = std::max(m, entry(a1, a2));
    return m;
}

namespace {
// Fills the table by walking d1 along rows and d2 along columns, so each
// field is differentiated once from its predecessor.
template <typename Field, typename DiffFn, typename NormFn, typename RoundFn>
DerivativeTable build_table(const Field& u, int N_max, DiffFn diff_fn,
                            NormFn norm_fn, RoundFn round_fn) {
    DerivativeTable t(N_max);
    Field row = u;
    for (int a1 = 0; a1 <= N_max; ++a1) {
        if (a1 > 0) row = diff_fn(row, 1);
        Field cur = row;
        for (int a2 = 0; a1 + a2 <= N_max; ++a2) {
            if (a2 > 0) cur = diff_fn(cur, 2);
            t.set(a1, a2, norm_fn(cur), round_fn(a2));
        }
    }
    return t;
}

double vec_norm(const VectorModeField& f) { return l2_norm(f); }
double vec_norm(const VectorGridField& f) { return l2_norm(f); }

VectorModeField vdiff(const VectorModeField& f, int axis) {
    return {differentiate(f.comp1, axis), differentiate(f.comp2, axis)};
}
VectorGridField vdiff(const VectorGridField& f, int axis) {
    return {diff(f.comp1, axis), diff(f.comp2, axis)};
}

void check_cap(int P, int N_max, double trust_tol) {
    const int cap = conditioning_cap(P, trust_tol);
    if (N_max > cap) {
        std::ostringstream os;
        os << "derivative_table: N_max " << N_max
           << " exceeds the trustworthy axis-2 order " << cap
           << " at Chebyshev degree " << P << " (roundoff tolerance "
           << trust_tol << ")";
        throw std::invalid_argument(os.str());
    }
}
}  // namespace

DerivativeTable derivative_table(const ModeField& u, int N_max) {
    return build_table(
        u, N_max, [](const ModeField& f, int a) { return differentiate(f, a); },
        [](const ModeField& f) { return l2_norm(f); }, [](int) { return 0.0; });
}

DerivativeTable derivative_table(const VectorModeField& u, int N_max) {
    return build_table(
        u, N_max, [](const VectorModeField& f, int a) { return vdiff(f, a); },
        [](const VectorModeField& f) { return vec_norm(f); },
        [](int) { return 0.0; });
}

DerivativeTable derivative_table(const GridField& u, int N_max,
                                 double trust_tol) {
    check_cap(u.P(), N_max, trust_tol);
    const int P = u.P();
    return build_table(
        u, N_max, [](const GridField& f, int a) { return diff(f, a); },
        [](const GridField& f) { return l2_norm(f); },
        [P](int a2) { return diff_roundoff_estimate(P, a2); });
}

DerivativeTable derivative_table(const VectorGridField& u, int N_max,
                                 double trust_tol) {
    check_cap(u.comp1.P(), N_max, trust_tol);
    const int P = u.comp1.P();
    return build_table(
        u, N_max, [](const VectorGridField& f, int a) { return vdiff(f, a); },
        [](const VectorGridField& f) { return vec_norm(f); },
        [P](int a2) { return diff_roundoff_estimate(P, a2); });
}

namespace {
double sum_family(const DerivativeTable& t, const NormParams& p,
                  NormFamily family) {
    // family is X or Y here
    const int lo = (family == NormFamily::X) ? p.r : p.r + 1;
    const int hi = std::min(p.N_max, t.n_max());
    double s = 0.0;
    for (int n = lo; n <= hi; ++n)
        for (int a2 = 0; a2 <= n; ++a2)
            s += coeff_flat(n - a2, a2, p, family) * t.entry(n - a2, a2);
    return s;
}

double hr_sum(const DerivativeTable& t, const NormParams& p) {
    double s = 0.0;
    const int hi = std::min(p.r, t.n_max());
    for (int n = 0; n <= hi; ++n)
        for (int a2 = 0; a2 <= n; ++a2) s += t.entry(n - a2, a2);
    return s;
}
}  // namespace

double norm_from_table(const DerivativeTable& t, const NormParams& p,
                       NormFamily family) {
    p.validate();
    switch (family) {
        case NormFamily::X: return sum_family(t, p, NormFamily::X);
        case NormFamily::Y: return sum_family(t, p, NormFamily::Y);
        case NormFamily::Hr: return hr_sum(t, p);
        case NormFamily::Xt:
            return sum_family(t, p, NormFamily::X) + hr_sum(t, p);
        case NormFamily::Yt:
            return p.tau * sum_family(t, p, NormFamily::Y) + hr_sum(t, p);
        case NormFamily::Yb:
            return sum_family(t, p, NormFamily::Y) + hr_sum(t, p);
    }
    return 0.0;
}

double truncation_tail_bound(const DerivativeTable& t, const NormParams& p,
                             NormFamily family) {
    const NormFamily base =
        (family == NormFamily::X || family == NormFamily::Xt) ? NormFamily::X
                                                              : NormFamily::Y;
    if (family == NormFamily::Hr) return 0.0;
    NormParams q = p;
    q.N_max = p.N_max + 1;
    return coeff_flat(p.N_max + 1, 0, q, base) * t.max_entry();
}

double norm(const ModeField& u, const NormParams& p, NormFamily family) {
    return norm_from_table(derivative_table(u, p.N_max), p, family);
}
double norm(const VectorModeField& u, const NormParams& p, NormFamily family) {
    return norm_from_table(derivative_table(u, p.N_max), p, family);
}
double norm(const GridField& u, const NormParams& p, NormFamily family,
            double trust_tol) {
    return norm_from_table(derivative_table(u, p.N_max, trust_tol), p, family);
}
double norm(const VectorGridField& u, const NormParams& p, NormFamily family,
            double trust_tol) {
    return norm_from_table(derivative_table(u, p.N_max, trust_tol), p, family);
}

namespace {
template <typename Field>
double embedding_ratio_impl(const Field& u, const NormParams& p) {
    const double den = norm(u, p, NormFamily::Yb);
    if (den <= 0.0)
        throw std::invalid_argument("grad_embedding_ratio: zero denominator");
    NormParams q = p;
    q.N_max = p.N_max - 1;
    q.validate();
    double num = 0.0;
    for (int axis : {1, 2}) {
        if constexpr (std::is_same_v<Field, ModeField>)
            num += norm(differentiate(u, axis), q, NormFamily::Xt);
        else
            num += norm(vdiff(u, axis), q, NormFamily::Xt);
    }
    return num / den;
}
}  // namespace

double grad_embedding_ratio(const ModeField& u, const NormParams& p) {
    return embedding_ratio_impl(u, p);
}
double grad_embedding_ratio(const VectorModeField& u, const NormParams& p) {
    return embedding_ratio_impl(u, p);
}

void RadiusSchedule::validate() const {
    if (!(tau0 > 0.0))
        throw std::invalid_argument("RadiusSchedule: tau0 must be > 0");
    if (M < 1.0) throw std::invalid_argument("RadiusSchedule: M must be >= 1");
    if (!(T0 > 0.0))
        throw std::invalid_argument("RadiusSchedule: T0 must be > 0");
    if (T0 > tau0 / M + 1e-15)
        throw std::invalid_argument(
            "RadiusSchedule: T0 exceeds tau0/M, the radius would hit zero "
            "before the final time");
}

}  // namespace chana
