#include "chana/estimates.hpp"

#include <cmath>
#include <stdexcept>

namespace chana {

namespace {
double binom_d(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

// derivative cache indexed [a1][a2]
template <typename F, typename DiffFn>
std::vector<std::vector<F>> deriv_cache(const F& f, int n1, int n2,
                                        DiffFn dfn) {
    std::vector<std::vector<F>> d(n1 + 1);
    for (int a1 = 0; a1 <= n1; ++a1) {
        d[a1].resize(n2 + 1);
        d[a1][0] = (a1 == 0) ? f : dfn(d[a1 - 1][0], 1);
        for (int a2 = 1; a2 <= n2; ++a2) d[a1][a2] = dfn(d[a1][a2 - 1], 2);
    }
    return d;
}

ModeField mdiff(const ModeField& f, int a) { return differentiate(f, a); }
GridField gdiff(const GridField& f, int a) { return diff(f, a); }

template <typename Scalar, typename DiffFn, typename MulFn>
Scalar s_alpha_impl(const Scalar& u1, const Scalar& u2, const Scalar& w,
                    int a1, int a2, DiffFn dfn, MulFn mul) {
    auto du1 = deriv_cache(u1, a1, a2, dfn);
    auto du2 = deriv_cache(u2, a1, a2, dfn);
    auto dw1 = deriv_cache(dfn(w, 1), a1, a2, dfn);
    auto dw2 = deriv_cache(dfn(w, 2), a1, a2, dfn);
    Scalar out = mul(du1[0][0], dw1[0][0]) * Complex{0.0, 0.0};  // zero, right shape
    for (int b1 = 0; b1 <= a1; ++b1)
        for (int b2 = 0; b2 <= a2; ++b2) {
            if (b1 == 0 && b2 == 0) continue;
            const double c = binom_d(a1, b1) * binom_d(a2, b2);
            out = out + (mul(du1[b1][b2], dw1[a1 - b1][a2 - b2]) +
                         mul(du2[b1][b2], dw2[a1 - b1][a2 - b2])) *
                            Complex{c, 0.0};
        }
    return out;
}
}  // namespace

EstimateMeasurement make_measurement(std::string name, double lhs, double rhs,
                                     double t) {
    EstimateMeasurement m;
    m.name = std::move(name);
    m.lhs = lhs;
    m.rhs = rhs;
    m.t = t;
    m.vacuous = rhs < 1e-14;
    m.ratio = m.vacuous ? 0.0 : lhs / rhs;
    return m;
}

ModeField s_alpha(const VectorModeField& u, const ModeField& w, int a1,
                  int a2) {
    if (a1 < 0 || a2 < 0 || a1 + a2 < 1)
        throw std::invalid_argument("s_alpha: need |alpha| >= 1");
    return s_alpha_impl(u.comp1, u.comp2, w, a1, a2, mdiff,
                        [](const ModeField& a, const ModeField& b) {
                            return multiply(a, b);
                        });
}

VectorModeField s_alpha(const VectorModeField& u, const VectorModeField& w,
                        int a1, int a2) {
    return {s_alpha(u, w.comp1, a1, a2), s_alpha(u, w.comp2, a1, a2)};
}

GridField s_alpha(const VectorGridField& u, const GridField& w, int a1, int a2,
                  double trust_tol) {
    if (a1 < 0 || a2 < 0 || a1 + a2 < 1)
        throw std::invalid_argument("s_alpha: need |alpha| >= 1");
    const int cap = conditioning_cap(w.P(), trust_tol);
    if (a2 + 1 > cap)
        throw std::invalid_argument(
            "s_alpha: axis-2 derivative order exceeds the conditioning cap");
    return s_alpha_impl(u.comp1, u.comp2, w, a1, a2, gdiff,
                        [](const GridField& a, const GridField& b) {
                            return product(a, b);
                        });
}

VectorGridField s_alpha(const VectorGridField& u, const VectorGridField& w,
                        int a1, int a2, double trust_tol) {
    return {s_alpha(u, w.comp1, a1, a2, trust_tol),
            s_alpha(u, w.comp2, a1, a2, trust_tol)};
}

EstimateMeasurement product_estimate_ratio(const VectorModeField& u,
                                           const VectorModeField& v,
                                           const NormParams& p) {
    p.validate();
    double lhs = 0.0;
    for (int n = p.r; n <= p.N_max; ++n)
        for (int a2 = 0; a2 <= n; ++a2) {
            const auto s = s_alpha(u, v, n - a2, a2);
            lhs += coeff_flat(n - a2, a2, p, NormFamily::X) * l2_norm(s);
        }
    const double rhs = norm(v, p, NormFamily::Yt) * norm(u, p, NormFamily::Xt) +
                       norm(v, p, NormFamily::Xt) * norm(u, p, NormFamily::Yt);
    return make_measurement("product_estimate", lhs, rhs);
}

namespace {
double h1_norm(const ModeField& f) {
    return l2_norm(f) + l2_norm(differentiate(f, 1)) +
           l2_norm(differentiate(f, 2));
}

ModeField pow_d1(const ModeField& f, int n) {
    ModeField g = f;
    for (int i = 0; i < n; ++i) g = differentiate(g, 1);
    return g;
}
}  // namespace

std::vector<EstimateMeasurement> corollary_ratios(const VectorModeField& u,
                                                  const VectorModeField& v,
                                                  const NormParams& p) {
    p.validate();
    std::vector<EstimateMeasurement> out;
    const double xu = norm(u, p, NormFamily::Xt), xv = norm(v, p, NormFamily::Xt);
    const double yu = norm(u, p, NormFamily::Yb), yv = norm(v, p, NormFamily::Yb);

    // scalar factor product d2 u1 * d1 v2 shared by the first two measurements
    const ModeField fac =
        multiply(differentiate(u.comp1, 2), differentiate(v.comp2, 1));

    double lhs = 0.0;
    for (int n = p.r; n <= p.N_max; ++n)
        for (int a2 = 2; a2 <= n; ++a2) {
            ModeField g = fac;
            for (int i = 0; i < n - a2; ++i) g = differentiate(g, 1);
            for (int i = 0; i < a2 - 2; ++i) g = differentiate(g, 2);
            const double gn = std::hypot(l2_norm(differentiate(g, 1)),
                                         l2_norm(differentiate(g, 2)));
            lhs += coeff_flat(n - a2, a2, p, NormFamily::X) * gn;
        }
    out.push_back(make_measurement("reduced_vertical", lhs, xu * xv));

    lhs = 0.0;
    for (int n = p.r; n <= p.N_max; ++n) {
        const double fn = l2_norm(pow_d1(fac, n - 1));
        for (int a2 = 0; a2 <= n; ++a2)
            lhs += coeff_flat(n - a2, a2, p, NormFamily::X) * fn;
    }
    out.push_back(make_measurement("tangential_product", lhs, xu * xv));

    const ModeField adv1 = multiply(u.comp1, differentiate(v.comp1, 1)) +
                           multiply(u.comp2, differentiate(v.comp1, 2));
    const ModeField adv2 = multiply(u.comp1, differentiate(v.comp2, 1)) +
                           multiply(u.comp2, differentiate(v.comp2, 2));
    lhs = 0.0;
    for (int n = p.r; n <= p.N_max; ++n) {
        const double fn = std::hypot(h1_norm(pow_d1(adv1, n - 1)),
                                     h1_norm(pow_d1(adv2, n - 1)));
        for (int a2 = 0; a2 <= n; ++a2)
            lhs += coeff_flat(n - a2, a2, p, NormFamily::X) * fn;
    }
    out.push_back(make_measurement("tangential_advection_h1", lhs, xu * yv));

    const VectorModeField adv{adv1, adv2};
    lhs = norm(adv, p, NormFamily::X);
    out.push_back(
        make_measurement("advection_x", lhs, xu * yv + yu * xv));
    return out;
}

std::vector<EstimateMeasurement> apriori_check(
    const std::vector<double>& times, const std::vector<VectorGridField>& v,
    const VectorGridField& ubar, const RadiusSchedule& sched,
    const NormParams& base, int max_measurements) {
    sched.validate();
    if (times.size() != v.size() || times.size() < 3)
        throw std::invalid_argument("apriori_check: need >= 3 aligned samples");
    const double dt_cap = 1e-3 * sched.tau0 / sched.M;
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] - times[i - 1] > dt_cap + 1e-15)
            throw std::invalid_argument(
                "apriori_check: sample spacing too coarse for the centered "
                "difference");

    auto norm_at = [&](const VectorGridField& f, double t, NormFamily fam) {
        NormParams p = base;
        p.tau = sched.tau(t);
        return norm(f, p, fam);
    };

    const int n = static_cast<int>(times.size());
    const int count = std::min(max_measurements, n - 2);
    std::vector<EstimateMeasurement> out;
    for (int m = 0; m < count; ++m) {
        const int i = 1 + static_cast<int>(
            (static_cast<long long>(m) * (n - 2)) / count);
        const double t = times[i];
        const double num = norm_at(v[i + 1], times[i + 1], NormFamily::Xt) -
                           norm_at(v[i - 1], times[i - 1], NormFamily::Xt);
        const double lhs = num / (times[i + 1] - times[i - 1]) +
                           sched.M * norm_at(v[i], t, NormFamily::Y);
        NormParams p = base;
        p.tau = sched.tau(t);
        const double xv = norm(v[i], p, NormFamily::Xt);
        const double yv = norm(v[i], p, NormFamily::Yb);
        const double ytv = norm(v[i], p, NormFamily::Yt);
        const double xu = norm(ubar, p, NormFamily::Xt);
        const double yu = norm(ubar, p, NormFamily::Yb);
        const double rhs = xv * ytv + yu * xv + xu * yv + xu * yu;
        out.push_back(make_measurement("apriori", lhs, rhs, t));
    }
    return out;
}

}  // namespace chana
