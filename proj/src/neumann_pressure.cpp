#include "chana/neumann_pressure.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace chana {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cheb_integral(int n) {  // integral of T_n over [-1,1]
    return (n % 2 == 0) ? 2.0 / (1.0 - static_cast<double>(n) * n) : 0.0;
}
}  // namespace

Complex BoundaryData::at_bottom(int k) const {
    auto it = bottom.find(k);
    return it == bottom.end() ? Complex{0.0, 0.0} : it->second;
}

Complex BoundaryData::at_top(int k) const {
    auto it = top.find(k);
    return it == top.end() ? Complex{0.0, 0.0} : it->second;
}

double ModeNeumannProblem::compatibility_defect() const {
    const Complex vol = l2_inner(rhs, ModeField::constant(1.0));
    return std::abs(vol - (g.at_top(0) - g.at_bottom(0)));
}

double GridNeumannProblem::compatibility_defect() const {
    Complex vol{0.0, 0.0};
    for (int p = 0; p <= rhs.P(); ++p)
        vol += rhs.coeff(0, p) * (0.5 * cheb_integral(p));
    return std::abs(vol - (g.at_top(0) - g.at_bottom(0)));
}

namespace {
ModeField dot_grad(const VectorModeField& a, const ModeField& w) {
    return multiply(a.comp1, differentiate(w, 1)) +
           multiply(a.comp2, differentiate(w, 2));
}

GridField dot_grad(const VectorGridField& a, const GridField& w) {
    return product(a.comp1, diff(w, 1)) + product(a.comp2, diff(w, 2));
}
}  // namespace

ModeNeumannProblem build_pressure_problem(const VectorModeField& v,
                                          const VectorModeField& ubar,
                                          BoundaryForm form, double tol) {
    if (!v.is_impermeable())
        throw std::invalid_argument("build_pressure_problem: v must be impermeable");
    const VectorModeField u = v + ubar;
    ModeNeumannProblem pb;
    pb.rhs = (multiply(differentiate(u.comp1, 1), differentiate(u.comp1, 1)) +
              multiply(differentiate(u.comp1, 2), differentiate(u.comp2, 1)) +
              multiply(differentiate(u.comp2, 1), differentiate(u.comp1, 2)) +
              multiply(differentiate(u.comp2, 2), differentiate(u.comp2, 2))) *
             Complex{-1.0, 0.0};
    ModeField bfield;
    if (form == BoundaryForm::Background)
        bfield = dot_grad(ubar, ubar.comp2 + v.comp2) * Complex{-1.0, 0.0};
    else
        bfield = dot_grad(u, u.comp2) * Complex{-1.0, 0.0};
    pb.g.bottom = boundary_trace(bfield, false);
    pb.g.top = boundary_trace(bfield, true);
    if (pb.compatibility_defect() > tol) {
        std::ostringstream os;
        os << "build_pressure_problem: incompatible data, defect "
           << pb.compatibility_defect();
        throw std::invalid_argument(os.str());
    }
    return pb;
}

GridNeumannProblem build_pressure_problem(const VectorGridField& v,
                                          const VectorGridField& ubar,
                                          BoundaryForm form, double tol) {
    const VectorGridField u = v + ubar;
    GridNeumannProblem pb;
    pb.rhs = (product(diff(u.comp1, 1), diff(u.comp1, 1)) +
              product(diff(u.comp1, 2), diff(u.comp2, 1)) +
              product(diff(u.comp2, 1), diff(u.comp1, 2)) +
              product(diff(u.comp2, 2), diff(u.comp2, 2))) *
             Complex{-1.0, 0.0};
    GridField bfield;
    if (form == BoundaryForm::Background)
        bfield = dot_grad(ubar, ubar.comp2 + v.comp2) * Complex{-1.0, 0.0};
    else
        bfield = dot_grad(u, u.comp2) * Complex{-1.0, 0.0};
    const int K = bfield.K(), P = bfield.P();
    for (int k = -K; k <= K; ++k) {
        Complex top{0.0, 0.0}, bot{0.0, 0.0};
        for (int p = 0; p <= P; ++p) {
            top += bfield.coeff(k, p);
            bot += bfield.coeff(k, p) * (p % 2 == 0 ? 1.0 : -1.0);
        }
        if (top != Complex{0.0, 0.0}) pb.g.top[k] = top;
        if (bot != Complex{0.0, 0.0}) pb.g.bottom[k] = bot;
    }
    if (pb.compatibility_defect() > tol) {
        std::ostringstream os;
        os << "build_pressure_problem: incompatible data, defect "
           << pb.compatibility_defect();
        throw std::invalid_argument(os.str());
    }
    return pb;
}

namespace {
ResidualReport mode_residual(const ModeField& p, const ModeNeumannProblem& pb) {
    ResidualReport rep;
    const ModeField lap =
        differentiate(differentiate(p, 1), 1) +
        differentiate(differentiate(p, 2), 2);
    rep.interior = l2_norm(lap - pb.rhs);
    const ModeField dp = differentiate(p, 2);
    auto bot = boundary_trace(dp, false), top = boundary_trace(dp, true);
    std::set<int> ks;
    for (const auto& [k, c] : bot) ks.insert(k);
    for (const auto& [k, c] : top) ks.insert(k);
    for (const auto& [k, c] : pb.g.bottom) ks.insert(k);
    for (const auto& [k, c] : pb.g.top) ks.insert(k);
    double s = 0.0;
    for (int k : ks) {
        auto get = [](const std::map<int, Complex>& m, int kk) {
            auto it = m.find(kk);
            return it == m.end() ? Complex{0.0, 0.0} : it->second;
        };
        s += std::norm(get(bot, k) - pb.g.at_bottom(k)) +
             std::norm(get(top, k) - pb.g.at_top(k));
    }
    rep.boundary = std::sqrt(s);
    rep.mean = std::abs(l2_inner(p, ModeField::constant(1.0)));
    return rep;
}
}  // namespace

ModePressureSolution solve_neumann_mode(const ModeNeumannProblem& pb) {
    if (!pb.rhs.is_trig_pure())
        throw std::invalid_argument("solve_neumann_mode: rhs must be trig-pure");

    // particular solutions term by term
    std::vector<ModeTerm> part;
    for (const auto& t : pb.rhs.terms()) {
        const double lam2 = kTwoPi * t.k * kTwoPi * t.k;
        const int m = (t.vb.kind == VerticalBasis::Kind::Poly) ? 0 : t.vb.m;
        if (t.k == 0 && m == 0) {
            part.push_back({0, VerticalBasis::x2(2), t.amp * 0.5});
            continue;
        }
        const double den = -(m * kPi) * (m * kPi) - lam2;
        part.push_back({t.k, t.vb, t.amp / den});
    }
    ModeField p{std::move(part)};

    const ModeField dpart = differentiate(p, 2);
    auto pb_bot = boundary_trace(dpart, false);
    auto pb_top = boundary_trace(dpart, true);
    auto get = [](const std::map<int, Complex>& m, int k) {
        auto it = m.find(k);
        return it == m.end() ? Complex{0.0, 0.0} : it->second;
    };

    std::set<int> ks;
    for (const auto& [k, c] : pb_bot) ks.insert(k);
    for (const auto& [k, c] : pb_top) ks.insert(k);
    for (const auto& [k, c] : pb.g.bottom) ks.insert(k);
    for (const auto& [k, c] : pb.g.top) ks.insert(k);
    ks.insert(0);

    std::vector<ModeTerm> hom;
    for (int k : ks) {
        const Complex gb = pb.g.at_bottom(k) - get(pb_bot, k);
        const Complex gt = pb.g.at_top(k) - get(pb_top, k);
        if (k == 0) {
            // p_h = b x2; top condition must close by compatibility
            hom.push_back({0, VerticalBasis::x2(1), gb});
            continue;
        }
        const double lam = kTwoPi * std::abs(k);
        const Complex B = gb / lam;
        const Complex A =
            (gt / lam - B * std::cosh(lam)) / std::sinh(lam);
        hom.push_back({k, VerticalBasis::cosh(lam), A});
        hom.push_back({k, VerticalBasis::sinh(lam), B});
    }
    p = p + ModeField{std::move(hom)};

    const Complex mean = l2_inner(p, ModeField::constant(1.0));
    p = p - ModeField::constant(mean);

    ModePressureSolution sol;
    sol.p = std::move(p);
    sol.residual = mode_residual(sol.p, pb);
    return sol;
}

struct GridNeumannSolver::Impl {
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu;  // index k + K
};

GridNeumannSolver::GridNeumannSolver(int K, int P) : K_(K), P_(P) {
    if (K < 0 || P < 4)
        throw std::invalid_argument("GridNeumannSolver: need K >= 0, P >= 4");
    // first-derivative coefficient matrix on [-1,1]
    Eigen::MatrixXd D1 = Eigen::MatrixXd::Zero(P + 1, P + 1);
    for (int p = 0; p <= P; ++p)
        for (int q = p + 1; q <= P; q += 2) D1(p, q) = 2.0 * q;
    D1.row(0) *= 0.5;
    const Eigen::MatrixXd D2 = 4.0 * (D1 * D1);  // map factor 2 per derivative

    auto impl = std::make_shared<Impl>();
    impl->lu.reserve(2 * K + 1);
    for (int k = -K; k <= K; ++k) {
        const double lam2 = kTwoPi * k * kTwoPi * k;
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(P + 1, P + 1);
        M.topRows(P - 1) =
            (D2 - lam2 * Eigen::MatrixXd::Identity(P + 1, P + 1)).topRows(P - 1);
        for (int p = 0; p <= P; ++p) {
            // d2 p at the walls: T_p'(-1) = (-1)^{p+1} p^2, T_p'(1) = p^2,
            // times the map factor 2
            M(P - 1, p) = 2.0 * p * p * ((p % 2 == 0) ? -1.0 : 1.0);
            if (k == 0)
                M(P, p) = 0.5 * cheb_integral(p);  // zero-mean row
            else
                M(P, p) = 2.0 * p * p;
        }
        impl->lu.emplace_back(M);
    }
    impl_ = std::move(impl);
}

GridPressureSolution GridNeumannSolver::solve(const GridNeumannProblem& pb,
                                              double defect_tol) const {
    if (pb.rhs.K() != K_ || pb.rhs.P() != P_)
        throw std::invalid_argument("GridNeumannSolver: shape mismatch");
    const double defect = pb.compatibility_defect();
    if (defect > defect_tol) {
        std::ostringstream os;
        os << "solve_neumann_grid: compatibility defect " << defect
           << " exceeds tolerance " << defect_tol;
        throw std::invalid_argument(os.str());
    }

    GridField rhs = pb.rhs;
    {
        // remove the (logged) defect from the k = 0 mean: the constant field
        // has unit integral over the channel
        Complex vol{0.0, 0.0};
        for (int p = 0; p <= P_; ++p)
            vol += rhs.coeff(0, p) * (0.5 * cheb_integral(p));
        const Complex excess = vol - (pb.g.at_top(0) - pb.g.at_bottom(0));
        rhs.coeff(0, 0) -= excess;
    }

    GridField p(K_, P_);
    for (int k = -K_; k <= K_; ++k) {
        Eigen::VectorXd re(P_ + 1), im(P_ + 1);
        for (int q = 0; q <= P_; ++q) {
            Complex b;
            if (q <= P_ - 2)
                b = rhs.coeff(k, q);
            else if (q == P_ - 1)
                b = pb.g.at_bottom(k);
            else
                b = (k == 0) ? Complex{0.0, 0.0} : pb.g.at_top(k);
            re(q) = b.real();
            im(q) = b.imag();
        }
        const auto& lu = impl_->lu[k + K_];
        const Eigen::VectorXd xr = lu.solve(re), xi = lu.solve(im);
        for (int q = 0; q <= P_; ++q) p.coeff(k, q) = Complex{xr(q), xi(q)};
    }

    GridPressureSolution sol;
    sol.p = std::move(p);

    const GridField lap = diff(diff(sol.p, 1), 1) + diff(diff(sol.p, 2), 2);
    sol.residual.interior = l2_norm(lap - pb.rhs);
    const GridField dp = diff(sol.p, 2);
    double s = 0.0;
    std::set<int> ks;
    for (const auto& [k, c] : pb.g.bottom) ks.insert(k);
    for (const auto& [k, c] : pb.g.top) ks.insert(k);
    for (int k = -K_; k <= K_; ++k) ks.insert(k);
    for (int k : ks) {
        Complex top{0.0, 0.0}, bot{0.0, 0.0};
        for (int q = 0; q <= P_; ++q) {
            top += dp.coeff(k, q);
            bot += dp.coeff(k, q) * (q % 2 == 0 ? 1.0 : -1.0);
        }
        s += std::norm(top - pb.g.at_top(k)) + std::norm(bot - pb.g.at_bottom(k));
    }
    sol.residual.boundary = std::sqrt(s);
    Complex mean{0.0, 0.0};
    for (int q = 0; q <= P_; ++q)
        mean += sol.p.coeff(0, q) * (0.5 * cheb_integral(q));
    sol.p.coeff(0, 0) -= mean;
    sol.residual.mean = 0.0;
    for (int q = 0; q <= P_; ++q)
        sol.residual.mean += std::abs(sol.p.coeff(0, q) * (0.5 * cheb_integral(q)));
    return sol;
}

GridPressureSolution solve_neumann_grid(const GridNeumannProblem& pb,
                                        double defect_tol) {
    return GridNeumannSolver(pb.rhs.K(), pb.rhs.P()).solve(pb, defect_tol);
}

double pressure_estimate_ratio(const VectorModeField& f1,
                               const VectorModeField& f2,
                               const VectorModeField& g1,
                               const VectorModeField& g2,
                               const NormParams& np) {
    ModeNeumannProblem pb;
    pb.rhs = multiply(differentiate(f1.comp1, 1), differentiate(f2.comp1, 1)) +
             multiply(differentiate(f1.comp1, 2), differentiate(f2.comp2, 1)) +
             multiply(differentiate(f1.comp2, 1), differentiate(f2.comp1, 2)) +
             multiply(differentiate(f1.comp2, 2), differentiate(f2.comp2, 2));
    const ModeField bfield = dot_grad(g1, g2.comp2);
    pb.g.bottom = boundary_trace(bfield, false);
    pb.g.top = boundary_trace(bfield, true);
    if (pb.compatibility_defect() > 1e-9)
        throw std::invalid_argument(
            "pressure_estimate_ratio: incompatible problem");
    const auto sol = solve_neumann_mode(pb);
    const VectorModeField gradp{differentiate(sol.p, 1),
                                differentiate(sol.p, 2)};
    const double lhs = norm(gradp, np, NormFamily::X);
    const double rhs = norm(f1, np, NormFamily::Xt) * norm(f2, np, NormFamily::Xt) +
                       norm(g1, np, NormFamily::Xt) * norm(g2, np, NormFamily::Yb);
    if (rhs <= 1e-14) {
        if (lhs <= 1e-14) return 0.0;
        throw std::invalid_argument("pressure_estimate_ratio: zero right side");
    }
    return lhs / rhs;
}

}  // namespace chana
