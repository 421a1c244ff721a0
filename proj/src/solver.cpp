#include "chana/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace chana {

namespace {

VectorGridField advection(const VectorGridField& u) {
    return {product(u.comp1, diff(u.comp1, 1)) +
                product(u.comp2, diff(u.comp1, 2)),
            product(u.comp1, diff(u.comp2, 1)) +
                product(u.comp2, diff(u.comp2, 2))};
}

BoundaryData wall_traces(const GridField& f) {
    BoundaryData g;
    for (int k = -f.K(); k <= f.K(); ++k) {
        Complex top{0.0, 0.0}, bot{0.0, 0.0};
        for (int p = 0; p <= f.P(); ++p) {
            top += f.coeff(k, p);
            bot += f.coeff(k, p) * (p % 2 == 0 ? 1.0 : -1.0);
        }
        if (top != Complex{0.0, 0.0}) g.top[k] = top;
        if (bot != Complex{0.0, 0.0}) g.bottom[k] = bot;
    }
    return g;
}

Complex wall_trace_k0(const GridField& f, bool top) {
    Complex s{0.0, 0.0};
    for (int p = 0; p <= f.P(); ++p)
        s += f.coeff(0, p) * (top || p % 2 == 0 ? 1.0 : -1.0);
    return s;
}

double clamped_tau(double tau) { return std::max(tau, 1e-300); }

}  // namespace

std::vector<double> IterationTrace::contraction_ratios() const {
    std::vector<double> r;
    for (std::size_t i = 1; i < composite.size(); ++i)
        r.push_back(composite[i - 1] < 1e-300
                        ? 0.0
                        : composite[i] / composite[i - 1]);
    return r;
}

EulerChannelSolver::EulerChannelSolver(int K, int P,
                                       const VectorModeField& ubar,
                                       RadiusSchedule sched, SolverOptions opts)
    : K_(K), P_(P), sched_(sched), opts_(opts), psolver_(K, P) {
    sched_.validate();
    if (!ubar.is_divergence_free())
        throw std::invalid_argument(
            "EulerChannelSolver: ubar must be divergence-free");
    AliasingReport rep1, rep2;
    ubar_.comp1 = from_mode(ubar.comp1, K, P, &rep1);
    ubar_.comp2 = from_mode(ubar.comp2, K, P, &rep2);
    if (rep1.k_aliased || rep2.k_aliased)
        throw std::invalid_argument(
            "EulerChannelSolver: ubar has x1 frequencies beyond K (aliased)");
}

EulerChannelSolver::Assembled EulerChannelSolver::assemble(
    const VectorGridField& v) const {
    const VectorGridField u = v + ubar_;
    Assembled out;
    out.N = advection(u);
    GridNeumannProblem pb;
    pb.rhs = (diff(out.N.comp1, 1) + diff(out.N.comp2, 2)) * Complex{-1.0, 0.0};
    GridField bfield;
    if (opts_.boundary_form == BoundaryForm::Background) {
        const GridField w = ubar_.comp2 + v.comp2;
        bfield = (product(ubar_.comp1, diff(w, 1)) +
                  product(ubar_.comp2, diff(w, 2))) *
                 Complex{-1.0, 0.0};
    } else {
        bfield = out.N.comp2 * Complex{-1.0, 0.0};
    }
    pb.g = wall_traces(bfield);
    try {
        out.sol = psolver_.solve(pb);
    } catch (const std::invalid_argument& e) {
        // by now the inputs are validated, so an incompatible pressure
        // problem is a numeric failure of the selected boundary form
        throw std::runtime_error(std::string("pressure solve failed: ") +
                                 e.what());
    }
    return out;
}

VectorGridField EulerChannelSolver::rhs_shifted(
    const VectorGridField& v) const {
    const Assembled a = assemble(v);
    return {a.N.comp1 * Complex{-1.0, 0.0} - diff(a.sol.p, 1),
            a.N.comp2 * Complex{-1.0, 0.0} - diff(a.sol.p, 2)};
}

double EulerChannelSolver::max_step(const VectorGridField& v) const {
    const VectorGridField u = v + ubar_;
    double speed = 0.0;
    for (const Complex& c : u.comp1.values())
        speed = std::max(speed, std::abs(c));
    for (const Complex& c : u.comp2.values())
        speed = std::max(speed, std::abs(c));
    const double h1 = 1.0 / (2 * K_ + 1);
    const double h2 = (1.0 - std::cos(std::numbers::pi / P_)) / 2.0;
    return opts_.cfl * std::min(h1, h2) / std::max(speed, 1e-12);
}

void EulerChannelSolver::check_invariants(const VectorGridField& v,
                                          double t) const {
    const double tau = sched_.tau(t);
    if (tau < -1e-12) {
        std::ostringstream os;
        os << "EulerChannelSolver: t = " << t
           << " is past the radius zero time " << sched_.tau0 / sched_.M;
        throw std::runtime_error(os.str());
    }
    const double scale = std::max(1.0, l2_norm(v));
    const double dn = l2_norm(v.divergence());
    const double tn = v.impermeability_defect();
    if (dn > opts_.invariant_tol * scale || tn > opts_.invariant_tol * scale) {
        std::ostringstream os;
        os << "EulerChannelSolver: invariant violation at t = " << t
           << ": divergence " << dn << ", wall trace " << tn
           << " against tolerance " << opts_.invariant_tol * scale;
        throw std::runtime_error(os.str());
    }
}

SolverState EulerChannelSolver::make_state(const VectorGridField& v,
                                           double t) const {
    check_invariants(v, t);
    SolverState s;
    s.t = t;
    s.tau = sched_.tau(t);
    s.v = v;
    s.div_norm = l2_norm(v.divergence());
    s.trace_norm = v.impermeability_defect();
    const VectorGridField u = v + ubar_;
    const double un = l2_norm(u);
    s.energy = 0.5 * un * un;
    return s;
}

SolverState EulerChannelSolver::step_rk4(const SolverState& s,
                                         double dt) const {
    if (!(dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be > 0");
    const double cap = max_step(s.v);
    if (dt > cap * (1.0 + 1e-9)) {
        std::ostringstream os;
        os << "step_rk4: dt = " << dt << " exceeds the advective bound "
           << cap;
        throw std::invalid_argument(os.str());
    }
    const Complex half{dt / 2.0, 0.0}, full{dt, 0.0};
    const VectorGridField k1 = rhs_shifted(s.v);
    const VectorGridField k2 = rhs_shifted(s.v + k1 * half);
    const VectorGridField k3 = rhs_shifted(s.v + k2 * half);
    const VectorGridField k4 = rhs_shifted(s.v + k3 * full);
    const VectorGridField vn =
        s.v + (k1 + k2 * Complex{2.0, 0.0} + k3 * Complex{2.0, 0.0} + k4) *
                  Complex{dt / 6.0, 0.0};
    return make_state(vn, s.t + dt);
}

RunResult EulerChannelSolver::run(const VectorGridField& v0, double dt,
                                  const NormParams& base) const {
    if (!(dt > 0.0)) throw std::invalid_argument("run: dt must be > 0");
    RunResult out;
    SolverState st = make_state(v0, 0.0);

    NormParams p = base;
    p.tau = clamped_tau(sched_.tau0);
    p.validate();
    const double xt0 = norm(v0, p, NormFamily::Xt);
    const double ceiling = opts_.blowup_factor * std::max(xt0, 1e-9);

    auto record = [&](const SolverState& s) {
        NormParams q = base;
        q.tau = clamped_tau(s.tau);
        const auto table = derivative_table(s.v, base.N_max);
        NormSample ns;
        ns.t = s.t;
        ns.tau = s.tau;
        ns.X = norm_from_table(table, q, NormFamily::X);
        ns.Xt = norm_from_table(table, q, NormFamily::Xt);
        ns.Y = norm_from_table(table, q, NormFamily::Y);
        ns.Yt = norm_from_table(table, q, NormFamily::Yt);
        ns.Yb = norm_from_table(table, q, NormFamily::Yb);
        ns.Hr = norm_from_table(table, q, NormFamily::Hr);
        ns.div = s.div_norm;
        ns.trace = s.trace_norm;
        ns.energy = s.energy;
        out.times.push_back(s.t);
        out.states.push_back(s.v);
        out.series.push_back(ns);
        if (ns.Xt > ceiling) {
            std::ostringstream os;
            os << "run: blow-up guard tripped at t = " << s.t << ": ||v||_Xt = "
               << ns.Xt << " exceeds the ceiling " << ceiling;
            throw std::runtime_error(os.str());
        }
    };

    record(st);
    const double T0 = sched_.T0;
    while (st.t < T0 - 1e-14) {
        const double step = std::min(dt, T0 - st.t);
        st = step_rk4(st, step);
        record(st);
    }
    out.final_time = st.t;
    return out;
}

IterationTrace EulerChannelSolver::picard_run(
    const VectorGridField& v0, int n_iters, int n_samples,
    const NormParams& base,
    std::vector<VectorGridField>* final_iterate) const {
    if (n_iters < 2)
        throw std::invalid_argument("picard_run: need n_iters >= 2");
    if (n_samples < 2)
        throw std::invalid_argument("picard_run: need n_samples >= 2");
    check_invariants(v0, 0.0);

    const double T0 = sched_.T0;
    const double h = T0 / n_samples;
    std::vector<double> times(n_samples + 1);
    for (int j = 0; j <= n_samples; ++j) times[j] = j * h;

    IterationTrace tr;
    tr.M = sched_.M;
    {
        NormParams p0 = base;
        p0.tau = clamped_tau(sched_.tau0);
        p0.validate();
        tr.A = 3.0 * norm(v0, p0, NormFamily::Yb) +
               norm(ubar_, p0, NormFamily::Yb);
    }

    auto xt_yb = [&](const VectorGridField& f, double t, double& xt,
                     double& yb) {
        NormParams q = base;
        q.tau = clamped_tau(sched_.tau(t));
        const auto table = derivative_table(f, base.N_max);
        xt = norm_from_table(table, q, NormFamily::Xt);
        yb = norm_from_table(table, q, NormFamily::Yb);
    };

    std::vector<VectorGridField> cur(n_samples + 1, v0);
    for (int n = 1; n <= n_iters; ++n) {
        std::vector<VectorGridField> prev = cur;
        std::vector<VectorGridField> F;
        F.reserve(n_samples + 1);
        for (int j = 0; j <= n_samples; ++j)
            F.push_back(rhs_shifted(prev[j]));
        cur[0] = v0;
        for (int j = 1; j <= n_samples; ++j)
            cur[j] = cur[j - 1] + (F[j - 1] + F[j]) * Complex{h / 2.0, 0.0};

        double a = 0.0, b = 0.0;
        double sup_xt = 0.0, int_yb = 0.0;
        for (int j = 0; j <= n_samples; ++j) {
            double gx, gy, vx, vy;
            xt_yb(cur[j] - prev[j], times[j], gx, gy);
            xt_yb(cur[j], times[j], vx, vy);
            const double w = (j == 0 || j == n_samples) ? h / 2.0 : h;
            a = std::max(a, gx);
            b += w * gy;
            sup_xt = std::max(sup_xt, vx);
            int_yb += w * vy;
        }
        tr.a.push_back(a);
        tr.b.push_back(b);
        tr.composite.push_back(a + tr.M * b);
        tr.uniform_lhs.push_back(sup_xt + tr.M * int_yb);

        const std::size_t m = tr.composite.size();
        if (m >= 3 && tr.composite[m - 1] > tr.composite[m - 2] &&
            tr.composite[m - 2] > tr.composite[m - 3]) {
            std::ostringstream os;
            os << "picard_run: iterates diverging; composite gaps";
            for (double c : tr.composite) os << " " << c;
            throw std::runtime_error(os.str());
        }
    }
    tr.uniform_bound_ok = true;
    for (double u : tr.uniform_lhs)
        if (u > tr.A) tr.uniform_bound_ok = false;
    if (final_iterate) *final_iterate = std::move(cur);
    return tr;
}

double EulerChannelSolver::energy_balance_residual(
    const VectorGridField& v) const {
    const VectorGridField u = v + ubar_;
    const Assembled a = assemble(v);
    const GridField& p = a.sol.p;
    const VectorGridField rhs{a.N.comp1 * Complex{-1.0, 0.0} - diff(p, 1),
                              a.N.comp2 * Complex{-1.0, 0.0} - diff(p, 2)};
    const double de = (l2_inner(rhs.comp1, u.comp1) +
                       l2_inner(rhs.comp2, u.comp2))
                          .real();
    const GridField e = (product(u.comp1, u.comp1) +
                         product(u.comp2, u.comp2)) *
                            Complex{0.5, 0.0} +
                        p;
    const GridField eflux = product(e, u.comp2);
    const double flux = (wall_trace_k0(eflux, true) -
                         wall_trace_k0(eflux, false))
                            .real();
    const double scale = std::max({1.0, std::abs(de), std::abs(flux)});
    return std::abs(de + flux) / scale;
}

}  // namespace chana
