#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chana/solver.hpp"

using namespace chana;
namespace {
constexpr double kPi = std::numbers::pi;

ModeField real_mode(int k, VerticalBasis vb, double sin_amp, double cos_amp) {
    return ModeField::term(k, vb, Complex{cos_amp / 2, -sin_amp / 2}) +
           ModeField::term(-k, vb, Complex{cos_amp / 2, sin_amp / 2});
}

VectorModeField shear_flow(double mean, double amp) {
    VectorModeField u{ModeField::constant(mean) +
                          ModeField::term(0, VerticalBasis::cos(1), amp),
                      ModeField::zero()};
    return u;
}

// Divergence-free field with nonzero wall-normal velocity (inflow-outflow).
VectorModeField inflow_flow(double mean, double amp) {
    auto psi = real_mode(1, VerticalBasis::cos(1), 0.0, amp);
    auto u = VectorModeField::from_stream_function(psi);
    u.comp1 = u.comp1 + ModeField::constant(mean);
    return u;
}

VectorModeField small_eddy(double amp) {
    auto psi = real_mode(1, VerticalBasis::sin(1), amp, 0.0) +
               real_mode(2, VerticalBasis::sin(2), 0.0, 0.4 * amp);
    return VectorModeField::from_stream_function(psi);
}

VectorGridField to_grid(const VectorModeField& f, int K, int P) {
    return {from_mode(f.comp1, K, P), from_mode(f.comp2, K, P)};
}

double linf_diff(const VectorGridField& a, const VectorGridField& b) {
    return l2_norm(a - b);
}
}  // namespace

TEST_CASE("construction guards") {
    RadiusSchedule sched{0.1, 1.0, 0.05};
    CHECK_THROWS_AS(EulerChannelSolver(4, 16, shear_flow(1.0, 0.2),
                                       RadiusSchedule{0.1, 1.0, 0.2}),
                    std::invalid_argument);
    // non-divergence-free ubar
    VectorModeField bad{ModeField::zero(),
                        real_mode(1, VerticalBasis::cos(1), 0.3, 0.0)};
    CHECK_THROWS_WITH_AS(EulerChannelSolver(4, 16, bad, sched),
                         doctest::Contains("divergence"),
                         std::invalid_argument);
    // ubar frequencies beyond K
    auto psi = real_mode(6, VerticalBasis::sin(1), 0.1, 0.0);
    CHECK_THROWS_WITH_AS(
        EulerChannelSolver(4, 16, VectorModeField::from_stream_function(psi),
                           sched),
        doctest::Contains("aliased"), std::invalid_argument);
}

TEST_CASE("right side cross-checked against the exact mode expansion") {
    auto check = [&](const VectorModeField& ubar, const VectorModeField& vm,
                     int K, int P) {
        RadiusSchedule sched{0.1, 1.0, 0.05};
        EulerChannelSolver solver(K, P, ubar, sched);
        auto rhs = solver.rhs_shifted(to_grid(vm, K, P));

        // exact route: advection and closed-form pressure in mode algebra
        const VectorModeField u = vm + ubar;
        const ModeField n1 = multiply(u.comp1, differentiate(u.comp1, 1)) +
                             multiply(u.comp2, differentiate(u.comp1, 2));
        const ModeField n2 = multiply(u.comp1, differentiate(u.comp2, 1)) +
                             multiply(u.comp2, differentiate(u.comp2, 2));
        auto pb = build_pressure_problem(vm, ubar, BoundaryForm::FullTrace);
        auto sol = solve_neumann_mode(pb);
        const ModeField w1 = n1 * Complex{-1.0, 0.0} - differentiate(sol.p, 1);
        const ModeField w2 = n2 * Complex{-1.0, 0.0} - differentiate(sol.p, 2);

        double err = 0.0, scale = 1.0;
        for (int i = 0; i < 11; ++i)
            for (int j = 0; j <= 11; ++j) {
                const double x1 = i / 11.0, x2 = j / 11.0;
                err = std::max(err,
                               std::abs(rhs.comp1.eval(x1, x2) - w1.eval(x1, x2)));
                err = std::max(err,
                               std::abs(rhs.comp2.eval(x1, x2) - w2.eval(x1, x2)));
                scale = std::max({scale, std::abs(w1.eval(x1, x2)),
                                  std::abs(w2.eval(x1, x2))});
            }
        CHECK(err / scale < 1e-8);
    };

    VectorModeField zero{ModeField::zero(), ModeField::zero()};
    SUBCASE("v = 0, general inflow background") {
        check(inflow_flow(1.0, 0.3), zero, 8, 32);
    }
    SUBCASE("homogeneous problem: ubar = 0, eddy data") {
        check(zero, small_eddy(0.3), 8, 32);
    }
    SUBCASE("combined") { check(inflow_flow(1.0, 0.2), small_eddy(0.2), 8, 32); }
}

TEST_CASE("zero data stays zero for 1000 steps") {
    RadiusSchedule sched{0.1, 1.0, 0.1};
    EulerChannelSolver solver(4, 16, shear_flow(1.0, 0.3), sched);
    VectorGridField v0{GridField(4, 16), GridField(4, 16)};
    NormParams base{3, 0.1, 0.5, 5};
    auto res = solver.run(v0, 1e-4, base);
    REQUIRE(res.times.size() >= 1001);  // 1000 steps plus the initial state
    CHECK(res.final_time == doctest::Approx(0.1).epsilon(1e-12));
    // v itself stays at coefficient-level roundoff; the norm series sees that
    // roundoff amplified by high-order axis-2 derivative weights, so it gets
    // a looser threshold.
    for (const auto& s : res.series) {
        CHECK(s.Xt <= 1e-8);
        CHECK(s.Yb <= 1e-8);
    }
    for (const auto& st : res.states) CHECK(l2_norm(st) <= 1e-10);
    // constant background also works and keeps the energy constant
    EulerChannelSolver solver2(4, 16,
                               VectorModeField{ModeField::constant(1.0),
                                               ModeField::constant(0.5)},
                               sched);
    auto st = solver2.make_state(v0, 0.0);
    for (int i = 0; i < 5; ++i) st = solver2.step_rk4(st, 1e-4);
    CHECK(l2_norm(st.v) <= 1e-12);
}

TEST_CASE("invariants and guards") {
    RadiusSchedule sched{0.1, 1.0, 0.05};
    EulerChannelSolver solver(4, 16, shear_flow(1.0, 0.2), sched);

    SUBCASE("impermeability violation is rejected with diagnostics") {
        VectorGridField bad{GridField(4, 16), GridField(4, 16)};
        bad.comp2.coeff(0, 0) = 1.0;
        CHECK_THROWS_WITH_AS(solver.make_state(bad, 0.0),
                             doctest::Contains("invariant"),
                             std::runtime_error);
    }
    SUBCASE("time past the radius zero point is rejected") {
        VectorGridField v0{GridField(4, 16), GridField(4, 16)};
        CHECK_THROWS_WITH_AS(solver.make_state(v0, 0.2),
                             doctest::Contains("radius"), std::runtime_error);
    }
    SUBCASE("oversized steps are rejected") {
        VectorGridField v0{GridField(4, 16), GridField(4, 16)};
        auto st = solver.make_state(v0, 0.0);
        CHECK_THROWS_WITH_AS(solver.step_rk4(st, 1.0),
                             doctest::Contains("advective"),
                             std::invalid_argument);
    }
    SUBCASE("blow-up guard trips with a tiny ceiling") {
        SolverOptions opts;
        opts.blowup_factor = 1e-12;
        EulerChannelSolver tight(4, 16, inflow_flow(1.0, 0.3), sched, opts);
        auto v0 = to_grid(small_eddy(0.05), 4, 16);
        NormParams base{3, 0.1, 0.5, 5};
        CHECK_THROWS_WITH_AS(tight.run(v0, 5e-5, base),
                             doctest::Contains("blow-up"), std::runtime_error);
    }
}

TEST_CASE("divergence and trace stay small along a driven run") {
    RadiusSchedule sched{0.1, 1.0, 0.002};
    EulerChannelSolver solver(8, 32, inflow_flow(1.0, 0.2), sched);
    auto v0 = to_grid(small_eddy(0.1), 8, 32);
    NormParams base{3, 0.1, 0.5, 5};
    auto res = solver.run(v0, 2e-4, base);
    bool moved = false;
    for (std::size_t i = 0; i < res.series.size(); ++i) {
        const auto& s = res.series[i];
        const double scale = std::max(1.0, l2_norm(res.states[i]));
        CHECK(s.div <= 1e-9 * scale);
        CHECK(s.trace <= 1e-9 * scale);
        if (i > 0 && linf_diff(res.states[i], res.states[0]) > 1e-6)
            moved = true;
    }
    CHECK(moved);  // the inflow actually drives the perturbation
}

TEST_CASE("fourth order self-convergence") {
    RadiusSchedule sched{0.2, 1.0, 0.05};
    const int K = 6, P = 24;
    EulerChannelSolver solver(K, P, shear_flow(0.5, 0.2), sched);
    auto v0 = to_grid(small_eddy(0.15), K, P);

    auto integrate = [&](double dt, double T) {
        auto st = solver.make_state(v0, 0.0);
        while (st.t < T - 1e-12) st = solver.step_rk4(st, dt);
        return st.v;
    };
    const double T = 0.012, dt = 1.2e-3;
    auto c = integrate(dt, T);
    auto f = integrate(dt / 2, T);
    auto ff = integrate(dt / 4, T);
    const double e1 = linf_diff(c, f), e2 = linf_diff(f, ff);
    CHECK(e2 > 1e-13);  // above roundoff, the ratio is meaningful
    const double ratio = e1 / e2;
    CHECK(ratio > 16.0 * 0.8);
    CHECK(ratio < 16.0 * 1.2);
}

TEST_CASE("uniform background motion only shifts the frame") {
    const int K = 16, P = 32;
    const double c = 0.5, T = 0.1, dt = 1.25e-3;
    RadiusSchedule sched{0.2, 1.0, T};
    NormParams base{3, 0.1, 0.5, 5};
    auto v0 = to_grid(small_eddy(0.05), K, P);

    EulerChannelSolver moving(K, P,
                              VectorModeField{ModeField::constant(c),
                                              ModeField::zero()},
                              sched);
    EulerChannelSolver still(K, P,
                             VectorModeField{ModeField::zero(),
                                             ModeField::zero()},
                             sched);
    auto sm = moving.make_state(v0, 0.0);
    auto ss = still.make_state(v0, 0.0);
    while (sm.t < T - 1e-12) {
        sm = moving.step_rk4(sm, dt);
        ss = still.step_rk4(ss, dt);
    }
    // shift the still-frame answer by x1 -> x1 - c t in Fourier phase
    VectorGridField shifted = ss.v;
    for (int k = -K; k <= K; ++k) {
        const Complex phase = std::exp(Complex{0.0, -2.0 * kPi * k * c * T});
        for (int p = 0; p <= P; ++p) {
            shifted.comp1.coeff(k, p) *= phase;
            shifted.comp2.coeff(k, p) *= phase;
        }
    }
    CHECK(linf_diff(sm.v, shifted) < 1e-6);
}

TEST_CASE("energy balance against the boundary flux") {
    RadiusSchedule sched{0.1, 1.0, 0.002};
    EulerChannelSolver solver(8, 32, inflow_flow(1.0, 0.25), sched);
    auto v0 = to_grid(small_eddy(0.15), 8, 32);
    CHECK(solver.energy_balance_residual(v0) < 1e-6);

    // and along a short run
    auto st = solver.make_state(v0, 0.0);
    for (int i = 0; i < 5; ++i) {
        st = solver.step_rk4(st, 2e-4);
        CHECK(solver.energy_balance_residual(st.v) < 1e-6);
    }
}

TEST_CASE("successive approximation contracts and matches the stepper") {
    const int K = 4, P = 16;
    const double tau0 = 0.1, M = 16.0, T0 = 0.1 / 16.0;
    RadiusSchedule sched{tau0, M, T0};
    NormParams base{3, 0.1, 0.5, 5};
    VectorModeField ubar{ModeField::constant(1.0), ModeField::zero()};
    EulerChannelSolver solver(K, P, ubar, sched);
    auto psi = real_mode(1, VerticalBasis::sin(1), 0.02, 0.0);
    auto v0 = to_grid(VectorModeField::from_stream_function(psi), K, P);

    std::vector<VectorGridField> limit;
    auto tr = solver.picard_run(v0, 6, 32, base, &limit);
    REQUIRE(tr.composite.size() == 6);
    for (double v : tr.a) CHECK(v >= 0.0);
    for (double v : tr.b) CHECK(v >= 0.0);

    auto ratios = tr.contraction_ratios();
    double rho = 0.0;
    for (double r : ratios) {
        CHECK(r < 1.0);
        rho = std::max(rho, r);
    }
    CHECK(tr.uniform_bound_ok);
    CHECK(tr.A > 0.0);

    SUBCASE("doubling M tightens the contraction") {
        RadiusSchedule sched2{tau0, 2 * M, T0 / 2};
        EulerChannelSolver solver2(K, P, ubar, sched2);
        auto tr2 = solver2.picard_run(v0, 6, 32, base);
        double rho2 = 0.0;
        for (double r : tr2.contraction_ratios()) rho2 = std::max(rho2, r);
        CHECK(rho2 < rho);
    }
    SUBCASE("limit agrees with the time stepper at T0") {
        auto st = solver.make_state(v0, 0.0);
        const double dt = T0 / 64;
        while (st.t < T0 - 1e-12) st = solver.step_rk4(st, dt);
        CHECK(linf_diff(limit.back(), st.v) < 1e-6);
    }
    SUBCASE("zero data gives an all-zero trace") {
        VectorGridField z{GridField(K, P), GridField(K, P)};
        EulerChannelSolver hom(K, P,
                               VectorModeField{ModeField::zero(),
                                               ModeField::zero()},
                               sched);
        auto trz = hom.picard_run(z, 3, 8, base);
        for (double v : trz.composite) CHECK(v == 0.0);
    }
}

TEST_CASE("schedule semantics of a full run") {
    // tau0 = 0.2, M = 2: the radius hits zero at t = 0.1 and the run halts
    RadiusSchedule sched{0.2, 2.0, 0.1};
    EulerChannelSolver solver(4, 16, shear_flow(0.5, 0.1), sched);
    VectorGridField v0{GridField(4, 16), GridField(4, 16)};
    NormParams base{3, 0.1, 0.5, 5};
    auto res = solver.run(v0, 1e-3, base);
    CHECK(res.final_time == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(std::abs(res.series.back().tau) < 1e-12);
    // continuing past the halt is refused
    auto st = solver.make_state(res.states.back(), res.final_time);
    CHECK_THROWS_AS(solver.step_rk4(st, 1e-3), std::runtime_error);
}
