#include "chana/reporting.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "chana/combinatorics.hpp"
#include "chana/estimates.hpp"
#include "chana/solver.hpp"

namespace chana {

namespace {

constexpr const char* kToolVersion = "chanalytic 0.1.0";

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class ArtifactWriter {
  public:
    ArtifactWriter(const RunConfig& cfg, const DispatchOptions& opts,
                   std::string subcommand)
        : dir_(opts.out_dir), sub_(std::move(subcommand)), cfg_(cfg) {
        std::filesystem::create_directories(dir_);
    }

    void add(const std::string& name) { names_.push_back(name); }

    std::ofstream open(const std::string& name) {
        names_.push_back(name);
        std::ofstream out(std::filesystem::path(dir_) / name);
        if (!out)
            throw std::runtime_error("cannot write " + name + " in " + dir_);
        return out;
    }

    void finish() {
        nlohmann::json m;
        m["tool"] = kToolVersion;
        m["subcommand"] = sub_;
        m["config_hash"] = config_hash(cfg_);
        m["seed"] = cfg_.seed;
        m["artifacts"] = names_;
        std::ofstream out(std::filesystem::path(dir_) / "manifest.json");
        out << m.dump(2) << "\n";
    }

  private:
    std::string dir_, sub_;
    const RunConfig& cfg_;
    std::vector<std::string> names_;
};

VectorGridField initial_grid(const RunConfig& cfg) {
    const VectorModeField v0 = stream_modes(cfg.v0);
    return {from_mode(v0.comp1, cfg.K, cfg.P),
            from_mode(v0.comp2, cfg.K, cfg.P)};
}

EulerChannelSolver make_solver(const RunConfig& cfg) {
    SolverOptions opts;
    opts.boundary_form = cfg.boundary_form;
    return EulerChannelSolver(cfg.K, cfg.P, scenario_field(cfg.scenario),
                              cfg.schedule, opts);
}

void write_run_outputs(const RunConfig& cfg, const RunResult& res,
                       ArtifactWriter& w) {
    auto series = w.open("solve_series.csv");
    series << "t,tau,X,Xt,Y,Yt,Yb,Hr,div,trace,energy\n";
    for (const auto& s : res.series)
        series << fmt(s.t) << "," << fmt(s.tau) << "," << fmt(s.X) << ","
               << fmt(s.Xt) << "," << fmt(s.Y) << "," << fmt(s.Yt) << ","
               << fmt(s.Yb) << "," << fmt(s.Hr) << "," << fmt(s.div) << ","
               << fmt(s.trace) << "," << fmt(s.energy) << "\n";

    // long form with per-family truncation honesty metric
    auto norms = w.open("norm_series.csv");
    norms << "time,tau,family,value,truncation_tail_bound\n";
    const NormFamily fams[] = {NormFamily::X,  NormFamily::Xt, NormFamily::Y,
                               NormFamily::Yt, NormFamily::Yb, NormFamily::Hr};
    for (std::size_t i = 0; i < res.states.size(); ++i) {
        NormParams p = cfg.norms;
        p.tau = std::max(res.series[i].tau, 1e-300);
        const auto table = derivative_table(res.states[i], p.N_max);
        for (NormFamily f : fams)
            norms << fmt(res.series[i].t) << "," << fmt(res.series[i].tau)
                  << "," << family_name(f) << ","
                  << fmt(norm_from_table(table, p, f)) << ","
                  << fmt(truncation_tail_bound(table, p, f)) << "\n";
    }

    auto plot = w.open("xt_vs_t.dat");
    for (const auto& s : res.series)
        plot << fmt(s.t) << " " << fmt(s.Xt) << "\n";
}

int cmd_solve(const RunConfig& cfg, const DispatchOptions& opts,
              std::ostream& log) {
    ArtifactWriter w(cfg, opts, "solve");
    auto solver = make_solver(cfg);
    auto res = solver.run(initial_grid(cfg), cfg.dt, cfg.norms);
    write_run_outputs(cfg, res, w);
    Checkpoint ck;
    ck.time = res.final_time;
    ck.tau0 = cfg.schedule.tau0;
    ck.M = cfg.schedule.M;
    ck.T0 = cfg.schedule.T0;
    ck.v = res.states.back();
    w.add("final.chk");
    save_checkpoint(
        (std::filesystem::path(opts.out_dir) / "final.chk").string(), ck);
    w.finish();
    log << "solve: " << res.series.size() << " states to t = "
        << fmt(res.final_time) << "\n";
    return kExitOk;
}

int cmd_picard(const RunConfig& cfg, const DispatchOptions& opts,
               std::ostream& log) {
    ArtifactWriter w(cfg, opts, "picard");
    auto solver = make_solver(cfg);
    auto tr = solver.picard_run(initial_grid(cfg), cfg.picard_iters,
                                cfg.picard_samples, cfg.norms);
    auto csv = w.open("picard_trace.csv");
    csv << "n,a,b,composite,ratio,uniform_lhs\n";
    const auto ratios = tr.contraction_ratios();
    for (std::size_t i = 0; i < tr.composite.size(); ++i)
        csv << (i + 1) << "," << fmt(tr.a[i]) << "," << fmt(tr.b[i]) << ","
            << fmt(tr.composite[i]) << ","
            << (i == 0 ? std::string() : fmt(ratios[i - 1])) << ","
            << fmt(tr.uniform_lhs[i]) << "\n";
    auto summary = w.open("picard_summary.csv");
    summary << "M,A,uniform_bound_ok\n"
            << fmt(tr.M) << "," << fmt(tr.A) << ","
            << (tr.uniform_bound_ok ? 1 : 0) << "\n";
    w.finish();
    log << "picard: " << tr.composite.size() << " iterations, uniform bound "
        << (tr.uniform_bound_ok ? "holds" : "FAILS") << "\n";
    return kExitOk;
}

std::string rational_str(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

int cmd_verify_combinatorics(const RunConfig& cfg,
                             const DispatchOptions& opts, std::ostream& log) {
    ArtifactWriter w(cfg, opts, "verify-combinatorics");
    const int range = opts.range;
    std::vector<std::pair<CertificateReport, int>> reports;  // report, r
    for (int r = 3; r <= 5; ++r) {
        reports.emplace_back(verify_bl(range, r), r);
        reports.emplace_back(verify_bh(range, r), r);
        reports.emplace_back(verify_curved_exponents(range, r), r);
        reports.emplace_back(sup_al_squared(range, r), r);
        reports.emplace_back(sup_ah_squared(range, r), r);
        reports.emplace_back(sweep_epsilon_bound(std::min(range, 30), r), r);
    }
    reports.emplace_back(sweep_binomial(30), -1);
    reports.emplace_back(sweep_elementary(1000), -1);
    reports.emplace_back(sweep_komatsu(10), -1);

    auto csv = w.open("certificates.csv");
    csv << "name,r,instances,violations,sup,range,attained_at\n";
    long long bad = 0;
    for (const auto& [rep, r] : reports) {
        csv << rep.name << ",";
        if (r >= 0) csv << r;
        csv << "," << rep.instances << "," << rep.violations.size() << ","
            << rational_str(rep.sup) << ",\"" << rep.range << "\",\""
            << rep.attained_at << "\"\n";
        bad += static_cast<long long>(rep.violations.size());
        if (!rep.verified()) {
            log << "certificate " << rep.name << " has "
                << rep.violations.size() << " violation(s); first at (|alpha|"
                << ", |beta|) = (" << rep.violations[0].total << ", "
                << rep.violations[0].sub << "), exponent "
                << rational_str(rep.violations[0].exponent) << " < "
                << rational_str(rep.violations[0].bound) << "\n";
        }
    }
    w.finish();
    if (bad > 0) {
        log << "verify-combinatorics: " << bad << " violation(s) recorded\n";
        return kExitCertificate;
    }
    log << "verify-combinatorics: all certificates hold over range " << range
        << "\n";
    return kExitOk;
}

int cmd_check_pressure(const RunConfig& cfg, const DispatchOptions& opts,
                       std::ostream& log) {
    ArtifactWriter w(cfg, opts, "check-pressure");
    // manufactured solution cos(2 pi x1) cos(pi x2)
    auto exact = [](int K, int P) {
        auto f = ModeField::term(1, VerticalBasis::cos(1), Complex{0.5, 0.0}) +
                 ModeField::term(-1, VerticalBasis::cos(1), Complex{0.5, 0.0});
        return from_mode(f, K, P);
    };
    auto csv = w.open("pressure_errors.csv");
    csv << "resolution,error,residual,ratio\n";
    double prev = 0.0;
    for (int P : {8, 16, 24, 32}) {
        GridNeumannProblem pb;
        const double lam = 4.0 * std::numbers::pi * std::numbers::pi;
        pb.rhs = exact(2, P) * Complex{-(lam + std::numbers::pi *
                                                   std::numbers::pi),
                                       0.0};
        auto sol = solve_neumann_grid(pb);
        const auto want = exact(2, P);
        const double err = l2_norm(sol.p - want) / l2_norm(want);
        csv << P << "," << fmt(err) << "," << fmt(sol.residual.interior)
            << "," << fmt(prev > 0.0 ? prev / err : 0.0) << "\n";
        prev = err;
    }

    // seeded random suite for the gradient-of-pressure bound
    std::mt19937 rng(static_cast<unsigned>(cfg.seed));
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    auto random_divfree = [&]() {
        ModeField psi;
        for (int k = 1; k <= 2; ++k)
            for (int m = 1; m <= 2; ++m) {
                const double s = 0.3 * U(rng), c = 0.3 * U(rng);
                psi = psi +
                      ModeField::term(k, VerticalBasis::sin(m),
                                      Complex{c / 2, -s / 2}) +
                      ModeField::term(-k, VerticalBasis::sin(m),
                                      Complex{c / 2, s / 2});
            }
        auto u = VectorModeField::from_stream_function(psi);
        u.comp1 = u.comp1 + ModeField::constant(1.0 + 0.5 * U(rng));
        return u;
    };
    NormParams np = cfg.norms;
    np.tau = cfg.schedule.tau0;
    auto ratios = w.open("pressure_ratios.csv");
    ratios << "trial,ratio\n";
    for (int t = 0; t < 8; ++t) {
        auto u = random_divfree();
        ratios << t << "," << fmt(pressure_estimate_ratio(u, u, u, u, np))
               << "\n";
    }
    w.finish();
    log << "check-pressure: spectral decay table and ratio suite written\n";
    return kExitOk;
}

int cmd_check_product(const RunConfig& cfg, const DispatchOptions& opts,
                      std::ostream& log) {
    ArtifactWriter w(cfg, opts, "check-product");
    std::mt19937 rng(static_cast<unsigned>(cfg.seed));
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    auto random_pair = [&]() {
        ModeField psi;
        for (int k = 1; k <= 2; ++k)
            for (int m = 1; m <= 2; ++m) {
                const double s = 0.3 * U(rng), c = 0.3 * U(rng);
                psi = psi +
                      ModeField::term(k, VerticalBasis::sin(m),
                                      Complex{c / 2, -s / 2}) +
                      ModeField::term(-k, VerticalBasis::sin(m),
                                      Complex{c / 2, s / 2});
            }
        auto u = VectorModeField::from_stream_function(psi);
        u.comp1 = u.comp1 + ModeField::constant(1.0 + 0.5 * U(rng));
        return u;
    };
    NormParams np = cfg.norms;
    np.tau = cfg.schedule.tau0;
    if (opts.max_order > 0) np.N_max = opts.max_order;
    auto csv = w.open("product_ratios.csv");
    csv << "trial,name,lhs,rhs,ratio,vacuous\n";
    auto emit = [&](int trial, const EstimateMeasurement& m) {
        csv << trial << "," << m.name << "," << fmt(m.lhs) << ","
            << fmt(m.rhs) << "," << fmt(m.ratio) << "," << (m.vacuous ? 1 : 0)
            << "\n";
    };
    for (int t = 0; t < 5; ++t) {
        auto u = random_pair();
        auto v = random_pair();
        emit(t, product_estimate_ratio(u, v, np));
        for (const auto& m : corollary_ratios(u, v, np)) emit(t, m);
    }
    w.finish();
    log << "check-product: suite of 5 seeded pairs written\n";
    return kExitOk;
}

int cmd_check_apriori(const RunConfig& cfg, const DispatchOptions& opts,
                      std::ostream& log) {
    ArtifactWriter w(cfg, opts, "check-apriori");
    auto solver = make_solver(cfg);
    auto res = solver.run(initial_grid(cfg), cfg.dt, cfg.norms);
    auto ms = apriori_check(res.times, res.states, solver.ubar(),
                            cfg.schedule, cfg.norms);
    auto csv = w.open("apriori.csv");
    csv << "t,lhs,rhs,ratio,vacuous\n";
    for (const auto& m : ms)
        csv << fmt(m.t) << "," << fmt(m.lhs) << "," << fmt(m.rhs) << ","
            << fmt(m.ratio) << "," << (m.vacuous ? 1 : 0) << "\n";
    w.finish();
    log << "check-apriori: " << ms.size() << " interior samples measured\n";
    return kExitOk;
}

int cmd_report(const RunConfig& cfg, const DispatchOptions& opts,
               std::ostream& log) {
    // compact pass over every pipeline, then a one-page summary
    DispatchOptions sub = opts;
    sub.range = std::min(opts.range, 40);
    std::ostringstream quiet;
    std::map<std::string, int> codes;
    codes["verify-combinatorics"] =
        cmd_verify_combinatorics(cfg, sub, quiet);
    codes["check-pressure"] = cmd_check_pressure(cfg, sub, quiet);
    codes["check-product"] = cmd_check_product(cfg, sub, quiet);
    codes["solve"] = cmd_solve(cfg, sub, quiet);

    ArtifactWriter w(cfg, opts, "report");
    auto out = w.open("report.txt");
    out << kToolVersion << "\nconfig " << config_hash(cfg) << "\n\n";
    int worst = kExitOk;
    for (const auto& [name, code] : codes) {
        out << name << ": "
            << (code == kExitOk ? "ok"
                                : code == kExitCertificate ? "violations"
                                                           : "error")
            << " (exit class " << code << ")\n";
        worst = std::max(worst, code);
    }
    out << "\n" << quiet.str();
    w.finish();
    log << "report: written\n";
    return worst;
}

}  // namespace

int dispatch(const std::string& subcommand, const RunConfig& cfg,
             const DispatchOptions& opts, std::ostream& log) {
    try {
        cfg.validate();
        if (subcommand == "solve") return cmd_solve(cfg, opts, log);
        if (subcommand == "picard") return cmd_picard(cfg, opts, log);
        if (subcommand == "verify-combinatorics")
            return cmd_verify_combinatorics(cfg, opts, log);
        if (subcommand == "check-pressure")
            return cmd_check_pressure(cfg, opts, log);
        if (subcommand == "check-product")
            return cmd_check_product(cfg, opts, log);
        if (subcommand == "check-apriori")
            return cmd_check_apriori(cfg, opts, log);
        if (subcommand == "report") return cmd_report(cfg, opts, log);
        log << "unknown subcommand \"" << subcommand << "\"\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        log << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        log << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    }
}

}  // namespace chana
