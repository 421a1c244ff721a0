#include "chana/config.hpp"

#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace chana {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw std::invalid_argument("config: unknown key \"" + it.key() +
                                        "\" in " + where);
}

ModeField real_mode(int k, VerticalBasis vb, double sin_amp, double cos_amp) {
    return ModeField::term(k, vb, Complex{cos_amp / 2, -sin_amp / 2}) +
           ModeField::term(-k, vb, Complex{cos_amp / 2, sin_amp / 2});
}

}  // namespace

void RunConfig::validate() const {
    if (K < 1 || P < 4)
        throw std::invalid_argument("config: need K >= 1 and P >= 4");
    if (!(dt > 0.0)) throw std::invalid_argument("config: dt must be > 0");
    if (norms.r < 3) throw std::invalid_argument("config: norms.r must be >= 3");
    if (!(norms.eps > 0.0 && norms.eps < 1.0))
        throw std::invalid_argument("config: norms.eps must be in (0,1)");
    if (norms.N_max < norms.r + 2)
        throw std::invalid_argument("config: norms.N_max must be >= r + 2");
    if (!(schedule.tau0 > 0.0) || !(schedule.M > 0.0) || !(schedule.T0 > 0.0))
        throw std::invalid_argument(
            "config: schedule needs tau0, M, T0 all > 0");
    if (schedule.T0 > schedule.tau0 / schedule.M + 1e-15) {
        std::ostringstream os;
        os << "config: radius constraint violated: T0 = " << schedule.T0
           << " > tau0/M = " << schedule.tau0 / schedule.M;
        throw std::invalid_argument(os.str());
    }
    if (driver != "rk4" && driver != "picard")
        throw std::invalid_argument("config: driver must be rk4 or picard");
    if (picard_iters < 2 || picard_samples < 2)
        throw std::invalid_argument(
            "config: picard iters and samples must be >= 2");
    const std::set<std::string> scen = {"uniform", "constant", "shear",
                                        "inflow", "channel-inflow-shear"};
    if (!scen.count(scenario.name))
        throw std::invalid_argument("config: unknown scenario \"" +
                                    scenario.name + "\"");
    if (scenario.k < 1 || scenario.m < 1)
        throw std::invalid_argument("config: scenario k, m must be >= 1");
    if (!scenario_field(scenario).is_divergence_free())
        throw std::invalid_argument("config: scenario field is not "
                                    "divergence-free");
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: malformed JSON: ") +
                                    e.what());
    }
    if (!j.is_object())
        throw std::invalid_argument("config: top level must be an object");
    reject_unknown(j,
                   {"scenario", "v0", "K", "P", "dt", "schedule", "norms",
                    "driver", "boundary_form", "picard", "seed"},
                   "top level");
    RunConfig cfg;
    if (j.contains("scenario")) {
        const json& s = j["scenario"];
        reject_unknown(s, {"name", "c1", "c2", "amp", "k", "m"}, "scenario");
        cfg.scenario.name = s.value("name", cfg.scenario.name);
        cfg.scenario.c1 = s.value("c1", cfg.scenario.c1);
        cfg.scenario.c2 = s.value("c2", cfg.scenario.c2);
        cfg.scenario.amp = s.value("amp", cfg.scenario.amp);
        cfg.scenario.k = s.value("k", cfg.scenario.k);
        cfg.scenario.m = s.value("m", cfg.scenario.m);
    }
    if (j.contains("v0")) {
        if (!j["v0"].is_array())
            throw std::invalid_argument("config: v0 must be an array");
        for (const json& e : j["v0"]) {
            reject_unknown(e, {"k", "m", "sin_amp", "cos_amp"}, "v0 entry");
            ModeSpec ms;
            ms.k = e.value("k", 1);
            ms.m = e.value("m", 1);
            ms.sin_amp = e.value("sin_amp", 0.0);
            ms.cos_amp = e.value("cos_amp", 0.0);
            if (ms.k < 1 || ms.m < 1)
                throw std::invalid_argument(
                    "config: v0 mode numbers must be >= 1");
            cfg.v0.push_back(ms);
        }
    }
    cfg.K = j.value("K", cfg.K);
    cfg.P = j.value("P", cfg.P);
    cfg.dt = j.value("dt", cfg.dt);
    if (j.contains("schedule")) {
        const json& s = j["schedule"];
        reject_unknown(s, {"tau0", "M", "T0"}, "schedule");
        cfg.schedule.tau0 = s.value("tau0", cfg.schedule.tau0);
        cfg.schedule.M = s.value("M", cfg.schedule.M);
        cfg.schedule.T0 = s.value("T0", cfg.schedule.T0);
    }
    if (j.contains("norms")) {
        const json& s = j["norms"];
        reject_unknown(s, {"r", "eps", "N_max"}, "norms");
        cfg.norms.r = s.value("r", cfg.norms.r);
        cfg.norms.eps = s.value("eps", cfg.norms.eps);
        cfg.norms.N_max = s.value("N_max", cfg.norms.N_max);
    }
    cfg.driver = j.value("driver", cfg.driver);
    if (j.contains("boundary_form")) {
        const std::string b = j["boundary_form"];
        if (b == "background")
            cfg.boundary_form = BoundaryForm::Background;
        else if (b == "full-trace")
            cfg.boundary_form = BoundaryForm::FullTrace;
        else
            throw std::invalid_argument(
                "config: boundary_form must be background or full-trace");
    }
    if (j.contains("picard")) {
        const json& s = j["picard"];
        reject_unknown(s, {"iters", "samples"}, "picard");
        cfg.picard_iters = s.value("iters", cfg.picard_iters);
        cfg.picard_samples = s.value("samples", cfg.picard_samples);
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.validate();
    return cfg;
}

std::string config_echo(const RunConfig& cfg) {
    json j;
    j["scenario"] = {{"name", cfg.scenario.name}, {"c1", cfg.scenario.c1},
                     {"c2", cfg.scenario.c2},     {"amp", cfg.scenario.amp},
                     {"k", cfg.scenario.k},       {"m", cfg.scenario.m}};
    j["v0"] = json::array();
    for (const auto& m : cfg.v0)
        j["v0"].push_back({{"k", m.k},
                           {"m", m.m},
                           {"sin_amp", m.sin_amp},
                           {"cos_amp", m.cos_amp}});
    j["K"] = cfg.K;
    j["P"] = cfg.P;
    j["dt"] = cfg.dt;
    j["schedule"] = {{"tau0", cfg.schedule.tau0},
                     {"M", cfg.schedule.M},
                     {"T0", cfg.schedule.T0}};
    j["norms"] = {{"r", cfg.norms.r},
                  {"eps", cfg.norms.eps},
                  {"N_max", cfg.norms.N_max}};
    j["driver"] = cfg.driver;
    j["boundary_form"] =
        cfg.boundary_form == BoundaryForm::Background ? "background" : "full-trace";
    j["picard"] = {{"iters", cfg.picard_iters},
                   {"samples", cfg.picard_samples}};
    j["seed"] = cfg.seed;
    return j.dump(2);
}

std::string config_hash(const RunConfig& cfg) {
    // FNV-1a over the canonical echo; stable across platforms
    const std::string s = config_echo(cfg);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

VectorModeField scenario_field(const ScenarioSpec& s) {
    if (s.name == "uniform")
        return {ModeField::constant(s.c1), ModeField::zero()};
    if (s.name == "constant")
        return {ModeField::constant(s.c1), ModeField::constant(s.c2)};
    if (s.name == "shear" || s.name == "channel-inflow-shear") {
        const double c1 = s.name == "shear" ? s.c1 : 1.0;
        const double amp = s.name == "shear" ? s.amp : 0.5;
        const int m = s.name == "shear" ? s.m : 1;
        return {ModeField::constant(c1) +
                    ModeField::term(0, VerticalBasis::cos(m), amp),
                ModeField::zero()};
    }
    if (s.name == "inflow") {
        auto psi = real_mode(s.k, VerticalBasis::cos(s.m), 0.0, s.amp);
        auto u = VectorModeField::from_stream_function(psi);
        u.comp1 = u.comp1 + ModeField::constant(s.c1);
        return u;
    }
    throw std::invalid_argument("scenario_field: unknown scenario \"" +
                                s.name + "\"");
}

VectorModeField stream_modes(const std::vector<ModeSpec>& modes) {
    ModeField psi;
    for (const auto& m : modes)
        psi = psi + real_mode(m.k, VerticalBasis::sin(m.m), m.sin_amp,
                              m.cos_amp);
    return VectorModeField::from_stream_function(psi);
}

}  // namespace chana
