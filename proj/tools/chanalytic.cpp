#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "chana/config.hpp"
#include "chana/reporting.hpp"

namespace {

const char* const kSubcommands[] = {"solve",
                                    "picard",
                                    "verify-combinatorics",
                                    "check-pressure",
                                    "check-product",
                                    "check-apriori",
                                    "report"};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Pseudospectral channel flow runs and certified estimate checks"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", driver, boundary_form;
    int range = 60, max_order = 0;
    long long seed = -1;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--range", range, "certificate sweep range")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-order", max_order,
                   "override the norm truncation order");
    app.add_option("--driver", driver, "rk4 or picard");
    app.add_option("--boundary-form", boundary_form,
                   "pressure boundary datum: background or full-trace");
    app.add_option("--seed", seed, "override the suite seed");

    for (const char* name : kSubcommands)
        app.add_subcommand(name, "")->fallthrough();

    CLI11_PARSE(app, argc, argv);
    const std::string sub = app.get_subcommands().front()->get_name();

    chana::RunConfig cfg;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "configuration error: cannot read "
                          << config_path << "\n";
                return chana::kExitConfig;
            }
            std::ostringstream text;
            text << in.rdbuf();
            cfg = chana::parse_config(text.str());
        }
        if (!driver.empty()) cfg.driver = driver;
        if (!boundary_form.empty()) {
            if (boundary_form == "background")
                cfg.boundary_form = chana::BoundaryForm::Background;
            else if (boundary_form == "full-trace")
                cfg.boundary_form = chana::BoundaryForm::FullTrace;
            else
                throw std::invalid_argument(
                    "--boundary-form must be background or full-trace");
        }
        if (seed >= 0) cfg.seed = static_cast<unsigned long>(seed);
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return chana::kExitConfig;
    }

    chana::DispatchOptions opts;
    opts.out_dir = out_dir;
    opts.range = range;
    opts.max_order = max_order;
    return chana::dispatch(sub, cfg, opts, std::cout);
}
