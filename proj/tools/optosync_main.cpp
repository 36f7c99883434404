#include "optosync/errors.hpp"
#include "optosync/scenarios.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

using namespace optosync;

int main(int argc, char** argv) {
    CLI::App app{"optosync - driven two-mirror cavity simulator"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    CLI::App* run = app.add_subcommand("run", "run a scenario and write CSV/SVG outputs");
    std::string scenario;
    std::string config_file;
    std::vector<std::string> sets;
    std::string out_dir = "out";
    std::string solver = "gaussian";
    run->add_option("scenario", scenario, "one of: squeeze, oscillations, phase-portrait, sync, "
                                          "correlations, detuning-sweep, validate")
        ->required();
    run->add_option("--config", config_file, "parameter file (key = value lines or flat JSON)");
    run->add_option("--set", sets, "override, e.g. --set mod_eps=0.3 or --set t_final=500");
    run->add_option("--out", out_dir, "output directory (default: out)");
    run->add_option("--solver", solver, "gaussian | lindblad | both (default: gaussian)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        ScenarioConfig cfg;
        cfg.name = scenario;
        if (!config_file.empty()) cfg.params = params_from_file(config_file);
        for (const std::string& kv : sets) {
            const size_t eq = kv.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--set expects key=value, got '" + kv + "'");
            cfg.apply_override(kv.substr(0, eq), kv.substr(eq + 1));
        }
        cfg.out_dir = out_dir;
        cfg.solver = solver_from_string(solver);

        const RunReport rep = run_scenario(cfg);
        for (const auto& note : rep.notes) std::fprintf(stderr, "warning: %s\n", note.c_str());
        for (const auto& [key, value] : rep.metrics)
            std::printf("%s = %.6g\n", key.c_str(), value);
        for (const auto& f : rep.files) std::printf("wrote %s\n", f.c_str());
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const SimulationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
