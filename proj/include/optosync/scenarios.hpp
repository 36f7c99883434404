#ifndef OPTOSYNC_SCENARIOS_HPP
#define OPTOSYNC_SCENARIOS_HPP

#include "optosync/csv.hpp"
#include "optosync/gaussian.hpp"
#include "optosync/lindblad.hpp"
#include "optosync/meanfield.hpp"
#include "optosync/params.hpp"

#include <map>
#include <string>
#include <vector>

namespace optosync {

enum class SolverKind { gaussian, lindblad, both };

SolverKind solver_from_string(const std::string& s); // throws ConfigError

// A runnable experiment: one of the canned studies, desk-scale.
struct ScenarioConfig {
    std::string name; // squeeze | oscillations | phase-portrait | sync |
                      // correlations | detuning-sweep | validate
    SystemParams params;
    SolverKind solver = SolverKind::gaussian;
    double t_final = 0.0;   // 0 picks the scenario default
    double sample_dt = 0.0; // 0 picks the scenario default
    // Initial mirror occupancy for the transient studies (sync,
    // correlations): the runs start from thermally occupied mirrors so the
    // approach to synchronization is visible. Late-time studies ignore it.
    double init_n_m = 1.0;
    std::string out_dir = "out";
    FockConfig fock;

    // Named keys first (t_final, sample_dt, fock_cav, fock_m1, fock_m2,
    // fock_budget), then physical parameters; unknown keys throw ConfigError.
    void apply_override(const std::string& key, const std::string& value);
};

struct RunReport {
    std::vector<std::string> files;             // everything written
    std::vector<std::string> notes;             // warnings (truncation leak, ...)
    std::map<std::string, double> metrics;      // headline numbers
};

// Executes the named scenario, writes CSV/SVG plus run_report.txt under
// cfg.out_dir, and returns the report. Throws ConfigError for an unknown
// scenario name; solver errors propagate.
RunReport run_scenario(const ScenarioConfig& cfg);

const std::vector<std::string>& scenario_names();

std::string version_string();

// Time-averaged S over the final mean-orbit period of one long run from the
// standard start (means at the operating point, covariance at vacuum plus
// the given initial mirror occupancy).
double late_sync_statistic(const SystemParams& p, double t_final, double dt,
                           double init_n_m = 0.0);

// Observable table in the shared solver-independent schema.
DataTable observables_table();

// One derived-observable row appended to a table in that schema.
void append_observables(DataTable& table, double t, const GaussianObservables& o);

} // namespace optosync

#endif
