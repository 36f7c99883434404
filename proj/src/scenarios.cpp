#include "optosync/scenarios.hpp"

#include "optosync/errors.hpp"
#include "optosync/svg.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#ifndef OPTOSYNC_GIT_REV
#define OPTOSYNC_GIT_REV "unknown"
#endif

namespace optosync {

namespace {

namespace fs = std::filesystem;

constexpr double kTransientPhysicalSlack = 1e-3; // see propagate options doc

double tau_of(const SystemParams& p) {
    return 2.0 * std::numbers::pi / (p.mod_omega > 0.0 ? p.mod_omega : p.omega_m);
}

struct OutputSink {
    fs::path dir;
    RunReport* report;

    std::string file(const std::string& name) const {
        const fs::path p = dir / name;
        report->files.push_back(p.string());
        return p.string();
    }
};

void write_run_report(const ScenarioConfig& cfg, const RunReport& rep, const fs::path& dir) {
    std::ofstream f(dir / "run_report.txt", std::ios::binary);
    if (!f) throw IoError("cannot write run report");
    f << "scenario = " << cfg.name << "\n";
    f << "version = " << version_string() << "\n";
    const char* solver = cfg.solver == SolverKind::gaussian  ? "gaussian"
                         : cfg.solver == SolverKind::lindblad ? "lindblad"
                                                              : "both";
    f << "solver = " << solver << "\n";
    for (const auto& [k, v] : params_to_map(cfg.params)) f << k << " = " << format_double(v) << "\n";
    f << "t_final = " << format_double(cfg.t_final) << "\n";
    f << "sample_dt = " << format_double(cfg.sample_dt) << "\n";
    f << "init_n_m = " << format_double(cfg.init_n_m) << "\n";
    f << "fock_cav = " << cfg.fock.n_cav << "\n";
    f << "fock_m1 = " << cfg.fock.n_m1 << "\n";
    f << "fock_m2 = " << cfg.fock.n_m2 << "\n";
    f << "ode_rtol_meanfield = 1e-09\n";
    f << "ode_rtol_covariance = 1e-08\n";
    f << "ode_rtol_master = 1e-08\n";
    f << "physical_slack_transient = " << format_double(kTransientPhysicalSlack) << "\n";
    for (const auto& m : rep.metrics) f << "metric." << m.first << " = " << format_double(m.second) << "\n";
    for (const auto& n : rep.notes) f << "note = " << n << "\n";
    for (const auto& fl : rep.files) f << "file = " << fl << "\n";
}

// Joint gaussian run from the standard initial conditions: means at the
// unmodulated operating point, covariance at vacuum.
struct GaussianRun {
    MeanTrajectory means;
    CovTrajectory cov;
    double g_eff = 0.0;
    MeanFieldState start;
};

GaussianRun run_gaussian(const SystemParams& p, double t_final, double dt,
                         double init_n_m = 0.0) {
    GaussianRun run;
    run.start = steady_state(p);
    run.g_eff = effective_coupling(run.start, p);
    run.means = integrate_meanfield(run.start, 0.0, t_final, dt, p);
    PropagateOptions opt;
    opt.physical_slack = kTransientPhysicalSlack;
    run.cov = propagate_covariance(thermal_start_covariance(init_n_m, init_n_m), 0.0, t_final,
                                   dt, p, run.g_eff, opt);
    return run;
}

DataTable gaussian_observable_table(const GaussianRun& run) {
    DataTable t = observables_table();
    for (size_t k = 0; k < run.cov.t.size(); ++k)
        append_observables(t, run.cov.t[k],
                           observables_from(run.cov.sigma[k], run.means.states[k]));
    return t;
}

DataTable mean_table(const MeanTrajectory& traj) {
    DataTable t;
    t.columns = {"t", "alpha_re", "alpha_im", "q1", "p1", "q2", "p2"};
    for (size_t k = 0; k < traj.t.size(); ++k) {
        const MeanFieldState& s = traj.states[k];
        t.add_row({traj.t[k], s.alpha_re, s.alpha_im, s.q1, s.p1, s.q2, s.p2});
    }
    return t;
}

// Observables over one settled late-time covariance period, means taken from
// the settled mean orbit at matching phases (the window grid divides the
// period, so the absolute sample times line up).
DataTable late_period_table(const SystemParams& p, const MeanFieldState& start,
                            const PeriodicCovariance& pc, double* min_q1, double* min_q2) {
    MeanTrajectory mf = integrate_meanfield(start, 0.0, pc.window.t.back(),
                                            pc.window.t[1] - pc.window.t[0], p);
    DataTable t = observables_table();
    const size_t offset = mf.t.size() - pc.window.t.size();
    if (min_q1) *min_q1 = 1e300;
    if (min_q2) *min_q2 = 1e300;
    for (size_t k = 0; k < pc.window.t.size(); ++k) {
        const GaussianObservables o =
            observables_from(pc.window.sigma[k], mf.states[offset + k]);
        append_observables(t, pc.window.t[k], o);
        if (min_q1) *min_q1 = std::min(*min_q1, o.var_q1_ratio);
        if (min_q2) *min_q2 = std::min(*min_q2, o.var_q2_ratio);
    }
    return t;
}

CMatrix standard_initial_state(const MeanFieldState& s, const FockConfig& cfg) {
    const std::vector<std::vector<cplx>> modes = {
        coherent_vector(cfg.n_cav, cplx(s.alpha_re, s.alpha_im) / std::numbers::sqrt2),
        coherent_vector(cfg.n_m1, cplx(s.q1, s.p1) / std::numbers::sqrt2),
        coherent_vector(cfg.n_m2, cplx(s.q2, s.p2) / std::numbers::sqrt2)};
    return product_state(modes);
}

DataTable lindblad_observable_table(const LindbladSystem& sys, const MasterTrajectory& traj) {
    DataTable t = observables_table();
    for (size_t k = 0; k < traj.t.size(); ++k)
        append_observables(t, traj.t[k], sys.observables(traj.rho[k]));
    return t;
}

void note_leak(const MasterTrajectory& traj, RunReport& rep) {
    if (traj.leak_time) {
        std::ostringstream ss;
        ss << "truncation leak: top Fock population reached "
           << format_double(traj.max_top_population) << " at t="
           << format_double(*traj.leak_time) << "; results past that time are untrusted";
        rep.notes.push_back(ss.str());
    }
}

DataTable with_scaled_time(const DataTable& in, double scale) {
    DataTable out = in;
    const int ti = out.column_index("t");
    for (auto& row : out.rows) row[ti] *= scale;
    return out;
}

// ---- individual scenarios ----

void scenario_squeeze(const ScenarioConfig& cfg, OutputSink& out, RunReport& rep) {
    const double dt = cfg.sample_dt > 0.0 ? cfg.sample_dt : 0.05;
    const MeanFieldState ss = steady_state(cfg.params);
    const double g_eff = effective_coupling(ss, cfg.params);

    if (cfg.solver != SolverKind::lindblad) {
        double min_q1 = 0.0, min_q2 = 0.0;
        const PeriodicCovariance pc = settle_covariance(vacuum_covariance(), cfg.params, g_eff, dt);
        DataTable t = late_period_table(cfg.params, ss, pc, &min_q1, &min_q2);
        rep.metrics["min_var_q1_ratio"] = min_q1;
        rep.metrics["min_var_q2_ratio"] = min_q2;
        write_csv(t, out.file("squeeze_gaussian.csv"));
        write_covariance_snapshot(pc.window.sigma.front(), out.file("squeeze_sigma_start.txt"));
        DataTable plot = with_scaled_time(t, 1.0 / tau_of(cfg.params));
        write_line_plot(plot, "t", {"var_q1_ratio", "var_q2_ratio"},
                        "variance over zero point, one late period", out.file("squeeze.svg"));
    }
    if (cfg.solver != SolverKind::gaussian) {
        // late-time master-equation window; expensive and leak-flagged at the
        // full default drive
        const double t_final = cfg.t_final > 0.0 ? cfg.t_final : 12.0 * tau_of(cfg.params);
        LindbladSystem sys(cfg.params, cfg.fock);
        const MasterTrajectory traj =
            sys.integrate(standard_initial_state(ss, cfg.fock), 0.0, t_final, dt);
        note_leak(traj, rep);
        DataTable t = observables_table();
        const double period = std::numbers::pi / cfg.params.mod_omega;
        for (size_t k = 0; k < traj.t.size(); ++k)
            if (traj.t[k] >= t_final - period)
                append_observables(t, traj.t[k], sys.observables(traj.rho[k]));
        write_csv(t, out.file("squeeze_lindblad.csv"));
    }
}

void scenario_oscillations(const ScenarioConfig& cfg, OutputSink& out, RunReport& rep) {
    const double dt = cfg.sample_dt > 0.0 ? cfg.sample_dt : 0.05;
    const MeanFieldState ss = steady_state(cfg.params);
    const PeriodicOrbit orbit = settle_meanfield_orbit(ss, cfg.params, dt);
    if (!orbit.converged)
        rep.notes.push_back("mean orbit did not reach the periodicity tolerance before the cap");
    // four periods of the settled oscillation
    const double tau = tau_of(cfg.params);
    const MeanTrajectory window = integrate_meanfield(
        orbit.window.states.front(), orbit.t_start, orbit.t_start + 4.0 * tau, dt, cfg.params);
    DataTable t = mean_table(window);
    write_csv(t, out.file("oscillations.csv"));
    DataTable plot = with_scaled_time(t, 1.0 / tau);
    write_line_plot(plot, "t", {"q1", "q2"}, "late-time mirror positions",
                    out.file("oscillations.svg"));
    rep.metrics["orbit_residual"] = orbit.residual;
}

void scenario_phase_portrait(const ScenarioConfig& cfg, OutputSink& out, RunReport& rep) {
    const double dt = cfg.sample_dt > 0.0 ? cfg.sample_dt : 0.05;
    const std::vector<double> detunings = {0.0, 0.05, 0.1};
    PlotSpec spec;
    spec.title = "late-time mirror orbits";
    spec.x_label = "q";
    spec.y_label = "p";

    // early transient of the undetuned system for contrast
    {
        SystemParams p = cfg.params;
        p.delta_m = 0.0;
        const MeanFieldState ss = steady_state(p);
        const MeanTrajectory early =
            integrate_meanfield(ss, 0.0, 4.0 * tau_of(p), dt, p);
        write_csv(mean_table(early), out.file("phase_portrait_early.csv"));
    }

    for (double dm : detunings) {
        SystemParams p = cfg.params;
        p.delta_m = dm;
        const MeanFieldState ss = steady_state(p);
        const PeriodicOrbit orbit = settle_meanfield_orbit(ss, p, dt);
        std::ostringstream name;
        name << "phase_portrait_dm" << format_double(dm) << ".csv";
        write_csv(mean_table(orbit.window), out.file(name.str()));

        for (int mirror : {1, 2}) {
            PlotSeries s;
            std::ostringstream label;
            label << "mirror " << mirror << ", dm=" << format_double(dm);
            s.label = label.str();
            for (const MeanFieldState& st : orbit.window.states) {
                s.x.push_back(mirror == 1 ? st.q1 : st.q2);
                s.y.push_back(mirror == 1 ? st.p1 : st.p2);
            }
            spec.series.push_back(std::move(s));
        }
        std::ostringstream m1;
        m1 << "area_m1_dm" << format_double(dm);
        std::ostringstream m2;
        m2 << "area_m2_dm" << format_double(dm);
        rep.metrics[m1.str()] = orbit_area(orbit.window, 1);
        rep.metrics[m2.str()] = orbit_area(orbit.window, 2);
    }
    write_svg_plot(spec, out.file("phase_portrait.svg"));
}

void scenario_sync(const ScenarioConfig& cfg, OutputSink& out, RunReport& rep) {
    const double tau = tau_of(cfg.params);
    const double t_final = cfg.t_final > 0.0 ? cfg.t_final : 60.0 * tau;
    const double dt = cfg.sample_dt > 0.0 ? cfg.sample_dt : 0.5;

    const GaussianRun mod = run_gaussian(cfg.params, t_final, dt, cfg.init_n_m);
    DataTable tm = gaussian_observable_table(mod);
    write_csv(tm, out.file("sync_modulated.csv"));

    // unmodulated baseline, run 80x longer and plotted on the compressed axis
    SystemParams base = cfg.params;
    base.mod_eps = 0.0;
    const GaussianRun um = run_gaussian(base, 80.0 * t_final, 80.0 * dt, cfg.init_n_m);
    DataTable tu = gaussian_observable_table(um);
    write_csv(tu, out.file("sync_unmodulated.csv"));

    double s_max = 0.0, s_late = 0.0, s_base_late = 0.0;
    const int si = tm.column_index("sync");
    const int ti = tm.column_index("t");
    for (const auto& row : tm.rows) {
        s_max = std::max(s_max, row[si]);
        if (row[ti] >= t_final - 10.0 * std::numbers::pi / cfg.params.mod_omega)
            s_late = std::max(s_late, row[si]);
    }
    double s_base_matched = 0.0;
    for (const auto& row : tu.rows) {
        if (row[ti] >= 80.0 * t_final - 800.0 * std::numbers::pi / cfg.params.mod_omega)
            s_base_late = std::max(s_base_late, row[si]);
        if (row[ti] >= t_final - 10.0 * std::numbers::pi / cfg.params.mod_omega &&
            row[ti] <= t_final)
            s_base_matched = std::max(s_base_matched, row[si]);
    }
    rep.metrics["sync_max"] = s_max;
    rep.metrics["sync_late_max"] = s_late;
    rep.metrics["sync_unmodulated_late_max"] = s_base_late;
    rep.metrics["sync_unmodulated_matched_horizon"] = s_base_matched;

    PlotSpec spec;
    spec.title = "synchronization measure";
    spec.x_label = "t/tau (x80 for the unmodulated baseline)";
    spec.y_label = "S";
    PlotSeries sm;
    sm.label = "modulated";
    for (const auto& row : tm.rows) {
        sm.x.push_back(row[ti] / tau);
        sm.y.push_back(row[si]);
    }
    PlotSeries su;
    su.label = "unmodulated (x80)";
    for (const auto& row : tu.rows) {
        su.x.push_back(row[ti] / (80.0 * tau));
        su.y.push_back(row[si]);
    }
    spec.series.push_back(std::move(sm));
    spec.series.push_back(std::move(su));
    write_svg_plot(spec, out.file("sync.svg"));
}

void scenario_correlations(const ScenarioConfig& cfg, OutputSink& out, RunReport& rep) {
    const double tau = tau_of(cfg.params);
    const double t_final = cfg.t_final > 0.0 ? cfg.t_final : 60.0 * tau;
    const double dt = cfg.sample_dt > 0.0 ? cfg.sample_dt : 0.5;
    const GaussianRun run = run_gaussian(cfg.params, t_final, dt, cfg.init_n_m);
    DataTable t = gaussian_observable_table(run);
    write_csv(t, out.file("correlations.csv"));
    double en_late = 0.0, mi_late = 0.0;
    const int ei = t.column_index("log_neg");
    const int mi = t.column_index("mutual_info");
    const int ti = t.column_index("t");
    for (const auto& row : t.rows)
        if (row[ti] >= t_final - 10.0 * std::numbers::pi / cfg.params.mod_omega) {
            en_late = std::max(en_late, row[ei]);
            mi_late = std::max(mi_late, row[mi]);
        }
    rep.metrics["log_neg_late_max"] = en_late;
    rep.metrics["mutual_info_late_max"] = mi_late;
    DataTable plot = with_scaled_time(t, 1.0 / tau);
    write_line_plot(plot, "t", {"log_neg", "mutual_info"}, "mirror-mirror correlations",
                    out.file("correlations.svg"));
}

// The period mean is used rather than the period max because with detuned
// mirrors the beating mean difference passes through zero once per cycle and
// the max would mask the degradation.
double late_sync_impl(const SystemParams& p, double t_final, double dt, double init_n_m) {
    const GaussianRun run = run_gaussian(p, t_final, dt, init_n_m);
    const double window = 2.0 * std::numbers::pi / p.mod_omega;
    double sum = 0.0;
    int count = 0;
    for (size_t k = 0; k < run.cov.t.size(); ++k)
        if (run.cov.t[k] >= t_final - window) {
            sum += synchronization_measure(run.cov.sigma[k], run.means.states[k]);
            ++count;
        }
    return count ? sum / count : 0.0;
}

void scenario_detuning_sweep(const ScenarioConfig& cfg, OutputSink& out, RunReport& rep) {
    const double dt = cfg.sample_dt > 0.0 ? cfg.sample_dt : 0.2;
    const double t_final = cfg.t_final > 0.0 ? cfg.t_final : 120.0 * tau_of(cfg.params);
    std::vector<double> detunings;
    for (int k = 0; k <= 10; ++k) detunings.push_back(0.01 * k);

    std::vector<double> late_sync(detunings.size(), 0.0);
    std::vector<std::string> errors(detunings.size());
    const int n = static_cast<int>(detunings.size());
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < n; ++k) {
        try {
            SystemParams p = cfg.params;
            p.delta_m = detunings[k];
            late_sync[k] = late_sync_impl(p, t_final, dt, 0.0);
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) throw SimulationError("sweep point failed: " + e);

    DataTable t;
    t.columns = {"delta_m", "sync_late"};
    for (size_t k = 0; k < detunings.size(); ++k) t.add_row({detunings[k], late_sync[k]});
    write_csv(t, out.file("detuning_sweep.csv"));
    write_line_plot(t, "delta_m", {"sync_late"}, "late-time synchronization vs mirror detuning",
                    out.file("detuning_sweep.svg"));
    rep.metrics["sync_at_dm0"] = late_sync.front();
    rep.metrics["sync_at_dm0.1"] = late_sync.back();
}

void scenario_validate(const ScenarioConfig& cfg, OutputSink& out, RunReport& rep) {
    SystemParams p = cfg.params;
    {
        const MeanFieldState probe = steady_state(p);
        const double photon =
            probe.alpha_re * probe.alpha_re + probe.alpha_im * probe.alpha_im;
        if (photon > 1.0) {
            // the cross-check requires |alpha|^2 <= 1 so the truncated solver
            // stays trustworthy
            p.drive_e = 0.8;
            rep.notes.push_back("drive reduced to 0.8 for the cross-solver check");
        }
    }
    const double t_final = cfg.t_final > 0.0 ? cfg.t_final : 30.0;
    const double dt = cfg.sample_dt > 0.0 ? cfg.sample_dt : 0.5;

    const GaussianRun grun = run_gaussian(p, t_final, dt);
    DataTable tg = gaussian_observable_table(grun);
    write_csv(tg, out.file("validate_gaussian.csv"));

    LindbladSystem sys(p, cfg.fock);
    const MasterTrajectory traj =
        sys.integrate(standard_initial_state(grun.start, cfg.fock), 0.0, t_final, dt);
    note_leak(traj, rep);
    DataTable tl = lindblad_observable_table(sys, traj);
    write_csv(tl, out.file("validate_lindblad.csv"));
    rep.metrics["max_top_population"] = traj.max_top_population;

    PlotSpec spec;
    spec.title = "cross-solver check";
    spec.x_label = "t";
    spec.y_label = "S";
    for (const auto* src : {&tg, &tl}) {
        PlotSeries s;
        s.label = (src == &tg) ? "covariance solver" : "master equation";
        const int ti2 = src->column_index("t");
        const int si2 = src->column_index("sync");
        for (const auto& row : src->rows) {
            s.x.push_back(row[ti2]);
            s.y.push_back(row[si2]);
        }
        spec.series.push_back(std::move(s));
    }
    write_svg_plot(spec, out.file("validate.svg"));

    std::ofstream f(fs::path(cfg.out_dir) / "validate_report.txt", std::ios::binary);
    rep.files.push_back((fs::path(cfg.out_dir) / "validate_report.txt").string());
    f << "normalized sup deviation per observable: max_t|lindblad-gaussian| / max_t|gaussian|\n";
    for (const std::string col :
         {"var_q1_ratio", "var_q2_ratio", "sync", "log_neg", "mutual_info"}) {
        const int ci = tg.column_index(col);
        double diff = 0.0, scale = 0.0;
        for (size_t k = 0; k < tg.rows.size() && k < tl.rows.size(); ++k) {
            diff = std::max(diff, std::abs(tg.rows[k][ci] - tl.rows[k][ci]));
            scale = std::max(scale, std::abs(tg.rows[k][ci]));
        }
        const double rel = diff / std::max(scale, 1e-9);
        rep.metrics["rel_dev_" + col] = rel;
        f << col << " = " << format_double(rel) << "\n";
    }
}

} // namespace

double late_sync_statistic(const SystemParams& p, double t_final, double dt,
                           double init_n_m) {
    return late_sync_impl(p, t_final, dt, init_n_m);
}

SolverKind solver_from_string(const std::string& s) {
    if (s == "gaussian") return SolverKind::gaussian;
    if (s == "lindblad") return SolverKind::lindblad;
    if (s == "both") return SolverKind::both;
    throw ConfigError("unknown solver '" + s + "' (expected gaussian|lindblad|both)");
}

void ScenarioConfig::apply_override(const std::string& key, const std::string& value) {
    auto as_int = [&](const std::string& v) {
        try {
            size_t pos = 0;
            const int n = std::stoi(v, &pos);
            if (pos != v.size()) throw ConfigError("not an integer: '" + v + "'");
            return n;
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("not an integer: '" + v + "'");
        }
    };
    if (key == "t_final")
        t_final = std::stod(value);
    else if (key == "sample_dt")
        sample_dt = std::stod(value);
    else if (key == "init_n_m")
        init_n_m = std::stod(value);
    else if (key == "fock_cav")
        fock.n_cav = as_int(value);
    else if (key == "fock_m1")
        fock.n_m1 = as_int(value);
    else if (key == "fock_m2")
        fock.n_m2 = as_int(value);
    else if (key == "fock_budget")
        fock.budget = as_int(value);
    else
        apply_param_override(params, key, value);
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {
        "squeeze", "oscillations", "phase-portrait", "sync",
        "correlations", "detuning-sweep", "validate"};
    return names;
}

std::string version_string() {
    return std::string("optosync 1.0.0 (") + OPTOSYNC_GIT_REV + ")";
}

DataTable observables_table() {
    DataTable t;
    t.columns = {"t", "var_q1_ratio", "var_q2_ratio", "sync", "log_neg", "mutual_info"};
    return t;
}

void append_observables(DataTable& table, double t, const GaussianObservables& o) {
    table.add_row({t, o.var_q1_ratio, o.var_q2_ratio, o.sync, o.log_neg, o.mutual_info});
}

RunReport run_scenario(const ScenarioConfig& cfg) {
    cfg.params.validate();
    if (cfg.sample_dt < 0.0 || (cfg.t_final != 0.0 && cfg.sample_dt > 0.0 &&
                                cfg.t_final <= cfg.sample_dt))
        throw ConfigError("t_final must exceed sample_dt");
    if (cfg.solver != SolverKind::gaussian) cfg.fock.validate();

    RunReport rep;
    const fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + cfg.out_dir + "'");
    OutputSink out{dir, &rep};

    if (cfg.name == "squeeze")
        scenario_squeeze(cfg, out, rep);
    else if (cfg.name == "oscillations")
        scenario_oscillations(cfg, out, rep);
    else if (cfg.name == "phase-portrait")
        scenario_phase_portrait(cfg, out, rep);
    else if (cfg.name == "sync")
        scenario_sync(cfg, out, rep);
    else if (cfg.name == "correlations")
        scenario_correlations(cfg, out, rep);
    else if (cfg.name == "detuning-sweep")
        scenario_detuning_sweep(cfg, out, rep);
    else if (cfg.name == "validate")
        scenario_validate(cfg, out, rep);
    else
        throw ConfigError("unknown scenario '" + cfg.name + "'");

    write_run_report(cfg, rep, dir);
    rep.files.push_back((dir / "run_report.txt").string());
    return rep;
}

} // namespace optosync
