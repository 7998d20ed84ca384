#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "gpvw/ansatz.hpp"
#include "gpvw/errors.hpp"
#include "gpvw/parallel.hpp"
#include "gpvw/snapshot.hpp"
#include "reports.hpp"

namespace gpvw::cli {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

json grid_json(const GridSpec& g) {
    json j;
    j["L"] = g.half_width;
    j["nx"] = g.nx;
    j["ny"] = g.ny;
    j["hx"] = g.hx();
    j["hy"] = g.hy();
    return j;
}

SolverConfig newton_config(const NewtonArgs& a) {
    SolverConfig cfg;
    cfg.residual_tol = a.tol;
    cfg.max_newton_iterations = a.max_iters;
    if (a.far_field == "matched") cfg.far_field = FarFieldMode::matched;
    else if (a.far_field == "unit") cfg.far_field = FarFieldMode::unit;
    else throw UsageError("--far-field must be 'matched' or 'unit'");
    return cfg;
}

VortexProfile default_profile() { return solve_profile(1, 30.0, 6000, 1e-10); }

/// Location for the last iterate of a failed solve: failed/<name> next to the output.
fs::path failed_path(const fs::path& out, const std::string& name) {
    return (out.has_parent_path() ? out.parent_path() : fs::path(".")) / "failed" / name;
}

/// Fills the error fields of a report; SolveError iterates are saved to `iterate_path`.
void record_failure(json& report, const std::exception& e, const fs::path& iterate_path) {
    report["passed"] = false;
    report["error"] = e.what();
    if (const auto* se = dynamic_cast<const SolveError*>(&e)) {
        report["status"] = "not_converged";
        report["last_residual"] = se->last_residual();
        prepare_output(iterate_path);
        write_gpfield(iterate_path, se->iterate(), {se->speed(), std::nullopt});
        report["failed_iterate"] = iterate_path.string();
    } else if (const auto* ce = dynamic_cast<const ConvergenceError*>(&e)) {
        report["status"] = "not_converged";
        report["last_residual"] = ce->last_residual();
    } else {
        report["status"] = "error";
    }
}

void emit_report(const std::string& path, const json& report) {
    if (path.empty()) std::cout << report.dump(2) << '\n';
    else write_json(path, report);
}

std::optional<double> speed_of(const Snapshot& s, std::optional<double> flag) { return flag ? flag : s.meta.speed; }

double require_speed(const Snapshot& s, std::optional<double> flag, const std::string& command) {
    const auto c = speed_of(s, flag);
    if (!c) throw UsageError(command + ": the snapshot carries no speed; pass --c");
    return *c;
}

void print_wave(const TravellingWave& tw) {
    std::fprintf(stderr, "c = %.6g: P = %.10g, E = %.10g, d = %.6g, residual = %.3e, Newton iterations = %d\n", tw.c,
                 tw.p, tw.energy.total, tw.d, tw.residual, tw.newton_iterations);
}

}  // namespace

int run_profile(const ProfileArgs& a, const json& config) {
    if (a.out.empty()) throw UsageError("profile: --out is required");
    const auto t0 = Clock::now();
    const VortexProfile prof = solve_profile(a.degree, a.rmax, a.nodes, a.tol);
    write_profile_csv(a.out, prof);
    if (!a.report.empty()) {
        json report = report_header("profile", config);
        report["status"] = "converged";
        report["kappa"] = prof.kappa;
        report["residual"] = prof.residual;
        report["newton_iterations"] = prof.newton_iterations;
        report["elapsed_seconds"] = seconds_since(t0);
        report["passed"] = true;
        write_json(a.report, report);
    }
    return exit_ok;
}

int run_ansatz(const AnsatzArgs& a, const json&) {
    if (a.out.empty()) throw UsageError("ansatz: --out is required");
    const GridSpec grid = make_grid(a.L, a.n);
    grid.validate();
    const VortexProfile prof = solve_profile(1, a.rmax, a.nodes, 1e-10);
    const Field2D u = two_vortex(grid, {a.d, &prof});
    prepare_output(a.out);
    write_gpfield(a.out, u);
    return exit_ok;
}

int run_solve(const SolveArgs& a, const json& config) {
    if (a.c.has_value() == a.p.has_value()) throw UsageError("solve: give exactly one of --c and --p");
    if (a.out.empty()) throw UsageError("solve: --out is required");
    SolverConfig cfg = newton_config(a.newton);
    std::optional<Snapshot> init;
    if (!a.in.empty()) init = read_gpfield(a.in);
    const GridSpec grid = init ? init->field.grid() : make_grid(a.L, a.n);
    grid.validate();

    json report = report_header("solve", config);
    report["resolved"]["grid"] = grid_json(grid);
    report["resolved"]["solver"] = to_json(cfg, grid);
    report["resolved"]["threads"] = num_threads();
    const auto t0 = Clock::now();
    TravellingWave tw;
    try {
        if (a.c) {
            const VortexProfile prof = default_profile();
            const Field2D start = init ? init->field : two_vortex(grid, {1.0 / *a.c, &prof});
            tw = solve_fixed_c(start, *a.c, cfg);
        } else {
            tw = init ? minimize_fixed_p(*a.p, init->field, cfg) : minimize_fixed_p(*a.p, grid, cfg);
        }
    } catch (const Error& e) {
        record_failure(report, e, failed_path(a.out, fs::path(a.out).filename().string()));
        report["elapsed_seconds"] = seconds_since(t0);
        if (!a.report.empty()) write_json(a.report, report);
        throw;
    }
    print_wave(tw);
    prepare_output(a.out);
    write_gpfield(a.out, tw.field, {tw.c, tw.p});

    VerifyLimits limits;
    limits.residual_tol = cfg.resolved_residual_tol(grid);
    const Audit audit = verify_field(tw.field, tw.c, limits);
    report["status"] = "converged";
    report["result"] = wave_scalars(tw);
    report["measured"] = audit.measured;
    report["checks"] = audit.checks.items();
    report["passed"] = audit.checks.passed();
    report["elapsed_seconds"] = seconds_since(t0);
    if (!a.report.empty()) write_json(a.report, report);
    return exit_for(audit.checks);
}

int run_branch(const BranchArgs& a, const json& config) {
    if (!a.c_start || !a.c_end || !a.steps) throw UsageError("branch: --c-start, --c-end and --steps are required");
    if (a.out.empty()) throw UsageError("branch: --out is required");
    const SolverConfig cfg = newton_config(a.newton);
    const GridSpec grid = make_grid(a.L, a.n);
    grid.validate();
    const VortexProfile prof = default_profile();
    BranchOptions opt;
    opt.independent = a.independent;
    opt.profile = &prof;
    if (!a.snapshots.empty()) opt.snapshot_dir = fs::path(a.snapshots);
    opt.on_point = print_wave;

    json report = report_header("branch", config);
    report["resolved"]["grid"] = grid_json(grid);
    report["resolved"]["solver"] = to_json(cfg, grid);
    report["resolved"]["threads"] = num_threads();
    const auto t0 = Clock::now();
    BranchTable table;
    try {
        table = continue_branch(*a.c_start, *a.c_end, *a.steps, grid, cfg, opt);
    } catch (const Error& e) {
        const double c = dynamic_cast<const SolveError*>(&e) ? dynamic_cast<const SolveError&>(e).speed() : 0.0;
        char name[64];
        std::snprintf(name, sizeof name, "c_%.6g.gpfield", c);
        record_failure(report, e, failed_path(a.out, name));
        report["elapsed_seconds"] = seconds_since(t0);
        if (!a.report.empty()) write_json(a.report, report);
        throw;
    }
    prepare_output(a.out);
    write_branch_csv(fs::path(a.out), table);
    const Audit audit = branch_checks(table);
    report["status"] = "converged";
    report["table"] = to_json(table);
    report["measured"] = audit.measured;
    report["checks"] = audit.checks.items();
    report["passed"] = audit.checks.passed();
    report["elapsed_seconds"] = seconds_since(t0);
    if (!a.report.empty()) write_json(a.report, report);
    return exit_for(audit.checks);
}

int run_diagnose(const DiagnoseArgs& a, const json& config) {
    if (a.in.empty()) throw UsageError("diagnose: a snapshot path is required");
    const Snapshot snap = read_gpfield(a.in);
    const double c = require_speed(snap, a.c, "diagnose");
    const TravellingWave tw = describe_wave(snap.field, c);
    require_two_vortices(tw.zeros);
    DiagnosticsOptions opt;
    opt.exclusion_radius = a.exclusion_radius;
    opt.partition_radius = a.partition_radius;
    opt.jacobian_radius = a.jacobian_radius;
    opt.annuli = a.annuli;
    const Audit audit = diagnose_checks(tw, opt);
    json report = report_header("diagnose", config);
    report["wave"] = wave_scalars(tw);
    report["measured"] = audit.measured;
    report["checks"] = audit.checks.items();
    report["passed"] = audit.checks.passed();
    emit_report(a.report, report);
    return exit_for(audit.checks);
}

int run_verify(const VerifyArgs& a, const json& config) {
    if (a.in.empty()) throw UsageError("verify: a snapshot path is required");
    const Snapshot snap = read_gpfield(a.in);
    VerifyLimits limits;
    limits.residual_tol = a.tol;
    limits.pohozaev = a.pohozaev;
    limits.gradient_bound = a.gradient_bound;
    limits.symmetry = a.symmetry;
    const auto c = speed_of(snap, a.c);
    const Audit audit = verify_field(snap.field, c, limits);
    json report = report_header("verify", config);
    report["resolved"]["grid"] = grid_json(snap.field.grid());
    report["resolved"]["c"] = c ? json(*c) : json(nullptr);
    report["resolved"]["residual_tol"] = a.tol > 0.0 ? a.tol : 1e-8 * std::sqrt(snap.field.grid().area());
    report["measured"] = audit.measured;
    report["checks"] = audit.checks.items();
    report["passed"] = audit.checks.passed();
    emit_report(a.report, report);
    return exit_for(audit.checks);
}

int run_perturb(const PerturbArgs& a, const json& config) {
    if (!(a.amplitude >= 0.0 && a.amplitude <= 0.05)) throw UsageError("perturb-resolve: --amplitude must lie in [0, 0.05]");
    if (a.seeds.empty()) throw UsageError("perturb-resolve: need at least one seed");
    const SolverConfig cfg = newton_config(a.newton);
    const auto t0 = Clock::now();
    TravellingWave base;
    if (!a.in.empty()) {
        const Snapshot snap = read_gpfield(a.in);
        base = solve_fixed_c(snap.field, require_speed(snap, a.c, "perturb-resolve"), cfg);
    } else {
        if (!a.c) throw UsageError("perturb-resolve: give --in or --c");
        const GridSpec grid = make_grid(a.L, a.n);
        grid.validate();
        const VortexProfile prof = default_profile();
        base = solve_fixed_c(two_vortex(grid, {1.0 / *a.c, &prof}), *a.c, cfg);
    }
    print_wave(base);

    json report = report_header("perturb-resolve", config);
    report["resolved"]["grid"] = grid_json(base.field.grid());
    report["resolved"]["solver"] = to_json(cfg, base.field.grid());
    report["base"] = wave_scalars(base);
    report["runs"] = json::array();
    CheckList checks;
    for (const std::uint64_t seed : a.seeds) {
        json run;
        run["seed"] = seed;
        const std::string tag = "seed_" + std::to_string(seed);
        try {
            const PerturbResult r = perturb_resolve(base, a.amplitude, seed, cfg);
            const double conj = conj_symmetry_defect_x2(r.wave.field);
            run["alignment"] = to_json(r.alignment);
            run["newton_iterations"] = r.wave.newton_iterations;
            run["residual"] = r.wave.residual;
            run["conj_defect_x2"] = conj;
            checks.add(tag + "_d0", r.alignment.d0 < a.d0_tol, r.alignment.d0, a.d0_tol);
            checks.add(tag + "_conj_x2", conj < 1e-6, conj, 1e-6);
            std::fprintf(stderr, "seed %llu: D0 = %.3e, shift = %.3e, phase = %.3e, Newton iterations = %d\n",
                         static_cast<unsigned long long>(seed), r.alignment.d0, r.alignment.shift_x2, r.alignment.phase,
                         r.wave.newton_iterations);
        } catch (const ConvergenceError& e) {
            run["error"] = e.what();
            checks.add(tag + "_converged", false, e.last_residual(), "re-converges");
        } catch (const TopologyError& e) {
            run["error"] = e.what();
            checks.add(tag + "_topology", false, e.what(), "two vortices");
        }
        report["runs"].push_back(run);
    }
    report["checks"] = checks.items();
    report["passed"] = checks.passed();
    report["elapsed_seconds"] = seconds_since(t0);
    emit_report(a.report, report);
    return exit_for(checks);
}

}  // namespace gpvw::cli
