#include <algorithm>
#include <cstdio>
#include <thread>

#include "cli_support.hpp"
#include "commands.hpp"
#include "gpvw/errors.hpp"
#include "gpvw/parallel.hpp"

using namespace gpvw::cli;

namespace {

void add_grid(CLI::App* sub, double& L, int& n) {
    sub->add_option("--L", L, "Half width of the square grid [-L, L]^2")->check(CLI::PositiveNumber);
    sub->add_option("--n", n, "Nodes per side (odd, >= 17)")->check(CLI::Range(17, 1 << 16));
}

void add_newton(CLI::App* sub, NewtonArgs& a) {
    sub->add_option("--tol", a.tol, "Residual tolerance (<= 0: 1e-8 * sqrt(area))");
    sub->add_option("--max-iters", a.max_iters, "Newton iteration limit")->check(CLI::Range(1, 10000));
    sub->add_option("--far-field", a.far_field, "Ghost-ring condition")->check(CLI::IsMember({"matched", "unit"}));
}

CLI::Option* add_config(CLI::App* sub, std::string& path) {
    return sub->add_option("--config", path, "JSON file with option values (command-line flags take precedence)")
        ->check(CLI::ExistingFile);
}

int report_error(const char* kind, const std::exception& e, int code) {
    std::fprintf(stderr, "gpvw: %s: %s\n", kind, e.what());
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gpvw " GPVW_VERSION ": two-vortex travelling waves of the Gross-Pitaevskii equation"};
    app.set_version_flag("--version", GPVW_VERSION);
    app.require_subcommand(1);
    app.fallthrough();  // --threads may follow the subcommand
    app.option_defaults()->always_capture_default();
    int threads = 1;
    CLI::Option* threads_opt =
        app.add_option("--threads", threads, "Worker threads (fallback: GPVW_THREADS, then all cores)")
            ->check(CLI::Range(1, 4096));

    std::string config;

    ProfileArgs profile;
    auto* sub_profile = app.add_subcommand("profile", "Radial vortex profile rho(r) as CSV r,rho,drho");
    add_config(sub_profile, config);
    sub_profile->add_option("--degree", profile.degree, "Vortex degree (+1 or -1)");
    sub_profile->add_option("--rmax", profile.rmax, "Outer radius")->check(CLI::PositiveNumber);
    sub_profile->add_option("--nodes", profile.nodes, "Radial nodes")->check(CLI::Range(3, 1 << 24));
    sub_profile->add_option("--tol", profile.tol, "Newton residual tolerance")->check(CLI::PositiveNumber);
    sub_profile->add_option("--out", profile.out, "Output CSV");
    sub_profile->add_option("--report", profile.report, "Optional JSON report");

    AnsatzArgs ansatz;
    auto* sub_ansatz = app.add_subcommand("ansatz", "Two-vortex ansatz field as .gpfield");
    add_config(sub_ansatz, config);
    sub_ansatz->add_option("--d", ansatz.d, "Vortex half-separation")->check(CLI::PositiveNumber);
    add_grid(sub_ansatz, ansatz.L, ansatz.n);
    sub_ansatz->add_option("--rmax", ansatz.rmax, "Profile outer radius")->check(CLI::PositiveNumber);
    sub_ansatz->add_option("--nodes", ansatz.nodes, "Profile nodes")->check(CLI::Range(3, 1 << 24));
    sub_ansatz->add_option("--out", ansatz.out, "Output .gpfield");

    SolveArgs solve;
    auto* sub_solve = app.add_subcommand("solve", "Travelling wave at fixed speed (--c) or fixed momentum (--p)");
    add_config(sub_solve, config);
    auto* opt_c = sub_solve->add_option("--c", solve.c, "Speed, 0.02 < c < sqrt(2)");
    auto* opt_p = sub_solve->add_option("--p", solve.p, "Momentum (fixed-momentum minimisation)");
    opt_c->excludes(opt_p);
    add_grid(sub_solve, solve.L, solve.n);
    sub_solve->add_option("--in", solve.in, "Initial field (default: ansatz at d = 1/c); its grid is used")
        ->check(CLI::ExistingFile);
    add_newton(sub_solve, solve.newton);
    sub_solve->add_option("--out", solve.out, "Output .gpfield");
    sub_solve->add_option("--report", solve.report, "JSON report");

    BranchArgs branch;
    auto* sub_branch = app.add_subcommand("branch", "Branch continuation in c, written as CSV");
    add_config(sub_branch, config);
    sub_branch->add_option("--c-start", branch.c_start, "Smallest speed");
    sub_branch->add_option("--c-end", branch.c_end, "Largest speed (solved first)");
    sub_branch->add_option("--steps", branch.steps, "Number of branch points")->check(CLI::PositiveNumber);
    add_grid(sub_branch, branch.L, branch.n);
    sub_branch->add_flag("--independent", branch.independent, "Solve every point from the ansatz");
    add_newton(sub_branch, branch.newton);
    sub_branch->add_option("--out", branch.out, "Output CSV");
    sub_branch->add_option("--snapshots", branch.snapshots, "Directory for per-point .gpfield snapshots");
    sub_branch->add_option("--report", branch.report, "JSON report with the branch checks");

    DiagnoseArgs diagnose;
    auto* sub_diagnose = app.add_subcommand("diagnose", "Vortex-level audits of a converged snapshot");
    add_config(sub_diagnose, config);
    sub_diagnose->add_option("snapshot", diagnose.in, "Converged .gpfield")->check(CLI::ExistingFile);
    sub_diagnose->add_option("--c", diagnose.c, "Speed (default: from the snapshot header)");
    sub_diagnose->add_option("--report", diagnose.report, "JSON report (default: stdout)");
    sub_diagnose->add_option("--exclusion-radius", diagnose.exclusion_radius, "Clearing-out disk radius");
    sub_diagnose->add_option("--partition-radius", diagnose.partition_radius, "Energy disk radius (rescaled)");
    sub_diagnose->add_option("--jacobian-radius", diagnose.jacobian_radius, "Jacobian test disk radius (rescaled)");
    sub_diagnose->add_option("--annuli", diagnose.annuli, "Annuli of the near-vortex decay table")
        ->check(CLI::Range(1, 1024));

    VerifyArgs verify;
    auto* sub_verify = app.add_subcommand("verify", "Solution-level invariant checks of a snapshot");
    add_config(sub_verify, config);
    sub_verify->add_option("snapshot", verify.in, "Snapshot .gpfield")->check(CLI::ExistingFile);
    sub_verify->add_option("--c", verify.c, "Expected speed (default: from the snapshot header)");
    sub_verify->add_option("--report", verify.report, "JSON report (default: stdout)");
    sub_verify->add_option("--tol", verify.tol, "Residual tolerance (<= 0: 1e-8 * sqrt(area))");
    sub_verify->add_option("--pohozaev", verify.pohozaev, "Relative Pohozaev defect limit");
    sub_verify->add_option("--gradient-bound", verify.gradient_bound, "Limit for max |grad u|");
    sub_verify->add_option("--symmetry", verify.symmetry, "Limit for the symmetry defects");

    PerturbArgs perturb;
    auto* sub_perturb = app.add_subcommand("perturb-resolve", "Perturb a solution, re-solve and align with it");
    add_config(sub_perturb, config);
    sub_perturb->add_option("--in", perturb.in, "Converged base snapshot")->check(CLI::ExistingFile);
    sub_perturb->add_option("--c", perturb.c, "Speed (solves the base from the ansatz when --in is absent)");
    add_grid(sub_perturb, perturb.L, perturb.n);
    sub_perturb->add_option("--amplitude", perturb.amplitude, "Sup-norm of the perturbation (<= 0.05)");
    sub_perturb->add_option("--seeds", perturb.seeds, "Perturbation seeds");
    sub_perturb->add_option("--d0-tol", perturb.d0_tol, "Pass threshold for the aligned semi-distance");
    add_newton(sub_perturb, perturb.newton);
    sub_perturb->add_option("--report", perturb.report, "JSON report (default: stdout)");

    RunArgs run;
    auto* sub_run = app.add_subcommand("run", "End-to-end pipeline profile -> ansatz -> branch -> diagnose");
    sub_run->add_option("config", run.config, "Pipeline config (JSON)")->check(CLI::ExistingFile);
    sub_run->add_option("--out-dir", run.out_dir, "Output directory (overrides output_dir)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    const int env_threads = gpvw::threads_from_env(0);
    if (threads_opt->count() > 0) gpvw::set_num_threads(threads);
    else if (env_threads > 0) gpvw::set_num_threads(env_threads);
    else gpvw::set_num_threads(static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));

    try {
        CLI::App* sub = app.get_subcommands().front();
        if (sub == sub_run) {
            run.threads_given = threads_opt->count() > 0 || env_threads > 0;
            return run_pipeline(run);
        }
        if (!config.empty()) merge_json_config(*sub, config);
        json resolved = resolved_options(*sub);
        resolved["threads"] = gpvw::num_threads();
        if (sub == sub_profile) return run_profile(profile, resolved);
        if (sub == sub_ansatz) return run_ansatz(ansatz, resolved);
        if (sub == sub_solve) return run_solve(solve, resolved);
        if (sub == sub_branch) return run_branch(branch, resolved);
        if (sub == sub_diagnose) return run_diagnose(diagnose, resolved);
        if (sub == sub_verify) return run_verify(verify, resolved);
        if (sub == sub_perturb) return run_perturb(perturb, resolved);
        return exit_usage;
    } catch (const UsageError& e) {
        return report_error("usage error", e, exit_usage);
    } catch (const gpvw::FormatError& e) {
        return report_error("format error", e, exit_usage);
    } catch (const gpvw::InputError& e) {
        return report_error("input error", e, exit_usage);
    } catch (const gpvw::ConvergenceError& e) {
        return report_error("not converged", e, exit_not_converged);
    } catch (const gpvw::ConstraintError& e) {
        return report_error("not converged", e, exit_not_converged);
    } catch (const gpvw::Error& e) {
        return report_error("check failed", e, exit_check_failed);
    } catch (const std::exception& e) {
        return report_error("error", e, exit_usage);
    }
}
