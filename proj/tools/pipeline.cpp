#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>

#include "commands.hpp"
#include "gpvw/ansatz.hpp"
#include "gpvw/errors.hpp"
#include "gpvw/parallel.hpp"
#include "gpvw/snapshot.hpp"
#include "reports.hpp"

namespace gpvw::cli {

namespace fs = std::filesystem;

namespace {

const json& section(const json& root, const std::string& name) {
    static const json empty = json::object();
    if (!root.contains(name)) return empty;
    const json& s = root.at(name);
    if (!s.is_object()) throw UsageError("config key '" + name + "' must be an object");
    return s;
}

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) throw UsageError("unknown config key '" + where + key + "'");
}

template <class T>
T need(const json& sec, const std::string& sec_name, const std::string& key) {
    if (!sec.contains(key)) throw UsageError("missing config key '" + sec_name + "." + key + "'");
    try {
        return sec.at(key).get<T>();
    } catch (const json::exception& e) {
        throw UsageError("config key '" + sec_name + "." + key + "': " + e.what());
    }
}

template <class T>
T want(const json& sec, const std::string& sec_name, const std::string& key, T fallback) {
    return sec.contains(key) ? need<T>(sec, sec_name, key) : fallback;
}

/// Pipeline parameters, all validated before any work starts.
struct Pipeline {
    fs::path out;
    GridSpec grid;
    double rmax = 30.0;
    int nodes = 6000;
    double profile_tol = 1e-10;
    double c_start = 0.0, c_end = 0.0;
    int steps = 0;
    bool independent = false;
    SolverConfig solver;
    bool diagnose = true;
    double diagnose_c = 0.0;
    DiagnosticsOptions diag;
};

Pipeline parse(const json& cfg, const RunArgs& a) {
    if (!cfg.is_object()) throw UsageError("run: config must be a JSON object");
    reject_unknown(cfg, "", {"output_dir", "threads", "grid", "profile", "branch", "solver", "diagnose"});
    Pipeline p;
    const std::string out = !a.out_dir.empty() ? a.out_dir : want<std::string>(cfg, "", "output_dir", "");
    if (out.empty()) throw UsageError("run: no output directory (give --out-dir or 'output_dir')");
    p.out = out;

    const json& grid = section(cfg, "grid");
    reject_unknown(grid, "grid.", {"L", "n"});
    p.grid = make_grid(need<double>(grid, "grid", "L"), need<int>(grid, "grid", "n"));
    p.grid.validate();

    const json& prof = section(cfg, "profile");
    reject_unknown(prof, "profile.", {"rmax", "nodes", "tol"});
    p.rmax = need<double>(prof, "profile", "rmax");
    p.nodes = need<int>(prof, "profile", "nodes");
    p.profile_tol = need<double>(prof, "profile", "tol");
    if (!(p.rmax > 0.0) || p.nodes < 3 || !(p.profile_tol > 0.0))
        throw UsageError("profile: need rmax > 0, nodes >= 3 and tol > 0");

    const json& br = section(cfg, "branch");
    reject_unknown(br, "branch.", {"c_start", "c_end", "steps", "independent"});
    p.c_start = need<double>(br, "branch", "c_start");
    p.c_end = need<double>(br, "branch", "c_end");
    p.steps = need<int>(br, "branch", "steps");
    p.independent = want<bool>(br, "branch", "independent", false);
    if (p.steps < 1) throw UsageError("branch.steps must be >= 1");
    if (!(p.c_end > 0.02 && p.c_end < 0.5) || (p.steps > 1 && !(p.c_start > 0.02 && p.c_start < p.c_end)))
        throw UsageError("branch: need 0.02 < c_start < c_end < 0.5");

    if (cfg.contains("solver")) p.solver = solver_from_json(cfg.at("solver"));

    const json& dg = section(cfg, "diagnose");
    reject_unknown(dg, "diagnose.",
                   {"enabled", "c", "exclusion_radius", "partition_radius", "jacobian_radius", "annuli"});
    p.diagnose = want<bool>(dg, "diagnose", "enabled", true);
    p.diagnose_c = want<double>(dg, "diagnose", "c", p.steps > 1 ? p.c_start : p.c_end);
    p.diag.exclusion_radius = want<double>(dg, "diagnose", "exclusion_radius", p.diag.exclusion_radius);
    p.diag.partition_radius = want<double>(dg, "diagnose", "partition_radius", p.diag.partition_radius);
    p.diag.jacobian_radius = want<double>(dg, "diagnose", "jacobian_radius", p.diag.jacobian_radius);
    p.diag.annuli = want<int>(dg, "diagnose", "annuli", p.diag.annuli);
    return p;
}

json resolved_json(const Pipeline& p) {
    json j;
    j["output_dir"] = p.out.string();
    j["threads"] = num_threads();
    j["grid"] = {{"L", p.grid.half_width}, {"n", p.grid.nx}};
    j["profile"] = {{"rmax", p.rmax}, {"nodes", p.nodes}, {"tol", p.profile_tol}};
    j["branch"] = {{"c_start", p.c_start}, {"c_end", p.c_end}, {"steps", p.steps}, {"independent", p.independent}};
    j["solver"] = to_json(p.solver, p.grid);
    j["diagnose"] = {{"enabled", p.diagnose},
                     {"c", p.diagnose_c},
                     {"exclusion_radius", p.diag.exclusion_radius},
                     {"partition_radius", p.diag.partition_radius},
                     {"jacobian_radius", p.diag.jacobian_radius},
                     {"annuli", p.diag.annuli}};
    return j;
}

/// Moves the artifacts written so far into <out>/failed and records the error there.
void persist_failure(const fs::path& out, const std::string& stage, const std::exception& e,
                     const std::vector<fs::path>& artifacts, const json& header) {
    const fs::path failed = out / "failed";
    fs::create_directories(failed);
    json err = header;
    err["stage"] = stage;
    err["error"] = e.what();
    err["passed"] = false;
    json moved = json::array();
    for (const auto& p : artifacts) {
        if (!fs::exists(p)) continue;
        const fs::path dest = failed / p.filename();
        fs::remove_all(dest);
        fs::rename(p, dest);
        moved.push_back(dest.string());
    }
    err["artifacts"] = moved;
    if (const auto* se = dynamic_cast<const SolveError*>(&e)) {
        err["last_residual"] = se->last_residual();
        const fs::path it = failed / "iterate.gpfield";
        write_gpfield(it, se->iterate(), {se->speed(), std::nullopt});
        err["failed_iterate"] = it.string();
    }
    write_json(failed / "error.json", err);
}

}  // namespace

int run_pipeline(const RunArgs& a) {
    if (a.config.empty()) throw UsageError("run: a config file is required");
    const json cfg = read_json_file(a.config);
    if (!a.threads_given && cfg.is_object() && cfg.contains("threads")) {
        const int n = need<int>(cfg, "", "threads");
        if (n < 1) throw UsageError("config key 'threads' must be >= 1");
        set_num_threads(n);
    }
    const Pipeline p = parse(cfg, a);
    const json header = report_header("run", resolved_json(p));

    fs::create_directories(p.out);
    fs::remove_all(p.out / "failed");
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<fs::path> artifacts;
    std::string stage;
    json report = header;
    CheckList checks;
    try {
        stage = "profile";
        const VortexProfile prof = solve_profile(1, p.rmax, p.nodes, p.profile_tol);
        artifacts.push_back(p.out / "profile.csv");
        write_profile_csv(artifacts.back(), prof);
        report["stages"]["profile"] = {{"kappa", prof.kappa}, {"residual", prof.residual}};

        stage = "ansatz";
        const Field2D start = two_vortex(p.grid, {1.0 / p.c_end, &prof});
        artifacts.push_back(p.out / "ansatz.gpfield");
        write_gpfield(artifacts.back(), start);
        report["stages"]["ansatz"] = {{"d", 1.0 / p.c_end}, {"energy", energy(start).total}};

        stage = "branch";
        BranchOptions opt;
        opt.independent = p.independent;
        opt.profile = &prof;
        opt.snapshot_dir = p.out / "snapshots";
        artifacts.push_back(*opt.snapshot_dir);
        std::optional<TravellingWave> diag_wave;
        opt.on_point = [&](const TravellingWave& tw) {
            std::fprintf(stderr, "c = %.6g: P = %.10g, E = %.10g, residual = %.3e, Newton iterations = %d\n", tw.c,
                         tw.p, tw.energy.total, tw.residual, tw.newton_iterations);
            if (!diag_wave || std::abs(tw.c - p.diagnose_c) < std::abs(diag_wave->c - p.diagnose_c)) diag_wave = tw;
        };
        const BranchTable table = continue_branch(p.c_start, p.c_end, p.steps, p.grid, p.solver, opt);
        artifacts.push_back(p.out / "branch.csv");
        write_branch_csv(artifacts.back(), table);
        const Audit branch = branch_checks(table);
        report["stages"]["branch"] = {{"table", to_json(table)}, {"measured", branch.measured}};
        checks.append(branch.checks);

        if (p.diagnose) {
            stage = "diagnose";
            const Audit diag = diagnose_checks(*diag_wave, p.diag);
            json d = header;
            d["wave"] = wave_scalars(*diag_wave);
            d["measured"] = diag.measured;
            d["checks"] = diag.checks.items();
            d["passed"] = diag.checks.passed();
            artifacts.push_back(p.out / "diagnostics.json");
            write_json(artifacts.back(), d);
            report["stages"]["diagnose"] = {{"c", diag_wave->c}, {"passed", diag.checks.passed()}};
            checks.append(diag.checks);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "run: stage '%s' failed: %s\n", stage.c_str(), e.what());
        persist_failure(p.out, stage, e, artifacts, header);
        throw;
    }
    report["checks"] = checks.items();
    report["passed"] = checks.passed();
    report["elapsed_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_json(p.out / "run.json", report);
    return exit_for(checks);
}

}  // namespace gpvw::cli
