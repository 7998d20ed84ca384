#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cli_support.hpp"

namespace gpvw::cli {

struct ProfileArgs {
    int degree = 1;
    double rmax = 30.0;
    int nodes = 6000;
    double tol = 1e-10;
    std::string out;
    std::string report;
};

struct AnsatzArgs {
    double d = 0.0;
    double L = 60.0;
    int n = 513;
    double rmax = 30.0;
    int nodes = 6000;
    std::string out;
};

/// Newton options shared by the solving subcommands.
struct NewtonArgs {
    double tol = 0.0;  ///< <= 0 selects 1e-8 * sqrt(area)
    int max_iters = 40;
    std::string far_field = "matched";
};

struct SolveArgs {
    std::optional<double> c;
    std::optional<double> p;
    double L = 60.0;
    int n = 513;
    std::string in;
    std::string out;
    std::string report;
    NewtonArgs newton;
};

struct BranchArgs {
    std::optional<double> c_start;
    std::optional<double> c_end;
    std::optional<int> steps;
    double L = 60.0;
    int n = 513;
    bool independent = false;
    std::string out;
    std::string snapshots;
    std::string report;
    NewtonArgs newton;
};

struct DiagnoseArgs {
    std::string in;
    std::optional<double> c;
    std::string report;
    double exclusion_radius = 5.0;
    double partition_radius = 0.1;
    double jacobian_radius = 0.1;
    int annuli = 16;
};

struct VerifyArgs {
    std::string in;
    std::optional<double> c;
    std::string report;
    double tol = 0.0;
    double pohozaev = 0.02;
    double gradient_bound = 1.0;
    double symmetry = 1e-6;
};

struct PerturbArgs {
    std::string in;
    std::optional<double> c;
    double L = 60.0;
    int n = 513;
    double amplitude = 0.02;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    double d0_tol = 1e-3;
    std::string report;
    NewtonArgs newton;
};

struct RunArgs {
    std::string config;
    std::string out_dir;       ///< overrides the config's "output_dir"
    bool threads_given = false;  ///< --threads or GPVW_THREADS set; the config's "threads" is then ignored
};

// Each command returns its exit code; errors propagate as exceptions and are
// mapped to exit codes by the caller. `config` is the resolved option set that
// goes into the report.
int run_profile(const ProfileArgs& a, const json& config);
int run_ansatz(const AnsatzArgs& a, const json& config);
int run_solve(const SolveArgs& a, const json& config);
int run_branch(const BranchArgs& a, const json& config);
int run_diagnose(const DiagnoseArgs& a, const json& config);
int run_verify(const VerifyArgs& a, const json& config);
int run_perturb(const PerturbArgs& a, const json& config);
int run_pipeline(const RunArgs& a);

}  // namespace gpvw::cli
