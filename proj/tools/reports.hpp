#pragma once

#include <optional>

#include "cli_support.hpp"
#include "gpvw/branch.hpp"
#include "gpvw/field_ops.hpp"
#include "gpvw/tw_solver.hpp"
#include "gpvw/vortex_diagnostics.hpp"
#include "gpvw/vortex_profile.hpp"

namespace gpvw::cli {

json to_json(const VortexSet& vs);
json to_json(const EnergyParts& e);
json to_json(const std::vector<DecayRow>& rows);
json to_json(const std::vector<DecayNearVortexRow>& rows);
json to_json(const EnergyPartition& part);
json to_json(const SpeedBoundAudit& audit);
json to_json(const ConcentrationReport& report);
json to_json(const AlignmentResult& a);
json to_json(const BranchTable& t);
json to_json(const SolverConfig& cfg, const GridSpec& grid);

/// Every scalar of a TravellingWave record.
json wave_scalars(const TravellingWave& tw);

/// Parses the optional "solver" object of a pipeline config onto a SolverConfig.
SolverConfig solver_from_json(const json& j);

/// Writes r,rho,drho with 17 significant digits.
void write_profile_csv(const std::filesystem::path& path, const VortexProfile& profile);

/// Limits of the solution-level invariant checks.
struct VerifyLimits {
    double residual_tol = 0.0;     ///< <= 0 selects 1e-8 * sqrt(area)
    double pohozaev = 0.02;        ///< relative Pohozaev defect
    double gradient_bound = 1.0;   ///< max |grad u|
    double symmetry = 1e-6;        ///< x1-mirror and x2-conjugation defects
};

struct Audit {
    json measured = json::object();
    CheckList checks;
};

/// Solution-level invariants of a field: finiteness, residual, Pohozaev, L-infinity
/// and gradient bounds, zero degrees, symmetry defects and decay profile. The
/// speed-dependent checks are skipped when c is unknown.
Audit verify_field(const Field2D& u, std::optional<double> c, const VerifyLimits& limits);

/// Branch-level checks: Hamilton relation, dP/dc asymptotics, E versus ln p slope
/// and concavity, kinetic monotonicity, mountain-pass argmax and speed bound.
Audit branch_checks(const BranchTable& t);

/// Vortex-level audits of a converged solution: rescaled positions, momentum
/// identity, Jacobian concentration, clearing-out, per-vortex energy and decay.
Audit diagnose_checks(const TravellingWave& tw, const DiagnosticsOptions& opt);

}  // namespace gpvw::cli
