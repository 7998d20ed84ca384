#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "gpvw/field.hpp"
#include "gpvw/tw_solver.hpp"
#include "gpvw/vortex_profile.hpp"

namespace gpvw {

struct BranchPoint {
    double c = 0.0;
    double p = 0.0;
    double energy = 0.0;
    double kinetic = 0.0;
    double potential = 0.0;
    double d = 0.0;
    double pohozaev_rel = 0.0;
    double residual = 0.0;
};

/// Branch records ordered by strictly increasing c.
struct BranchTable {
    std::vector<BranchPoint> points;
    GridSpec grid;

    std::size_t size() const { return points.size(); }
};

BranchPoint branch_point(const TravellingWave& tw);

struct BranchOptions {
    /// Solve every point from the ansatz at d = 1/c instead of warm-starting.
    bool independent = false;
    /// When set, every converged field is written there as c_<value>.gpfield.
    std::optional<std::filesystem::path> snapshot_dir;
    /// Radial profile for the ansatz; a profile on r_max = 30 with 6000 nodes when unset.
    const VortexProfile* profile = nullptr;
    /// Called after each converged point (in solve order, i.e. decreasing c).
    std::function<void(const TravellingWave&)> on_point;
};

/// Speeds c_start + k (c_end - c_start) / (steps - 1), k = 0 .. steps - 1 (only c_end when steps = 1).
std::vector<double> branch_speeds(double c_start, double c_end, int steps);

/// Solves at c_end from the ansatz, then marches down to c_start warm-starting
/// from the previous solution. Requires 0.02 < c_start < c_end < 0.5 (c_start is
/// ignored when steps = 1). Solver errors are rethrown annotated with the failing c.
BranchTable continue_branch(double c_start, double c_end, int steps, const GridSpec& grid,
                            const SolverConfig& cfg = {}, const BranchOptions& options = {});

/// |dE/dc - c dP/dc| / |dE/dc| at every interior point (central differences).
std::vector<double> hamilton_residuals(const BranchTable& t);

/// c^2 |dP/dc| / (2 pi) at every interior point.
std::vector<double> dPdc_check(const BranchTable& t);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
    std::vector<double> second_differences;  ///< divided second differences of E in p (ordered by p)
    bool concave = false;                     ///< all second differences negative
};

/// Least-squares fit E = slope ln p + intercept. Needs >= 4 points with max p / min p >= 1.5.
SlopeFit emin_slope_vs_logp(const BranchTable& t);

struct ActionProfile {
    std::vector<double> values;  ///< E - c_star p per point
    std::size_t argmax = 0;      ///< ties resolved toward smaller c
    std::size_t nearest = 0;     ///< index of the point whose c is nearest c_star
};

/// Requires c_star strictly inside the table's c range.
ActionProfile action_along_branch(const BranchTable& t, double c_star);

struct KineticCheck {
    std::vector<double> ratios;  ///< c dK/dc / (-2 pi) at interior points
    bool strictly_decreasing = false;
};

KineticCheck kinetic_monotonicity(const BranchTable& t);

/// True when p and E are both strictly decreasing in c.
bool monotone_in_c(const BranchTable& t);

/// CSV with header c,p,energy,kinetic,potential,d,pohozaev_rel,residual and 17 significant digits.
void write_branch_csv(std::ostream& out, const BranchTable& t);
void write_branch_csv(const std::filesystem::path& path, const BranchTable& t);

/// Throws FormatError on a bad header or malformed row. The grid is left empty.
BranchTable read_branch_csv(std::istream& in);
BranchTable read_branch_csv(const std::filesystem::path& path);

}  // namespace gpvw
