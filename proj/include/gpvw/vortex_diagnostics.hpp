#pragma once

#include <array>
#include <vector>

#include "gpvw/field.hpp"
#include "gpvw/tw_solver.hpp"

namespace gpvw {

/// Zeros of tw divided by p (frame rescaled, scale p), the +1 vortex first.
/// Throws TopologyError unless tw has exactly one +1 and one -1 zero.
VortexSet rescaled_vortices(const TravellingWave& tw);

/// Same for an arbitrary zero set and momentum.
VortexSet rescale(const VortexSet& physical, double p);

/// Tested defect of Ju - pi sum deg delta_y in the dual of compactly supported
/// Lipschitz functions, per vortex. Test functions are tents (s - |x - z|)_+ of
/// unit Lipschitz constant, for every scale s and centres z = y + (a, b) s / 2,
/// a, b in {-1, 0, 1}, kept when their support lies inside the disk of the given
/// radius around y. Lengths are in the frame of `vs`: with scale p the pairing is
/// int Ju(x) psi(x / p) dx, which is the pairing of the rescaled Jacobian.
/// Throws InputError when disks overlap or leave the grid, or when no tent fits.
std::vector<double> jacobian_concentration_defect(const ScalarField& jacobian, const VortexSet& vs, double radius,
                                                  const std::vector<double>& scales);
std::vector<double> jacobian_concentration_defect(const Field2D& u, const VortexSet& vs, double radius,
                                                  const std::vector<double>& scales);

/// min |u| over grid nodes outside every disk of radius exclusion_radius (physical
/// units) around the vortices; 1-like fields with no vortices give min |u| over the grid.
double clearing_out_audit(const Field2D& u, const VortexSet& vs, double exclusion_radius);

struct EnergyPartition {
    std::vector<double> disk_energies;  ///< energy inside each disk, in vortex order
    double exterior_energy = 0.0;
    double exterior_potential = 0.0;    ///< int (1 - |u|^2)^2 outside the disks (= p^2 int (1 - |u^|^2)^2 in the rescaled frame)
    double total = 0.0;
};

/// Energy split by disks of the given radius (frame units of vs) around each vortex.
EnergyPartition vortex_energy_partition(const Field2D& u, const VortexSet& vs, double radius);

struct DecayNearVortexRow {
    double radius = 0.0;     ///< mid radius |y| of the annulus
    double modulus = 0.0;    ///< sup ||u| - 1| |y|^2
    double gradient = 0.0;   ///< sup |grad u| |y|
};

/// Suprema over up to `annuli` geometric annuli r_in <= |y| < r_out around every
/// vortex (physical units); annuli are at least one grid spacing wide.
std::vector<DecayNearVortexRow> modulus_decay_near_vortex(const Field2D& u, const VortexSet& vs, double r_in,
                                                          double r_out, int annuli = 16);

/// Annuli 4 <= |y| < d/2 around the two zeros. Throws RangeError when d < 10.
std::vector<DecayNearVortexRow> modulus_decay_near_vortex(const TravellingWave& tw, int annuli = 16);

struct KirchhoffAction {
    double value = 0.0;
    std::array<double, 4> gradient{};  ///< d/d(y+_1, y+_2, y-_1, y-_2)
};

/// 2 pi (2 ln|y+ - y-| - 2 pi [(y+)_1 - (y-)_1]). Throws InputError for coincident points.
KirchhoffAction kirchhoff_action(Point y_plus, Point y_minus);

struct SpeedBoundAudit {
    bool speed_ok = false;     ///< c <= 2E/p
    double speed_slack = 0.0;  ///< 2E/p - c
    bool linf_ok = false;      ///< max|u| <= 1 + c^2/4 + 1e-3
    double linf_slack = 0.0;
};

SpeedBoundAudit speed_bound_audit(double c, double energy, double p, double max_modulus);
SpeedBoundAudit speed_bound_audit(const TravellingWave& tw);

struct DiagnosticsOptions {
    double exclusion_radius = 5.0;           ///< clearing-out disks, physical units
    double partition_radius = 0.1;           ///< energy-partition disks, rescaled units
    double jacobian_radius = 0.1;            ///< rescaled units
    std::vector<double> jacobian_scales{0.025, 0.05, 0.1};
    int annuli = 16;
};

/// Every vortex-level audit of a converged solution.
struct ConcentrationReport {
    VortexSet rescaled;
    double pc = 0.0;
    double target_offset = 0.0;         ///< |x^+ - (1/(2 pi), 0)|
    double momentum_identity = 0.0;     ///< pi (x^+_1 - x^-_1)
    std::vector<double> jacobian_defects;
    double clearing_out_min = 0.0;
    EnergyPartition partition;
    std::vector<double> disk_lambda;    ///< pi ln p - disk energy
    SpeedBoundAudit speed;
};

ConcentrationReport concentration_report(const TravellingWave& tw, const DiagnosticsOptions& opt = {});

}  // namespace gpvw
