#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gpvw/errors.hpp"
#include "gpvw/field.hpp"
#include "gpvw/field_ops.hpp"

namespace gpvw {

/// Boundary treatment of the travelling-wave problem.
enum class FarFieldMode {
    unit,     ///< ghost ring holds the constant 1
    matched,  ///< ghost ring holds the linearised dipole far field with A = P_2 / pi, updated every iteration
};

struct SolverConfig {
    double residual_tol = 0.0;        ///< <= 0 selects 1e-8 * sqrt(area)
    int max_newton_iterations = 40;
    double krylov_tol = 1e-3;
    int krylov_restart = 60;
    int krylov_max_iterations = 600;
    bool symmetry_projection = true;  ///< x1-even projection after every update (plus x2-conjugation when the start has it)
    FarFieldMode far_field = FarFieldMode::matched;
    int stagnation_window = 5;        ///< stagnation: < 1% reduction over this many iterations
    double levenberg_shift = 0.1;     ///< Jacobian shift sigma = levenberg_shift * ||F||, used after the first cut step (0 = plain Newton)

    // Fixed-momentum flow.
    double flow_tol = 0.0;            ///< <= 0 selects 2e-5 * sqrt(area)
    int flow_max_steps = 4000;
    double flow_step = 1.0;           ///< initial step in the Sobolev metric
    int momentum_correction_interval = 50;
    double momentum_drift_limit = 0.05;

    /// Optional progress hook: (iteration, residual norm, GMRES iterations, step length).
    std::function<void(int, double, int, double)> on_newton_iteration;

    double resolved_residual_tol(const GridSpec& g) const;
    double resolved_flow_tol(const GridSpec& g) const;
};

/// Converged solution with its scalar record.
struct TravellingWave {
    Field2D field;
    double c = 0.0;
    double p = 0.0;
    EnergyParts energy;
    double residual = 0.0;
    double pohozaev = 0.0;
    double d = 0.0;            ///< x1 coordinate of the +1 zero
    double max_modulus = 0.0;
    double max_gradient = 0.0;
    VortexSet zeros;
    int newton_iterations = 0;
    int flow_steps = 0;
    double target_p = 0.0;     ///< fixed-momentum runs: requested momentum
    double flow_multiplier = 0.0;  ///< fixed-momentum runs: multiplier at the end of the flow
};

/// Thrown when the Newton iteration stagnates or runs out of iterations; carries the last iterate.
class SolveError : public ConvergenceError {
public:
    SolveError(const std::string& what, double last_residual, Field2D iterate, double c)
        : ConvergenceError(what, last_residual), iterate_(std::move(iterate)), c_(c) {}
    const Field2D& iterate() const noexcept { return iterate_; }
    double speed() const noexcept { return c_; }

private:
    Field2D iterate_;
    double c_;
};

/// Evaluates the record of a field at speed c without checking convergence or
/// topology (d is 0 when no +1 zero on the positive x1 axis is found).
TravellingWave describe_wave(const Field2D& u, double c);

/// Throws TopologyError unless the zeros are exactly one +1 zero with x1 > 0 and one -1 zero with x1 < 0.
void require_two_vortices(const VortexSet& zeros);

/// Newton-Krylov solve of -i c d_2 u - Lap u - (1 - |u|^2) u = 0 from `initial`.
TravellingWave solve_fixed_c(const Field2D& initial, double c, const SolverConfig& cfg = {});

/// Minimises E at fixed P_2 = p by a projected Sobolev gradient flow started
/// from the two-vortex ansatz at d = p / (2 pi), then polishes with Newton at
/// the emergent speed, correcting the speed until P_2 matches p.
TravellingWave minimize_fixed_p(double p, const GridSpec& grid, const SolverConfig& cfg = {});

/// Same, started from a given field (which must be close to the constraint).
TravellingWave minimize_fixed_p(double p, const Field2D& initial, const SolverConfig& cfg = {});

/// Smooth pseudo-random perturbation, x1-even and x2-conjugation symmetric: sine modes up to `modes` in each
/// direction with coefficients drawn from mt19937_64(seed), scaled to sup-norm `amplitude`.
std::vector<cplx> smooth_perturbation(const GridSpec& grid, double amplitude, std::uint64_t seed, int modes = 8);

struct PerturbResult {
    AlignmentResult alignment;
    TravellingWave wave;
};

/// Adds smooth_perturbation(amplitude, seed) to base, re-solves at the same
/// speed and aligns the result with base.
PerturbResult perturb_resolve(const TravellingWave& base, double amplitude, std::uint64_t seed,
                              const SolverConfig& cfg = {});

}  // namespace gpvw
