#pragma once

#include <vector>

namespace gpvw {

/// Radial modulus rho(r) of the degree +-1 Ginzburg-Landau vortex
/// rho(r) e^{+-i theta}, sampled on a uniform grid r_i = i * r_max / (nodes - 1).
///
/// rho solves rho'' + rho'/r - rho/r^2 + rho (1 - rho^2) = 0 with rho(0) = 0
/// and the far-field condition rho(r_max) = 1 - 1/(2 r_max^2). The profile is
/// the same for both degrees.
struct VortexProfile {
    int degree = 1;
    double r_max = 0.0;
    int nodes = 0;
    std::vector<double> r;
    std::vector<double> rho;
    std::vector<double> drho;
    double kappa = 0.0;       ///< slope rho'(0)
    double residual = 0.0;    ///< discrete L2 norm of the ODE residual
    int newton_iterations = 0;

    double spacing() const { return r_max / (nodes - 1); }
};

struct ProfileSample {
    double rho;
    double drho;
};

/// Damped Newton on the centred finite-difference discretisation.
/// Throws InputError for an invalid grid or degree, ConvergenceError when the
/// residual does not drop below `tol`.
VortexProfile solve_profile(int degree, double r_max, int nodes, double tol, int max_iterations = 50);

/// Cubic Hermite interpolation inside [0, r_max]; the algebraic tail
/// (1 - 1/(2 r^2), 1/r^3) beyond it.
ProfileSample eval_profile(const VortexProfile& profile, double r);

/// rho(r)/r extrapolated to r = 0 from the three smallest positive nodes
/// (rho/r is even in r, so the extrapolation is polynomial in r^2).
double estimate_kappa(const VortexProfile& profile);

/// Finite-difference ODE residual at the interior nodes.
std::vector<double> profile_residual(const std::vector<double>& r, const std::vector<double>& rho);

}  // namespace gpvw
