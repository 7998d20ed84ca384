#pragma once

#include "gpvw/field.hpp"
#include "gpvw/vortex_profile.hpp"

namespace gpvw {

/// Two vortices of degree +1 at +d e1 and -1 at -d e1 built from a radial profile.
struct AnsatzSpec {
    double d = 0.0;
    const VortexProfile* profile = nullptr;
};

/// Throws InputError unless d > 0, the profile is set and both vortices sit at
/// least 5 length units inside the grid.
void validate_ansatz(const GridSpec& grid, const AnsatzSpec& spec);

/// V_1(x - d e1) V_{-1}(x + d e1). Exactly even in x1 and satisfying
/// u(x1, -x2) = conj(u(x1, x2)) on the grid. The far field carries the dipole
/// 2d of the vortex pair at speed 0.
Field2D two_vortex(const GridSpec& grid, const AnsatzSpec& spec);

/// d/dd of the two-vortex product:
///   -d_1V_1(x - d e1) V_{-1}(x + d e1) + V_1(x - d e1) d_1V_{-1}(x + d e1).
/// It inherits the symmetries of the product: even in x1, conjugate-symmetric in x2.
Field2D d_derivative_ansatz(const GridSpec& grid, const AnsatzSpec& spec);

struct AnsatzDefect {
    double near_cores = 0.0;  ///< sup |u - ansatz| over the disks of radius 2 * lambda around +-d e1
    double global = 0.0;      ///< sup |u - ansatz| over the grid
};

constexpr double ansatz_core_lambda = 10.0;

AnsatzDefect ansatz_defect(const Field2D& u, const AnsatzSpec& spec);

}  // namespace gpvw
