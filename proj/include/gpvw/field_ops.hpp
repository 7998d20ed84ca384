#pragma once

#include <vector>

#include "gpvw/field.hpp"

namespace gpvw {

// Discretisation conventions shared by every operation below:
//  * quadrature weight hx*hy at every grid node (trapezoidal rule on the grid
//    extended by the ghost ring, where the integrands vanish);
//  * kinetic energy from forward differences on grid edges, ghost edges
//    included, so that its gradient is exactly the 5-point Laplacian;
//  * centred differences for d_2 and for pointwise gradients.

struct EnergyParts {
    double total = 0.0;
    double kinetic = 0.0;
    double potential = 0.0;
};

/// Ginzburg-Landau energy 1/2 int |grad u|^2 + 1/4 int (1 - |u|^2)^2.
EnergyParts energy(const Field2D& u);

/// Energy carried by each node (edge terms split between their endpoints);
/// the values sum to energy(u).total.
ScalarField energy_density(const Field2D& u);

/// Potential part 1/4 (1 - |u|^2)^2 * hx*hy per node.
ScalarField potential_density(const Field2D& u);

struct MomentumResult {
    double value = 0.0;
    double boundary_deviation = 0.0;  ///< max over the outer node ring of |u - far field|
    bool boundary_warning = false;    ///< boundary_deviation >= 0.2
};

/// P_2(u) = 1/2 int Re(i d_2 u (conj(u) - 1)).
MomentumResult momentum_p2(const Field2D& u);

/// Pointwise Jacobian <i d_1 u | d_2 u> = Re(i d_1 u conj(d_2 u)); zero on the outer node ring.
ScalarField jacobian_field(const Field2D& u);

/// Winding number of u along the circle |x - center| = radius, sampled at
/// `samples` points with bilinear interpolation.
/// Throws VortexOnCircleError when |u| < 0.1 on the circle and
/// IllConditionedDegreeError when the winding is not within 0.25 of an integer.
int winding_degree(const Field2D& u, Point center, double radius, int samples = 720);

/// Zeros located by plaquette winding and refined by Newton on the bilinear interpolant.
VortexSet find_zeros(const Field2D& u);

struct TwResidual {
    Field2D field;
    double norm = 0.0;  ///< sqrt(sum hx*hy |r|^2)
};

/// Residual -i c d_2 u - Lap u - (1 - |u|^2) u of the travelling-wave equation.
TwResidual tw_residual(const Field2D& u, double c);

/// |1/2 int (1 - |u|^2)^2 - c P_2(u)| / max(c P_2(u), 1e-12); 0 when both sides are below 1e-12.
double pohozaev_residual(const Field2D& u, double c);

/// w(x1, x2) = (u(x1, x2) + u(-x1, x2)) / 2, mirror-exact on the grid.
Field2D symmetrize_even_x1(const Field2D& u);

/// w(x1, x2) = (u(x1, x2) + conj(u(x1, -x2))) / 2, mirror-exact on the grid.
Field2D symmetrize_conj_x2(const Field2D& u);

/// max |u(x1, x2) - u(-x1, x2)|.
double even_defect_x1(const Field2D& u);

/// max |u(x1, -x2) - conj(u(x1, x2))|.
double conj_symmetry_defect_x2(const Field2D& u);

double max_modulus(const Field2D& u);

/// max over nodes of the centred-difference |grad u|.
double max_gradient(const Field2D& u);

/// L2 gradient of the energy: -Lap u - (1 - |u|^2) u.
std::vector<cplx> energy_gradient(const Field2D& u);

/// Exact gradient of the discrete P_2: i d_2 u, plus a term on the first and last
/// rows when the ghost ring differs from 1.
std::vector<cplx> momentum_gradient(const Field2D& u);

/// Real inner product sum hx*hy Re(a conj(b)).
double inner(const GridSpec& g, const std::vector<cplx>& a, const std::vector<cplx>& b);
double l2_norm(const GridSpec& g, const std::vector<cplx>& a);

/// D_0(u, v) = ||grad u - grad v||_2 + || |u| - |v| ||_2 (interior edges only).
double semi_distance(const Field2D& u, const Field2D& v);

/// w(x) = v(x - s e_2): exact row shift for whole cells, cubic interpolation
/// along x_2 otherwise; rows that leave the grid are filled from the far field.
Field2D shift_x2(const Field2D& v, double s);

struct AlignmentResult {
    double shift_x2 = 0.0;
    double phase = 0.0;
    double d0 = 0.0;
};

/// Minimises D_0(u, v(. - s e_2) e^{i gamma}) over s and gamma. Integer cell
/// shifts in [-max_shift_cells, max_shift_cells] are scanned, the best one is
/// refined by golden-section search; the phase is optimal in closed form.
AlignmentResult align_orbit(const Field2D& u, const Field2D& v, int max_shift_cells = 64);

struct DecayRow {
    double radius = 0.0;    ///< geometric mid radius of the annulus
    double deviation = 0.0; ///< sup (1 + r) |u - 1|
    double gradient = 0.0;  ///< sup (1 + r)^2 |grad u|
    double modulus = 0.0;   ///< sup (1 + r)^2 ||u| - 1|
};

/// Suprema over 16 geometrically spaced annuli between inner_radius and 0.9 L.
std::vector<DecayRow> decay_profile(const Field2D& u, double inner_radius, int annuli = 16);

/// True when the last entry is at most twice the median of the column.
bool no_growth(const std::vector<double>& column);

}  // namespace gpvw
