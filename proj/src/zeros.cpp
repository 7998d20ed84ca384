#include <algorithm>
#include <cmath>
#include <numbers>

#include "gpvw/errors.hpp"
#include "gpvw/field_ops.hpp"

namespace gpvw {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

/// Phase increment arg(b / a) wrapped to (-pi, pi].
double phase_step(cplx a, cplx b) { return std::arg(b * std::conj(a)); }

/// Winding of the closed polygon through the given values (counter-clockwise order).
double polygon_winding(const cplx* values, int count) {
    double total = 0.0;
    for (int k = 0; k < count; ++k) total += phase_step(values[k], values[(k + 1) % count]);
    return total / two_pi;
}

struct CellZero {
    double s = 0.5;
    double t = 0.5;
    bool converged = false;
};

/// Newton iteration for the zero of the bilinear interpolant on a unit cell with
/// corner values a (0,0), b (1,0), c (1,1), d (0,1).
CellZero bilinear_zero(cplx a, cplx b, cplx c, cplx d) {
    CellZero z;
    for (int it = 0; it < 50; ++it) {
        const cplx f = (1 - z.s) * (1 - z.t) * a + z.s * (1 - z.t) * b + z.s * z.t * c + (1 - z.s) * z.t * d;
        const cplx fs = (1 - z.t) * (b - a) + z.t * (c - d);
        const cplx ft = (1 - z.s) * (d - a) + z.s * (c - b);
        const double det = fs.real() * ft.imag() - ft.real() * fs.imag();
        if (std::abs(det) < 1e-300) return z;
        const double ds = (f.real() * ft.imag() - ft.real() * f.imag()) / det;
        const double dt = (fs.real() * f.imag() - f.real() * fs.imag()) / det;
        z.s -= ds;
        z.t -= dt;
        if (!std::isfinite(z.s) || !std::isfinite(z.t) || std::abs(z.s - 0.5) > 2.0 || std::abs(z.t - 0.5) > 2.0)
            return {0.5, 0.5, false};
        if (std::abs(ds) + std::abs(dt) < 1e-14) {
            z.converged = z.s >= -1e-9 && z.s <= 1.0 + 1e-9 && z.t >= -1e-9 && z.t <= 1.0 + 1e-9;
            return z.converged ? z : CellZero{0.5, 0.5, false};
        }
    }
    return {0.5, 0.5, false};
}

}  // namespace

int winding_degree(const Field2D& u, Point center, double radius, int samples) {
    if (!(radius > 0.0) || samples < 8) throw InputError("winding_degree: need radius > 0 and at least 8 samples");
    std::vector<cplx> values(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
        const double theta = two_pi * k / samples;
        values[k] = u.interpolate(center.x + radius * std::cos(theta), center.y + radius * std::sin(theta));
        if (std::abs(values[k]) < 0.1)
            throw VortexOnCircleError("winding_degree: |u| < 0.1 on the sampling circle");
    }
    const double w = polygon_winding(values.data(), samples);
    const double n = std::round(w);
    if (std::abs(w - n) >= 0.25) throw IllConditionedDegreeError("winding_degree: winding is not close to an integer");
    return static_cast<int>(n);
}

VortexSet find_zeros(const Field2D& u) {
    const auto& g = u.grid();
    VortexSet out;
    std::vector<char> zero_node(g.size(), 0);
    for (std::size_t k = 0; k < g.size(); ++k) zero_node[k] = u.values()[k] == cplx(0.0, 0.0);

    // Zeros sitting exactly on a node: degree from the ring of 8 neighbours.
    for (int j = 1; j + 1 < g.ny; ++j) {
        for (int i = 1; i + 1 < g.nx; ++i) {
            if (!zero_node[g.index(i, j)]) continue;
            const cplx ring[8] = {u(i + 1, j), u(i + 1, j + 1), u(i, j + 1), u(i - 1, j + 1),
                                  u(i - 1, j), u(i - 1, j - 1), u(i, j - 1), u(i + 1, j - 1)};
            if (std::any_of(std::begin(ring), std::end(ring), [](cplx z) { return z == cplx(0.0, 0.0); })) continue;
            const int deg = static_cast<int>(std::round(polygon_winding(ring, 8)));
            if (deg != 0) out.entries.push_back({{g.x(i), g.y(j)}, deg, true});
        }
    }

    for (int j = 0; j + 1 < g.ny; ++j) {
        for (int i = 0; i + 1 < g.nx; ++i) {
            if (zero_node[g.index(i, j)] || zero_node[g.index(i + 1, j)] || zero_node[g.index(i + 1, j + 1)] ||
                zero_node[g.index(i, j + 1)])
                continue;
            const cplx corners[4] = {u(i, j), u(i + 1, j), u(i + 1, j + 1), u(i, j + 1)};
            const int deg = static_cast<int>(std::round(polygon_winding(corners, 4)));
            if (deg == 0) continue;
            const CellZero z = bilinear_zero(corners[0], corners[1], corners[2], corners[3]);
            out.entries.push_back({{g.x(i) + z.s * g.hx(), g.y(j) + z.t * g.hy()}, deg, z.converged});
        }
    }
    std::sort(out.entries.begin(), out.entries.end(), [](const Vortex& a, const Vortex& b) {
        return a.position.y != b.position.y ? a.position.y < b.position.y : a.position.x < b.position.x;
    });
    return out;
}

}  // namespace gpvw
