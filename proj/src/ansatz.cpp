#include "gpvw/ansatz.hpp"

#include <algorithm>
#include <cmath>

#include "gpvw/errors.hpp"
#include "gpvw/parallel.hpp"

namespace gpvw {

namespace {

/// Evaluates f(x, y) on the quadrant x >= 0, y >= 0 and fills the rest of the
/// grid by u(-x1, x2) = u(x1, x2) and u(x1, -x2) = conj(u(x1, x2)).
template <class F>
Field2D symmetric_fill(const GridSpec& g, FarField far, F f) {
    Field2D u(g, cplx(0.0, 0.0), far);
    const int ic = g.nx / 2, jc = g.ny / 2;
    parallel_for(static_cast<std::size_t>(g.ny - jc), [&](std::size_t b, std::size_t e) {
        for (std::size_t jj = b; jj < e; ++jj) {
            const int j = jc + static_cast<int>(jj);
            for (int i = ic; i < g.nx; ++i) {
                cplx v = f(g.x(i), j == jc ? 0.0 : g.y(j));
                if (j == jc) v = cplx(v.real(), 0.0);
                u(i, j) = v;
                u(g.mirror_i(i), j) = v;
                u(i, g.mirror_j(j)) = std::conj(v);
                u(g.mirror_i(i), g.mirror_j(j)) = std::conj(v);
            }
        }
    });
    return u;
}

/// e^{i n theta} of the offset (y1, y2), with the convention 1 at the origin.
cplx unit_phase(double y1, double y2, double r, int n) {
    if (r == 0.0) return cplx(1.0, 0.0);
    return cplx(y1 / r, n * y2 / r);
}

}  // namespace

void validate_ansatz(const GridSpec& grid, const AnsatzSpec& spec) {
    grid.validate();
    if (spec.profile == nullptr) throw InputError("ansatz: no vortex profile");
    if (!(spec.d > 0.0) || !std::isfinite(spec.d)) throw InputError("ansatz: d must be positive");
    if (spec.d + 5.0 > grid.half_width)
        throw InputError("ansatz: vortices at +-d e1 must lie at least 5 units inside the grid");
}

Field2D two_vortex(const GridSpec& grid, const AnsatzSpec& spec) {
    validate_ansatz(grid, spec);
    const VortexProfile& prof = *spec.profile;
    const double d = spec.d;
    return symmetric_fill(grid, FarField{2.0 * d, 0.0}, [&](double x, double y) {
        const double xp = x - d, xm = x + d;
        const double rp = std::hypot(xp, y), rm = std::hypot(xm, y);
        const double mod = eval_profile(prof, rp).rho * eval_profile(prof, rm).rho;
        if (mod == 0.0) return cplx(0.0, 0.0);
        return mod * unit_phase(xp, y, rp, 1) * unit_phase(xm, y, rm, -1);
    });
}

Field2D d_derivative_ansatz(const GridSpec& grid, const AnsatzSpec& spec) {
    validate_ansatz(grid, spec);
    const VortexProfile& prof = *spec.profile;
    const double d = spec.d;
    // V_n(y) = rho(r) e^{i n theta};  d_1 V_n = e^{i n theta} (rho' y1 / r - i n rho y2 / r^2),
    // which tends to kappa at the core.
    auto vortex = [&](double y1, double y2, int n, cplx& value, cplx& d1) {
        const double r = std::hypot(y1, y2);
        const ProfileSample s = eval_profile(prof, r);
        const cplx ph = unit_phase(y1, y2, r, n);
        value = s.rho * ph;
        d1 = r == 0.0 ? cplx(s.drho, 0.0) : ph * cplx(s.drho * y1 / r, -n * s.rho * y2 / (r * r));
    };
    return symmetric_fill(grid, FarField{}, [&](double x, double y) {
        cplx vp, dp, vm, dm;
        vortex(x - d, y, 1, vp, dp);
        vortex(x + d, y, -1, vm, dm);
        return -dp * vm + vp * dm;
    });
}

AnsatzDefect ansatz_defect(const Field2D& u, const AnsatzSpec& spec) {
    const auto& g = u.grid();
    const Field2D a = two_vortex(g, spec);
    const double r2 = std::pow(2.0 * ansatz_core_lambda, 2);
    AnsatzDefect out;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double diff = std::abs(u(i, j) - a(i, j));
            out.global = std::max(out.global, diff);
            const double x = g.x(i), y = g.y(j);
            const bool near = (x - spec.d) * (x - spec.d) + y * y <= r2 || (x + spec.d) * (x + spec.d) + y * y <= r2;
            if (near) out.near_cores = std::max(out.near_cores, diff);
        }
    }
    return out;
}

}  // namespace gpvw
