#include <algorithm>
#include <cmath>

#include "gpvw/errors.hpp"
#include "gpvw/field_ops.hpp"
#include "gpvw/parallel.hpp"

namespace gpvw {

namespace {

double norm2(const cplx& z) { return z.real() * z.real() + z.imag() * z.imag(); }

void require_same_grid(const Field2D& u, const Field2D& v, const char* what) {
    if (!(u.grid() == v.grid())) throw InputError(std::string(what) + ": fields live on different grids");
}

/// D_0(u, e^{i gamma} w) using interior edges only.
double semi_distance_phase(const Field2D& u, const Field2D& w, cplx rot) {
    const auto& g = u.grid();
    const double wx = g.hy() / g.hx(), wy = g.hx() / g.hy();
    const double area = g.cell_area();
    const auto rows = static_cast<std::size_t>(g.ny);
    const double grad = row_reduce(rows, [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        double s = 0.0;
        for (int i = 0; i + 1 < g.nx; ++i)
            s += wx * norm2((u(i + 1, j) - u(i, j)) - rot * (w(i + 1, j) - w(i, j)));
        if (j + 1 < g.ny)
            for (int i = 0; i < g.nx; ++i) s += wy * norm2((u(i, j + 1) - u(i, j)) - rot * (w(i, j + 1) - w(i, j)));
        return s;
    });
    const double mod = row_reduce(rows, [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        double s = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            const double d = std::abs(u(i, j)) - std::abs(w(i, j));
            s += d * d;
        }
        return area * s;
    });
    return std::sqrt(grad) + std::sqrt(mod);
}

/// arg of sum grad u . conj(grad w) over interior edges: the optimal phase.
double optimal_phase(const Field2D& u, const Field2D& w) {
    const auto& g = u.grid();
    const double wx = g.hy() / g.hx(), wy = g.hx() / g.hy();
    const auto rows = static_cast<std::size_t>(g.ny);
    auto part = [&](bool imag_part) {
        return row_reduce(rows, [&](std::size_t jj) {
            const int j = static_cast<int>(jj);
            cplx s = 0.0;
            for (int i = 0; i + 1 < g.nx; ++i) s += wx * (u(i + 1, j) - u(i, j)) * std::conj(w(i + 1, j) - w(i, j));
            if (j + 1 < g.ny)
                for (int i = 0; i < g.nx; ++i) s += wy * (u(i, j + 1) - u(i, j)) * std::conj(w(i, j + 1) - w(i, j));
            return imag_part ? s.imag() : s.real();
        });
    };
    const double re = part(false), im = part(true);
    if (re == 0.0 && im == 0.0) return 0.0;
    return std::atan2(im, re);
}

}  // namespace

double semi_distance(const Field2D& u, const Field2D& v) {
    require_same_grid(u, v, "semi_distance");
    return semi_distance_phase(u, v, cplx(1.0, 0.0));
}

Field2D shift_x2(const Field2D& v, double s) {
    const auto& g = v.grid();
    Field2D w(g, cplx(1.0, 0.0), v.far_field());
    const double cells = s / g.hy();
    const double base = std::floor(cells);
    const double t = cells - base;
    const int k = static_cast<int>(base);
    auto sample = [&](int i, int j) -> cplx {
        if (j >= 0 && j < g.ny) return v(i, j);
        return v.far_field().value(g.x(i), g.y(j));
    };
    // w(i, j) = v(i, j - cells) = v(i, (j - k) - t); cubic Lagrange through rows j-k-2 .. j-k+1.
    for (int j = 0; j < g.ny; ++j) {
        const int m = j - k;  // target row is m - t
        for (int i = 0; i < g.nx; ++i) {
            if (t == 0.0) {
                w(i, j) = sample(i, m);
                continue;
            }
            // Interpolate at position q = 1 - t in the stencil rows (m-2, m-1, m, m+1) mapped to (-1, 0, 1, 2).
            const double q = 1.0 - t;
            const double a = -q * (q - 1) * (q - 2) / 6.0;
            const double b = (q + 1) * (q - 1) * (q - 2) / 2.0;
            const double c = -(q + 1) * q * (q - 2) / 2.0;
            const double d = (q + 1) * q * (q - 1) / 6.0;
            w(i, j) = a * sample(i, m - 2) + b * sample(i, m - 1) + c * sample(i, m) + d * sample(i, m + 1);
        }
    }
    return w;
}

AlignmentResult align_orbit(const Field2D& u, const Field2D& v, int max_shift_cells) {
    require_same_grid(u, v, "align_orbit");
    const auto& g = u.grid();
    auto evaluate = [&](double s, double& phase) {
        const Field2D w = shift_x2(v, s);
        phase = optimal_phase(u, w);
        return semi_distance_phase(u, w, std::polar(1.0, phase));
    };

    const int kmax = std::clamp(max_shift_cells, 0, g.ny - 1);
    double best_s = 0.0, best_phase = 0.0;
    double best = evaluate(0.0, best_phase);
    for (int k = -kmax; k <= kmax; ++k) {
        if (k == 0) continue;
        double ph = 0.0;
        const double d = evaluate(k * g.hy(), ph);
        if (d < best) {
            best = d;
            best_s = k * g.hy();
            best_phase = ph;
        }
    }

    if (best > 0.0) {
        // Golden-section refinement on [s - h, s + h].
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = best_s - g.hy(), b = best_s + g.hy();
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double p1 = 0.0, p2 = 0.0;
        double f1 = evaluate(x1, p1), f2 = evaluate(x2, p2);
        for (int it = 0; it < 40 && b - a > 1e-7 * g.hy(); ++it) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                p2 = p1;
                x1 = b - gr * (b - a);
                f1 = evaluate(x1, p1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                p1 = p2;
                x2 = a + gr * (b - a);
                f2 = evaluate(x2, p2);
            }
        }
        if (f1 < best) {
            best = f1;
            best_s = x1;
            best_phase = p1;
        }
        if (f2 < best) {
            best = f2;
            best_s = x2;
            best_phase = p2;
        }
    }
    return {best_s, best_phase, best};
}

}  // namespace gpvw
