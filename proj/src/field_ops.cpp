#include "gpvw/field_ops.hpp"

#include <algorithm>
#include <cmath>

#include "gpvw/errors.hpp"
#include "gpvw/parallel.hpp"

namespace gpvw {

namespace {

double norm2(const cplx& z) { return z.real() * z.real() + z.imag() * z.imag(); }

}  // namespace

EnergyParts energy(const Field2D& u) {
    const auto& g = u.grid();
    const Padded p(u);
    const double hx = g.hx(), hy = g.hy();
    const double wx = 0.5 * hy / hx;  // 1/2 |du|^2 / hx^2 * hx*hy
    const double wy = 0.5 * hx / hy;
    const double area = g.cell_area();

    // Row j carries the x-edges of row j and the y-edges below it; row ny only
    // the top ghost edges.
    const double kinetic = row_reduce(static_cast<std::size_t>(g.ny + 1), [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        double s = 0.0;
        if (j < g.ny)
            for (int i = 0; i <= g.nx; ++i) s += wx * norm2(p(i, j) - p(i - 1, j));
        for (int i = 0; i < g.nx; ++i) s += wy * norm2(p(i, j) - p(i, j - 1));
        return s;
    });
    const double potential = row_reduce(static_cast<std::size_t>(g.ny), [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        double s = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            const double w = 1.0 - norm2(u(i, j));
            s += w * w;
        }
        return 0.25 * area * s;
    });
    return {kinetic + potential, kinetic, potential};
}

ScalarField potential_density(const Field2D& u) {
    const auto& g = u.grid();
    ScalarField out{g, std::vector<double>(g.size())};
    const double area = g.cell_area();
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double w = 1.0 - norm2(u.values()[k]);
        out.values[k] = 0.25 * area * w * w;
    }
    return out;
}

ScalarField energy_density(const Field2D& u) {
    const auto& g = u.grid();
    const Padded p(u);
    const double wx = 0.5 * g.hy() / g.hx();
    const double wy = 0.5 * g.hx() / g.hy();
    ScalarField out = potential_density(u);
    auto add = [&](int i, int j, double e) {
        if (i >= 0 && i < g.nx && j >= 0 && j < g.ny) out.values[g.index(i, j)] += e;
    };
    for (int j = 0; j <= g.ny; ++j) {
        if (j < g.ny) {
            for (int i = 0; i <= g.nx; ++i) {
                const double e = wx * norm2(p(i, j) - p(i - 1, j));
                const bool a_in = i - 1 >= 0, b_in = i < g.nx;
                if (a_in && b_in) {
                    add(i - 1, j, 0.5 * e);
                    add(i, j, 0.5 * e);
                } else {
                    add(a_in ? i - 1 : i, j, e);
                }
            }
        }
        for (int i = 0; i < g.nx; ++i) {
            const double e = wy * norm2(p(i, j) - p(i, j - 1));
            const bool a_in = j - 1 >= 0, b_in = j < g.ny;
            if (a_in && b_in) {
                add(i, j - 1, 0.5 * e);
                add(i, j, 0.5 * e);
            } else {
                add(i, a_in ? j - 1 : j, e);
            }
        }
    }
    return out;
}

MomentumResult momentum_p2(const Field2D& u) {
    const auto& g = u.grid();
    const Padded p(u);
    const double c2 = 1.0 / (2.0 * g.hy());
    const double area = g.cell_area();
    const cplx I(0.0, 1.0);
    MomentumResult out;
    out.value = row_reduce(static_cast<std::size_t>(g.ny), [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        double s = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            const cplx d2 = (p(i, j + 1) - p(i, j - 1)) * c2;
            s += (I * d2 * (std::conj(p(i, j)) - 1.0)).real();
        }
        return 0.5 * area * s;
    });
    double dev = 0.0;
    auto check = [&](int i, int j) {
        dev = std::max(dev, std::abs(u(i, j) - u.far_field().value(g.x(i), g.y(j))));
    };
    for (int i = 0; i < g.nx; ++i) {
        check(i, 0);
        check(i, g.ny - 1);
    }
    for (int j = 0; j < g.ny; ++j) {
        check(0, j);
        check(g.nx - 1, j);
    }
    out.boundary_deviation = dev;
    out.boundary_warning = dev >= 0.2;
    return out;
}

ScalarField jacobian_field(const Field2D& u) {
    const auto& g = u.grid();
    ScalarField out{g, std::vector<double>(g.size(), 0.0)};
    const double c1 = 1.0 / (2.0 * g.hx()), c2 = 1.0 / (2.0 * g.hy());
    const cplx I(0.0, 1.0);
    parallel_for(static_cast<std::size_t>(g.ny), [&](std::size_t b, std::size_t e) {
        for (std::size_t jj = std::max<std::size_t>(b, 1); jj < std::min<std::size_t>(e, g.ny - 1); ++jj) {
            const int j = static_cast<int>(jj);
            for (int i = 1; i + 1 < g.nx; ++i) {
                const cplx d1 = (u(i + 1, j) - u(i - 1, j)) * c1;
                const cplx d2 = (u(i, j + 1) - u(i, j - 1)) * c2;
                out.values[g.index(i, j)] = (I * d1 * std::conj(d2)).real();
            }
        }
    });
    return out;
}

TwResidual tw_residual(const Field2D& u, double c) {
    const auto& g = u.grid();
    const Padded p(u);
    const double ix2 = 1.0 / (g.hx() * g.hx()), iy2 = 1.0 / (g.hy() * g.hy());
    const double c2 = c / (2.0 * g.hy());
    const cplx I(0.0, 1.0);
    TwResidual out{Field2D(g, cplx(0.0, 0.0)), 0.0};
    auto& r = out.field.values();
    const double area = g.cell_area();
    const double sum = row_reduce(static_cast<std::size_t>(g.ny), [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        double s = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            const cplx v = p(i, j);
            const cplx lap = (p(i + 1, j) + p(i - 1, j) - 2.0 * v) * ix2 + (p(i, j + 1) + p(i, j - 1) - 2.0 * v) * iy2;
            const cplx d2 = (p(i, j + 1) - p(i, j - 1)) * c2;
            const cplx res = -I * d2 - lap - (1.0 - norm2(v)) * v;
            r[g.index(i, j)] = res;
            s += norm2(res);
        }
        return s;
    });
    out.norm = std::sqrt(area * sum);
    return out;
}

double pohozaev_residual(const Field2D& u, double c) {
    const double lhs = 2.0 * energy(u).potential;  // 1/2 int (1 - |u|^2)^2
    const double rhs = c * momentum_p2(u).value;
    if (std::abs(lhs) < 1e-12 && std::abs(rhs) < 1e-12) return 0.0;
    return std::abs(lhs - rhs) / std::max(rhs, 1e-12);
}

Field2D symmetrize_even_x1(const Field2D& u) {
    const auto& g = u.grid();
    if (g.nx % 2 == 0) throw InputError("symmetrize_even_x1: nx must be odd");
    Field2D w(g, cplx(0.0, 0.0), u.far_field());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) w(i, j) = 0.5 * (u(i, j) + u(g.mirror_i(i), j));
    return w;
}

Field2D symmetrize_conj_x2(const Field2D& u) {
    const auto& g = u.grid();
    if (g.ny % 2 == 0) throw InputError("symmetrize_conj_x2: ny must be odd");
    Field2D w(g, cplx(0.0, 0.0), u.far_field());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) w(i, j) = 0.5 * (u(i, j) + std::conj(u(i, g.mirror_j(j))));
    return w;
}

double even_defect_x1(const Field2D& u) {
    const auto& g = u.grid();
    double m = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) m = std::max(m, std::abs(u(i, j) - u(g.mirror_i(i), j)));
    return m;
}

double conj_symmetry_defect_x2(const Field2D& u) {
    const auto& g = u.grid();
    if (g.ny % 2 == 0) throw InputError("conj_symmetry_defect_x2: ny must be odd");
    return row_max(static_cast<std::size_t>(g.ny), [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        double m = 0.0;
        for (int i = 0; i < g.nx; ++i) m = std::max(m, std::abs(u(i, g.mirror_j(j)) - std::conj(u(i, j))));
        return m;
    });
}

double max_modulus(const Field2D& u) {
    double m = 0.0;
    for (const auto& z : u.values()) m = std::max(m, std::abs(z));
    return m;
}

double max_gradient(const Field2D& u) {
    const auto& g = u.grid();
    const Padded p(u);
    const double c1 = 1.0 / (2.0 * g.hx()), c2 = 1.0 / (2.0 * g.hy());
    return row_max(static_cast<std::size_t>(g.ny), [&](std::size_t jj) {
        const int j = static_cast<int>(jj);
        double m = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            const cplx d1 = (p(i + 1, j) - p(i - 1, j)) * c1;
            const cplx d2 = (p(i, j + 1) - p(i, j - 1)) * c2;
            m = std::max(m, std::sqrt(norm2(d1) + norm2(d2)));
        }
        return m;
    });
}

std::vector<cplx> energy_gradient(const Field2D& u) {
    const auto& g = u.grid();
    const Padded p(u);
    const double ix2 = 1.0 / (g.hx() * g.hx()), iy2 = 1.0 / (g.hy() * g.hy());
    std::vector<cplx> out(g.size());
    parallel_for(static_cast<std::size_t>(g.ny), [&](std::size_t b, std::size_t e) {
        for (std::size_t jj = b; jj < e; ++jj) {
            const int j = static_cast<int>(jj);
            for (int i = 0; i < g.nx; ++i) {
                const cplx v = p(i, j);
                const cplx lap =
                    (p(i + 1, j) + p(i - 1, j) - 2.0 * v) * ix2 + (p(i, j + 1) + p(i, j - 1) - 2.0 * v) * iy2;
                out[g.index(i, j)] = -lap - (1.0 - norm2(v)) * v;
            }
        }
    });
    return out;
}

std::vector<cplx> momentum_gradient(const Field2D& u) {
    const auto& g = u.grid();
    const Padded p(u);
    const double c2 = 1.0 / (2.0 * g.hy());
    const cplx I(0.0, 1.0);
    std::vector<cplx> out(g.size());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) out[g.index(i, j)] = I * (p(i, j + 1) - p(i, j - 1)) * c2;
    // Summation by parts leaves a boundary term when the ghost rows differ from 1.
    for (int i = 0; i < g.nx; ++i) {
        out[g.index(i, 0)] += 0.5 * I * (p(i, -1) - 1.0) * c2;
        out[g.index(i, g.ny - 1)] -= 0.5 * I * (p(i, g.ny) - 1.0) * c2;
    }
    return out;
}

double inner(const GridSpec& g, const std::vector<cplx>& a, const std::vector<cplx>& b) {
    const auto nx = static_cast<std::size_t>(g.nx);
    return g.cell_area() * row_reduce(static_cast<std::size_t>(g.ny), [&](std::size_t j) {
               double s = 0.0;
               const std::size_t o = j * nx;
               for (std::size_t i = 0; i < nx; ++i)
                   s += a[o + i].real() * b[o + i].real() + a[o + i].imag() * b[o + i].imag();
               return s;
           });
}

double l2_norm(const GridSpec& g, const std::vector<cplx>& a) { return std::sqrt(inner(g, a, a)); }

std::vector<DecayRow> decay_profile(const Field2D& u, double inner_radius, int annuli) {
    const auto& g = u.grid();
    const double outer = 0.9 * g.half_width;
    if (!(inner_radius > 0.0) || inner_radius >= outer)
        throw InputError("decay_profile: inner radius must lie in (0, 0.9 L)");
    if (annuli < 1) throw InputError("decay_profile: need at least one annulus");
    std::vector<double> edges(static_cast<std::size_t>(annuli) + 1);
    for (int k = 0; k <= annuli; ++k) edges[k] = inner_radius * std::pow(outer / inner_radius, double(k) / annuli);
    std::vector<DecayRow> rows(static_cast<std::size_t>(annuli));
    for (int k = 0; k < annuli; ++k) rows[k].radius = std::sqrt(edges[k] * edges[k + 1]);

    const Padded p(u);
    const double c1 = 1.0 / (2.0 * g.hx()), c2 = 1.0 / (2.0 * g.hy());
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double r = std::hypot(g.x(i), g.y(j));
            if (r < edges.front() || r >= edges.back()) continue;
            const auto it = std::upper_bound(edges.begin(), edges.end(), r);
            const auto k = static_cast<std::size_t>(std::distance(edges.begin(), it) - 1);
            const cplx v = p(i, j);
            const cplx d1 = (p(i + 1, j) - p(i - 1, j)) * c1;
            const cplx d2 = (p(i, j + 1) - p(i, j - 1)) * c2;
            const double w = 1.0 + r;
            rows[k].deviation = std::max(rows[k].deviation, w * std::abs(v - 1.0));
            rows[k].gradient = std::max(rows[k].gradient, w * w * std::sqrt(norm2(d1) + norm2(d2)));
            rows[k].modulus = std::max(rows[k].modulus, w * w * std::abs(std::abs(v) - 1.0));
        }
    }
    return rows;
}

bool no_growth(const std::vector<double>& column) {
    if (column.empty()) return true;
    std::vector<double> sorted = column;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    return column.back() <= 2.0 * median;
}

}  // namespace gpvw
