#include "gpvw/vortex_diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gpvw/errors.hpp"
#include "gpvw/field_ops.hpp"

namespace gpvw {

namespace {

constexpr double pi = std::numbers::pi;

Point physical(const VortexSet& vs, const Vortex& v) { return {v.position.x * vs.scale, v.position.y * vs.scale}; }

void require_disjoint(const VortexSet& vs, double radius, const char* what) {
    for (std::size_t a = 0; a < vs.size(); ++a)
        for (std::size_t b = a + 1; b < vs.size(); ++b) {
            const Point& p = vs.entries[a].position;
            const Point& q = vs.entries[b].position;
            if (std::hypot(p.x - q.x, p.y - q.y) < 2.0 * radius)
                throw InputError(std::string(what) + ": vortex disks overlap");
        }
}

void require_inside(const GridSpec& g, const VortexSet& vs, double radius, const char* what) {
    for (const auto& v : vs.entries) {
        const Point p = physical(vs, v);
        const double r = radius * vs.scale;
        if (std::abs(p.x) + r > g.half_width || std::abs(p.y) + r > g.half_width)
            throw InputError(std::string(what) + ": vortex disk leaves the grid");
    }
}

}  // namespace

VortexSet rescale(const VortexSet& phys, double p) {
    if (!(p > 0.0)) throw InputError("rescale: momentum must be positive");
    VortexSet out;
    out.frame = Frame::rescaled;
    out.scale = p * phys.scale;
    for (const auto& v : phys.entries) {
        Vortex w = v;
        w.position = {v.position.x / p, v.position.y / p};
        out.entries.push_back(w);
    }
    std::stable_sort(out.entries.begin(), out.entries.end(),
                     [](const Vortex& a, const Vortex& b) { return a.degree > b.degree; });
    return out;
}

VortexSet rescaled_vortices(const TravellingWave& tw) {
    require_two_vortices(tw.zeros);
    return rescale(tw.zeros, tw.p);
}

std::vector<double> jacobian_concentration_defect(const ScalarField& jac, const VortexSet& vs, double radius,
                                                  const std::vector<double>& scales) {
    const GridSpec& g = jac.grid;
    if (!(radius > 0.0)) throw InputError("jacobian_concentration_defect: radius must be positive");
    require_disjoint(vs, radius, "jacobian_concentration_defect");
    require_inside(g, vs, radius, "jacobian_concentration_defect");
    const double area = g.cell_area();
    std::vector<double> out;
    for (const auto& v : vs.entries) {
        const Point y = v.position;
        double worst = 0.0;
        int tested = 0;
        for (double s : scales) {
            if (!(s > 0.0)) throw InputError("jacobian_concentration_defect: scales must be positive");
            for (int a = -1; a <= 1; ++a)
                for (int b = -1; b <= 1; ++b) {
                    const Point z{y.x + 0.5 * a * s, y.y + 0.5 * b * s};
                    if (std::hypot(z.x - y.x, z.y - y.y) + s > radius * (1.0 + 1e-12)) continue;
                    ++tested;
                    // Pairing over the nodes inside the support, lengths in frame units.
                    const double R = s * vs.scale;
                    const Point zp{z.x * vs.scale, z.y * vs.scale};
                    const int i0 = std::max(0, static_cast<int>(std::floor((zp.x - R + g.half_width) / g.hx())));
                    const int i1 = std::min(g.nx - 1, static_cast<int>(std::ceil((zp.x + R + g.half_width) / g.hx())));
                    const int j0 = std::max(0, static_cast<int>(std::floor((zp.y - R + g.half_width) / g.hy())));
                    const int j1 = std::min(g.ny - 1, static_cast<int>(std::ceil((zp.y + R + g.half_width) / g.hy())));
                    double pairing = 0.0;
                    for (int j = j0; j <= j1; ++j)
                        for (int i = i0; i <= i1; ++i) {
                            const double dist = std::hypot(g.x(i) - zp.x, g.y(j) - zp.y) / vs.scale;
                            if (dist < s) pairing += jac(i, j) * (s - dist);
                        }
                    pairing *= area;
                    const double tent_at_y = std::max(0.0, s - std::hypot(y.x - z.x, y.y - z.y));
                    worst = std::max(worst, std::abs(pairing - pi * v.degree * tent_at_y));
                }
        }
        if (tested == 0) throw InputError("jacobian_concentration_defect: no test function fits inside the disk");
        out.push_back(worst);
    }
    return out;
}

std::vector<double> jacobian_concentration_defect(const Field2D& u, const VortexSet& vs, double radius,
                                                  const std::vector<double>& scales) {
    return jacobian_concentration_defect(jacobian_field(u), vs, radius, scales);
}

double clearing_out_audit(const Field2D& u, const VortexSet& vs, double exclusion_radius) {
    const GridSpec& g = u.grid();
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            bool excluded = false;
            for (const auto& v : vs.entries) {
                const Point p = physical(vs, v);
                if (std::hypot(g.x(i) - p.x, g.y(j) - p.y) < exclusion_radius) excluded = true;
            }
            if (!excluded) m = std::min(m, std::abs(u(i, j)));
        }
    return m;
}

EnergyPartition vortex_energy_partition(const Field2D& u, const VortexSet& vs, double radius) {
    if (!(radius > 0.0)) throw InputError("vortex_energy_partition: radius must be positive");
    require_disjoint(vs, radius, "vortex_energy_partition");
    const GridSpec& g = u.grid();
    const ScalarField dens = energy_density(u);
    const double area = g.cell_area();
    EnergyPartition out;
    out.disk_energies.assign(vs.size(), 0.0);
    const double R = radius * vs.scale;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double e = dens(i, j);
            out.total += e;
            bool inside = false;
            for (std::size_t k = 0; k < vs.size(); ++k) {
                const Point p = physical(vs, vs.entries[k]);
                if (std::hypot(g.x(i) - p.x, g.y(j) - p.y) < R) {
                    out.disk_energies[k] += e;
                    inside = true;
                    break;
                }
            }
            if (!inside) {
                out.exterior_energy += e;
                const double w = 1.0 - std::norm(u(i, j));
                out.exterior_potential += w * w * area;
            }
        }
    return out;
}

std::vector<DecayNearVortexRow> modulus_decay_near_vortex(const Field2D& u, const VortexSet& vs, double r_in,
                                                          double r_out, int annuli) {
    const GridSpec& g = u.grid();
    if (!(r_in > 0.0) || r_out <= r_in) throw RangeError("modulus_decay_near_vortex: need 0 < r_in < r_out");
    const double h = std::max(g.hx(), g.hy());
    const int n = std::max(1, std::min(annuli, static_cast<int>(std::floor((r_out - r_in) / h))));
    std::vector<double> edges(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) edges[k] = r_in * std::pow(r_out / r_in, double(k) / n);
    std::vector<DecayNearVortexRow> rows(static_cast<std::size_t>(n));
    std::vector<int> counts(static_cast<std::size_t>(n), 0);
    for (int k = 0; k < n; ++k) rows[k].radius = std::sqrt(edges[k] * edges[k + 1]);
    const Padded p(u);
    const double c1 = 1.0 / (2.0 * g.hx()), c2 = 1.0 / (2.0 * g.hy());
    for (const auto& v : vs.entries) {
        const Point z = physical(vs, v);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double r = std::hypot(g.x(i) - z.x, g.y(j) - z.y);
                if (r < edges.front() || r >= edges.back()) continue;
                const auto k = static_cast<std::size_t>(
                    std::distance(edges.begin(), std::upper_bound(edges.begin(), edges.end(), r)) - 1);
                const cplx d1 = (p(i + 1, j) - p(i - 1, j)) * c1;
                const cplx d2 = (p(i, j + 1) - p(i, j - 1)) * c2;
                rows[k].modulus = std::max(rows[k].modulus, std::abs(std::abs(u(i, j)) - 1.0) * r * r);
                rows[k].gradient = std::max(rows[k].gradient, std::sqrt(std::norm(d1) + std::norm(d2)) * r);
                ++counts[k];
            }
    }
    std::vector<DecayNearVortexRow> out;
    for (int k = 0; k < n; ++k)
        if (counts[k] > 0) out.push_back(rows[k]);
    return out;
}

std::vector<DecayNearVortexRow> modulus_decay_near_vortex(const TravellingWave& tw, int annuli) {
    require_two_vortices(tw.zeros);
    if (tw.d < 10.0) throw RangeError("modulus_decay_near_vortex: needs vortex half-separation d >= 10");
    return modulus_decay_near_vortex(tw.field, tw.zeros, 4.0, 0.5 * tw.d, annuli);
}

KirchhoffAction kirchhoff_action(Point yp, Point ym) {
    const double dx = yp.x - ym.x, dy = yp.y - ym.y;
    const double r2 = dx * dx + dy * dy;
    if (!(r2 > 0.0)) throw InputError("kirchhoff_action: the two points coincide");
    KirchhoffAction k;
    k.value = 2.0 * pi * (std::log(r2) - 2.0 * pi * dx);
    const double gx = 2.0 * pi * (2.0 * dx / r2 - 2.0 * pi);
    const double gy = 2.0 * pi * (2.0 * dy / r2);
    k.gradient = {gx, gy, -gx, -gy};
    return k;
}

SpeedBoundAudit speed_bound_audit(double c, double energy, double p, double max_mod) {
    SpeedBoundAudit a;
    if (p > 0.0) {
        a.speed_slack = 2.0 * energy / p - c;
        a.speed_ok = a.speed_slack >= 0.0;
    } else {
        a.speed_slack = -c;
        a.speed_ok = c <= 0.0;
    }
    a.linf_slack = 1.0 + c * c / 4.0 + 1e-3 - max_mod;
    a.linf_ok = a.linf_slack >= 0.0;
    return a;
}

SpeedBoundAudit speed_bound_audit(const TravellingWave& tw) {
    return speed_bound_audit(tw.c, tw.energy.total, tw.p, tw.max_modulus);
}

ConcentrationReport concentration_report(const TravellingWave& tw, const DiagnosticsOptions& opt) {
    ConcentrationReport r;
    r.rescaled = rescaled_vortices(tw);
    r.pc = tw.p * tw.c;
    const Point xp = r.rescaled.entries[0].position, xm = r.rescaled.entries[1].position;
    r.target_offset = std::hypot(xp.x - 1.0 / (2.0 * pi), xp.y);
    r.momentum_identity = pi * (xp.x - xm.x);
    r.jacobian_defects = jacobian_concentration_defect(tw.field, r.rescaled, opt.jacobian_radius, opt.jacobian_scales);
    r.clearing_out_min = clearing_out_audit(tw.field, tw.zeros, opt.exclusion_radius);
    r.partition = vortex_energy_partition(tw.field, r.rescaled, opt.partition_radius);
    for (double e : r.partition.disk_energies) r.disk_lambda.push_back(pi * std::log(tw.p) - e);
    r.speed = speed_bound_audit(tw);
    return r;
}

}  // namespace gpvw
