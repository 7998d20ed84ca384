#include "gpvw/branch.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "gpvw/ansatz.hpp"
#include "gpvw/errors.hpp"
#include "gpvw/snapshot.hpp"
#include "gpvw/vortex_profile.hpp"

namespace gpvw {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr const char* csv_header = "c,p,energy,kinetic,potential,d,pohozaev_rel,residual";

void require_points(const BranchTable& t, std::size_t n, const char* what) {
    if (t.size() < n) {
        std::ostringstream msg;
        msg << what << ": needs at least " << n << " branch points, got " << t.size();
        throw InputError(msg.str());
    }
}

std::string format_c(double c) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", c);
    return buf;
}

template <class F>
std::vector<double> central(const BranchTable& t, F f) {
    std::vector<double> out;
    for (std::size_t k = 1; k + 1 < t.size(); ++k) {
        const BranchPoint& a = t.points[k - 1];
        const BranchPoint& b = t.points[k + 1];
        out.push_back(f(t.points[k], b.c - a.c, a, b));
    }
    return out;
}

/// Warm start at speed c: the correction Q - ansatz(d) of the last solution is
/// carried over to the ansatz at the extrapolated separation (d is extrapolated
/// linearly in 1/c, or by c d = const from a single point).
Field2D branch_predictor(const std::vector<TravellingWave>& done, double c, const VortexProfile& profile) {
    const TravellingWave& last = done.back();
    double d_new = last.d * last.c / c;
    if (done.size() >= 2) {
        const TravellingWave& prev = done[done.size() - 2];
        const double slope = (last.d - prev.d) / (1.0 / last.c - 1.0 / prev.c);
        d_new = last.d + slope * (1.0 / c - 1.0 / last.c);
    }
    const GridSpec& g = last.field.grid();
    Field2D u = two_vortex(g, {d_new, &profile});
    const Field2D old = two_vortex(g, {last.d, &profile});
    for (std::size_t k = 0; k < g.size(); ++k) u.values()[k] += last.field.values()[k] - old.values()[k];
    return u;
}

}  // namespace

BranchPoint branch_point(const TravellingWave& tw) {
    return {tw.c, tw.p, tw.energy.total, tw.energy.kinetic, tw.energy.potential, tw.d, tw.pohozaev, tw.residual};
}

std::vector<double> branch_speeds(double c_start, double c_end, int steps) {
    if (steps < 1) throw InputError("branch: steps must be >= 1");
    if (steps == 1) return {c_end};
    std::vector<double> cs(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) cs[k] = c_start + k * (c_end - c_start) / (steps - 1);
    cs.back() = c_end;
    return cs;
}

BranchTable continue_branch(double c_start, double c_end, int steps, const GridSpec& grid, const SolverConfig& cfg,
                            const BranchOptions& options) {
    grid.validate();
    if (!(c_end > 0.02 && c_end < 0.5)) throw InputError("branch: c_end must lie in (0.02, 0.5)");
    if (steps > 1 && !(c_start > 0.02 && c_start < c_end))
        throw InputError("branch: need 0.02 < c_start < c_end");
    const std::vector<double> cs = branch_speeds(c_start, c_end, steps);
    if (options.snapshot_dir) std::filesystem::create_directories(*options.snapshot_dir);

    const VortexProfile own = options.profile ? VortexProfile{} : solve_profile(1, 30.0, 6000, 1e-10);
    const VortexProfile& profile = options.profile ? *options.profile : own;
    BranchTable table;
    table.grid = grid;
    std::vector<TravellingWave> done;
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) {
        const double c = *it;
        const Field2D start = options.independent || done.empty() ? two_vortex(grid, {1.0 / c, &profile})
                                                                  : branch_predictor(done, c, profile);
        TravellingWave tw;
        try {
            tw = solve_fixed_c(start, c, cfg);
        } catch (const SolveError& e) {
            throw SolveError("branch point c = " + format_c(c) + ": " + e.what(), e.last_residual(), e.iterate(), c);
        } catch (const TopologyError& e) {
            throw TopologyError("branch point c = " + format_c(c) + ": " + e.what());
        }
        if (options.snapshot_dir)
            write_gpfield(*options.snapshot_dir / ("c_" + format_c(c) + ".gpfield"), tw.field, {tw.c, tw.p});
        if (options.on_point) options.on_point(tw);
        table.points.push_back(branch_point(tw));
        done.push_back(std::move(tw));
        if (done.size() > 2) done.erase(done.begin());
    }
    std::reverse(table.points.begin(), table.points.end());
    return table;
}

std::vector<double> hamilton_residuals(const BranchTable& t) {
    require_points(t, 3, "hamilton_residuals");
    return central(t, [](const BranchPoint& m, double dc, const BranchPoint& a, const BranchPoint& b) {
        const double dE = (b.energy - a.energy) / dc;
        const double dP = (b.p - a.p) / dc;
        return std::abs(dE - m.c * dP) / std::abs(dE);
    });
}

std::vector<double> dPdc_check(const BranchTable& t) {
    require_points(t, 3, "dPdc_check");
    return central(t, [](const BranchPoint& m, double dc, const BranchPoint& a, const BranchPoint& b) {
        return m.c * m.c * std::abs((b.p - a.p) / dc) / two_pi;
    });
}

SlopeFit emin_slope_vs_logp(const BranchTable& t) {
    require_points(t, 4, "emin_slope_vs_logp");
    std::vector<BranchPoint> pts = t.points;
    std::sort(pts.begin(), pts.end(), [](const BranchPoint& a, const BranchPoint& b) { return a.p < b.p; });
    if (!(pts.front().p > 0.0) || pts.back().p < 1.5 * pts.front().p)
        throw InputError("emin_slope_vs_logp: momenta must be positive and span a factor >= 1.5");
    const double n = static_cast<double>(pts.size());
    double sx = 0, sy = 0;
    for (const auto& q : pts) {
        sx += std::log(q.p);
        sy += q.energy;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (const auto& q : pts) {
        const double dx = std::log(q.p) - mx;
        sxx += dx * dx;
        sxy += dx * (q.energy - my);
    }
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0;
    for (const auto& q : pts) {
        const double r = q.energy - (fit.slope * std::log(q.p) + fit.intercept);
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / n);
    fit.concave = true;
    for (std::size_t k = 1; k + 1 < pts.size(); ++k) {
        const double left = (pts[k].energy - pts[k - 1].energy) / (pts[k].p - pts[k - 1].p);
        const double right = (pts[k + 1].energy - pts[k].energy) / (pts[k + 1].p - pts[k].p);
        const double second = 2.0 * (right - left) / (pts[k + 1].p - pts[k - 1].p);
        fit.second_differences.push_back(second);
        if (!(second < 0.0)) fit.concave = false;
    }
    return fit;
}

ActionProfile action_along_branch(const BranchTable& t, double c_star) {
    require_points(t, 3, "action_along_branch");
    if (!(c_star > t.points.front().c && c_star < t.points.back().c))
        throw InputError("action_along_branch: c_star must lie strictly inside the branch range");
    ActionProfile out;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const BranchPoint& q = t.points[k];
        out.values.push_back(q.energy - c_star * q.p);
        if (out.values[k] > out.values[out.argmax]) out.argmax = k;
        if (std::abs(q.c - c_star) < std::abs(t.points[out.nearest].c - c_star)) out.nearest = k;
    }
    return out;
}

KineticCheck kinetic_monotonicity(const BranchTable& t) {
    require_points(t, 3, "kinetic_monotonicity");
    KineticCheck out;
    out.ratios = central(t, [](const BranchPoint& m, double dc, const BranchPoint& a, const BranchPoint& b) {
        return m.c * ((b.kinetic - a.kinetic) / dc) / (-two_pi);
    });
    out.strictly_decreasing = true;
    for (std::size_t k = 1; k < t.size(); ++k)
        if (!(t.points[k].kinetic < t.points[k - 1].kinetic)) out.strictly_decreasing = false;
    return out;
}

bool monotone_in_c(const BranchTable& t) {
    for (std::size_t k = 1; k < t.size(); ++k) {
        if (!(t.points[k].c > t.points[k - 1].c)) return false;
        if (!(t.points[k].p < t.points[k - 1].p) || !(t.points[k].energy < t.points[k - 1].energy)) return false;
    }
    return true;
}

void write_branch_csv(std::ostream& out, const BranchTable& t) {
    out << csv_header << '\n';
    char buf[512];
    for (const auto& q : t.points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", q.c, q.p, q.energy,
                      q.kinetic, q.potential, q.d, q.pohozaev_rel, q.residual);
        out << buf;
    }
    if (!out) throw Error("write_branch_csv: stream write failed");
}

void write_branch_csv(const std::filesystem::path& path, const BranchTable& t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("write_branch_csv: cannot open " + path.string());
    write_branch_csv(out, t);
}

BranchTable read_branch_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != csv_header) throw FormatError("branch csv: unexpected header");
    BranchTable t;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        double v[8];
        std::size_t pos = 0;
        for (int k = 0; k < 8; ++k) {
            const std::size_t end = line.find(',', pos);
            if ((k < 7) != (end != std::string::npos)) throw FormatError("branch csv: wrong column count in row " + std::to_string(row));
            const std::string cell = line.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
            std::size_t used = 0;
            try {
                v[k] = std::stod(cell, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != cell.size()) throw FormatError("branch csv: bad number in row " + std::to_string(row));
            pos = end + 1;
        }
        t.points.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]});
    }
    return t;
}

BranchTable read_branch_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("branch csv: cannot open " + path.string());
    return read_branch_csv(in);
}

}  // namespace gpvw
