#include "gpvw/tw_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "gpvw/ansatz.hpp"
#include "gpvw/krylov.hpp"
#include "gpvw/parallel.hpp"
#include "gpvw/preconditioner.hpp"
#include "gpvw/vortex_profile.hpp"

namespace gpvw {

namespace {

constexpr double pi = std::numbers::pi;

double norm2(const cplx& z) { return z.real() * z.real() + z.imag() * z.imag(); }

/// J v = -Lap v - i c d_2 v - (1 - |u|^2) v + 2 Re(conj(u) v) u with zero ghosts.
void apply_linearized(const Field2D& u, double c, const std::vector<cplx>& v, std::vector<cplx>& out) {
    const auto& g = u.grid();
    const int nx = g.nx, ny = g.ny;
    const double ix2 = 1.0 / (g.hx() * g.hx()), iy2 = 1.0 / (g.hy() * g.hy());
    const double c2 = c / (2.0 * g.hy());
    const cplx I(0.0, 1.0);
    out.resize(v.size());
    const auto& uv = u.values();
    parallel_for(static_cast<std::size_t>(ny), [&](std::size_t b, std::size_t e) {
        for (std::size_t jj = b; jj < e; ++jj) {
            const int j = static_cast<int>(jj);
            const std::size_t row = jj * static_cast<std::size_t>(nx);
            for (int i = 0; i < nx; ++i) {
                const std::size_t k = row + static_cast<std::size_t>(i);
                const cplx w = v[k];
                const cplx west = i > 0 ? v[k - 1] : cplx(0.0);
                const cplx east = i + 1 < nx ? v[k + 1] : cplx(0.0);
                const cplx south = j > 0 ? v[k - nx] : cplx(0.0);
                const cplx north = j + 1 < ny ? v[k + nx] : cplx(0.0);
                const cplx lap = (east + west - 2.0 * w) * ix2 + (north + south - 2.0 * w) * iy2;
                const cplx z = uv[k];
                const double re = z.real() * w.real() + z.imag() * w.imag();
                out[k] = -lap - I * c2 * (north - south) - (1.0 - norm2(z)) * w + 2.0 * re * z;
            }
        }
    });
}

void update_far_field(Field2D& u, double c, FarFieldMode mode) {
    if (mode == FarFieldMode::unit) {
        u.set_far_field({});
        return;
    }
    const double p = momentum_p2(u).value;
    u.set_far_field({std::max(p, 0.0) / pi, c});
}

/// dF/dA: sensitivity of the residual to the far-field dipole through the ghost ring.
std::vector<cplx> dipole_sensitivity(const Field2D& u, double c) {
    const auto& g = u.grid();
    const FarField far = u.far_field();
    const double delta = 1e-6 * std::max(1.0, far.dipole);
    const FarField lo{far.dipole - delta, far.speed}, hi{far.dipole + delta, far.speed};
    auto dghost = [&](int i, int j) {
        return (hi.value(g.x(i), g.y(j)) - lo.value(g.x(i), g.y(j))) / (2.0 * delta);
    };
    const double ix2 = 1.0 / (g.hx() * g.hx()), iy2 = 1.0 / (g.hy() * g.hy());
    const double c2 = c / (2.0 * g.hy());
    const cplx I(0.0, 1.0);
    std::vector<cplx> b(g.size(), cplx(0.0, 0.0));
    for (int i = 0; i < g.nx; ++i) {
        b[g.index(i, 0)] += -dghost(i, -1) * iy2 + I * c2 * dghost(i, -1);
        b[g.index(i, g.ny - 1)] += -dghost(i, g.ny) * iy2 - I * c2 * dghost(i, g.ny);
    }
    for (int j = 0; j < g.ny; ++j) {
        b[g.index(0, j)] += -dghost(-1, j) * ix2;
        b[g.index(g.nx - 1, j)] += -dghost(g.nx, j) * ix2;
    }
    return b;
}

/// Symmetry classes enforced on the iterates.
struct Projection {
    bool even_x1 = false;
    bool conj_x2 = false;

    Field2D apply(Field2D w) const {
        if (even_x1) w = symmetrize_even_x1(w);
        if (conj_x2) w = symmetrize_conj_x2(w);
        return w;
    }
};

/// The x1-even projection follows the config. The x2-conjugation projection is added
/// only when the start already has that symmetry: the operator commutes with it, so
/// the projection removes nothing but roundoff that the nearly neutral x2-translation
/// mode would otherwise amplify.
Projection projection_for(const Field2D& start, const SolverConfig& cfg) {
    Projection pr;
    pr.even_x1 = cfg.symmetry_projection;
    pr.conj_x2 = cfg.symmetry_projection && conj_symmetry_defect_x2(start) <= 1e-12;
    return pr;
}

Field2D axpy_field(const Field2D& u, double a, const std::vector<cplx>& x, const Projection& pr) {
    Field2D w = u;
    auto& v = w.values();
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += a * x[k];
    return pr.apply(std::move(w));
}

void validate_speed(double c) {
    if (!(c > 0.02 && c < std::sqrt(2.0)) || !std::isfinite(c)) {
        std::ostringstream msg;
        msg << "speed c = " << c << " outside the supported range (0.02, sqrt(2))";
        throw InputError(msg.str());
    }
}

const VortexProfile& default_profile() {
    static const VortexProfile profile = solve_profile(1, 30.0, 6000, 1e-10);
    return profile;
}

}  // namespace

double SolverConfig::resolved_residual_tol(const GridSpec& g) const {
    return residual_tol > 0.0 ? residual_tol : 1e-8 * std::sqrt(g.area());
}

double SolverConfig::resolved_flow_tol(const GridSpec& g) const {
    return flow_tol > 0.0 ? flow_tol : 2e-5 * std::sqrt(g.area());
}

TravellingWave describe_wave(const Field2D& u, double c) {
    TravellingWave tw;
    tw.field = u;
    tw.c = c;
    tw.energy = energy(u);
    tw.p = momentum_p2(u).value;
    tw.residual = tw_residual(u, c).norm;
    tw.pohozaev = c > 0.0 ? pohozaev_residual(u, c) : 0.0;
    tw.zeros = find_zeros(u);
    for (const auto& z : tw.zeros.entries)
        if (z.degree == 1 && z.position.x > 0.0) tw.d = std::max(tw.d, z.position.x);
    tw.max_modulus = max_modulus(u);
    tw.max_gradient = max_gradient(u);
    return tw;
}

void require_two_vortices(const VortexSet& zeros) {
    const bool ok = zeros.size() == 2 &&
                    std::any_of(zeros.entries.begin(), zeros.entries.end(),
                                [](const Vortex& v) { return v.degree == 1 && v.position.x > 0.0; }) &&
                    std::any_of(zeros.entries.begin(), zeros.entries.end(),
                                [](const Vortex& v) { return v.degree == -1 && v.position.x < 0.0; });
    if (!ok) {
        std::ostringstream msg;
        msg << "expected one +1 zero at x1 > 0 and one -1 zero at x1 < 0, found " << zeros.size() << " zeros";
        throw TopologyError(msg.str());
    }
}

TravellingWave solve_fixed_c(const Field2D& initial, double c, const SolverConfig& cfg) {
    validate_speed(c);
    const GridSpec& g = initial.grid();
    g.validate();
    if (!initial.all_finite()) throw InputError("solve_fixed_c: initial field has non-finite values");

    const Projection pr = projection_for(initial, cfg);
    Field2D u = pr.apply(initial);
    const double tol = cfg.resolved_residual_tol(g);
    LaplaceShiftPreconditioner pre(g);
    const LinearMap M = [&](const std::vector<cplx>& in, std::vector<cplx>& out) { pre.apply(in, out); };
    const GmresOptions gopt{cfg.krylov_tol, cfg.krylov_restart, cfg.krylov_max_iterations};

    std::vector<double> history;
    bool damped = false;
    for (int it = 0;; ++it) {
        update_far_field(u, c, cfg.far_field);
        TwResidual res = tw_residual(u, c);
        history.push_back(res.norm);
        if (res.norm <= tol) {
            TravellingWave tw = describe_wave(u, c);
            tw.newton_iterations = it;
            require_two_vortices(tw.zeros);
            return tw;
        }
        if (!std::isfinite(res.norm)) throw SolveError("Newton iterate became non-finite", res.norm, u, c);
        if (it >= cfg.max_newton_iterations)
            throw SolveError("Newton iteration limit reached", res.norm, u, c);
        const int w = cfg.stagnation_window;
        if (w > 0 && it >= w && res.norm > 0.99 * history[static_cast<std::size_t>(it - w)])
            throw SolveError("Newton iteration stagnated", res.norm, u, c);

        pre.set_phase(u);
        std::vector<cplx> rhs(res.field.values().size());
        for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] = -res.field.values()[k];
        // With the matched far field the ghost ring depends on u through A = P_2(u) / pi,
        // which adds the rank-one term dF/dA <grad P_2, v> / pi.
        const bool matched = cfg.far_field == FarFieldMode::matched;
        // Levenberg-Marquardt style shift sigma = mu ||F||, switched on once a step had
        // to be cut: it damps the nearly neutral x2-translation and phase directions
        // (pinned only by the far field) and vanishes as the iteration converges.
        const double sigma = damped ? cfg.levenberg_shift * res.norm : 0.0;
        const std::vector<cplx> bA = matched ? dipole_sensitivity(u, c) : std::vector<cplx>{};
        const std::vector<cplx> gP = matched ? momentum_gradient(u) : std::vector<cplx>{};
        const LinearMap A = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
            apply_linearized(u, c, in, out);
            if (sigma > 0.0)
                for (std::size_t k = 0; k < out.size(); ++k) out[k] += sigma * in[k];
            if (matched) {
                const double dA = inner(g, gP, in) / pi;
                for (std::size_t k = 0; k < out.size(); ++k) out[k] += dA * bA[k];
            }
        };
        const GmresResult step = gmres(A, M, rhs, gopt);

        // Backtracking on the residual norm.
        double s = 1.0;
        Field2D trial = axpy_field(u, s, step.solution, pr);
        update_far_field(trial, c, cfg.far_field);
        while (s > 1e-3) {
            if (tw_residual(trial, c).norm < res.norm * (1.0 - 1e-4 * s)) break;
            s *= 0.5;
            trial = axpy_field(u, s, step.solution, pr);
            update_far_field(trial, c, cfg.far_field);
        }
        if (cfg.on_newton_iteration) cfg.on_newton_iteration(it, res.norm, step.iterations, s);
        if (s < 0.5 && !damped && cfg.levenberg_shift > 0.0) {
            // Poor undamped step: discard it and redo the iteration with the shift on.
            damped = true;
            history.pop_back();
            continue;
        }
        u = std::move(trial);
    }
}

namespace {

/// Moves u along dir until P_2 = p (secant iteration); returns the final relative mismatch.
double correct_momentum(Field2D& u, const std::vector<cplx>& dir, double p, const Projection& pr) {
    const GridSpec& g = u.grid();
    const double slope = inner(g, momentum_gradient(u), dir);
    double f0 = momentum_p2(u).value - p;
    if (slope == 0.0) return std::abs(f0) / p;
    double t0 = 0.0, t1 = -f0 / slope;
    Field2D best = u;
    double best_f = f0;
    for (int k = 0; k < 8 && std::abs(best_f) > 1e-12 * p; ++k) {
        Field2D trial = axpy_field(u, t1, dir, pr);
        const double f1 = momentum_p2(trial).value - p;
        if (std::abs(f1) < std::abs(best_f)) {
            best = trial;
            best_f = f1;
        }
        if (f1 == f0) break;
        const double t2 = t1 - f1 * (t1 - t0) / (f1 - f0);
        t0 = t1;
        f0 = f1;
        t1 = t2;
    }
    u = std::move(best);
    return std::abs(best_f) / p;
}

}  // namespace

TravellingWave minimize_fixed_p(double p, const GridSpec& grid, const SolverConfig& cfg) {
    if (!(p > 0.0) || !std::isfinite(p)) throw InputError("minimize_fixed_p: momentum must be positive");
    const AnsatzSpec spec{p / (2.0 * pi), &default_profile()};
    return minimize_fixed_p(p, two_vortex(grid, spec), cfg);
}

TravellingWave minimize_fixed_p(double p, const Field2D& initial, const SolverConfig& cfg) {
    if (!(p > 0.0) || !std::isfinite(p)) throw InputError("minimize_fixed_p: momentum must be positive");
    const GridSpec& g = initial.grid();
    g.validate();
    const Projection sym = projection_for(initial, cfg);
    Field2D u = sym.apply(initial);
    double c = 2.0 * pi / p;
    validate_speed(c);
    auto set_far = [&](double speed) {
        if (cfg.far_field == FarFieldMode::matched) u.set_far_field({p / pi, speed});
        else u.set_far_field({});
    };
    set_far(c);

    LaplaceShiftPreconditioner pre(g);
    pre.set_phase(u);
    {
        std::vector<cplx> zP;
        pre.apply(momentum_gradient(u), zP);
        if (correct_momentum(u, zP, p, sym) > cfg.momentum_drift_limit)
            throw ConstraintError("minimize_fixed_p: cannot reach the requested momentum from the initial field");
    }

    const double flow_tol = cfg.resolved_flow_tol(g);
    double e = energy(u).total;
    double tau = cfg.flow_step;
    const double tau_max = 8.0 * cfg.flow_step;
    int steps = 0;
    double rnorm = 0.0;
    std::vector<cplx> zE, zP, dir(g.size()), rvec(g.size());
    for (;; ++steps) {
        const std::vector<cplx> gE = energy_gradient(u);
        const std::vector<cplx> gP = momentum_gradient(u);
        pre.set_phase(u);
        pre.apply(gE, zE);
        pre.apply(gP, zP);
        c = real_dot(gE, zP) / real_dot(gP, zP);
        for (std::size_t k = 0; k < dir.size(); ++k) {
            dir[k] = zE[k] - c * zP[k];
            rvec[k] = gE[k] - c * gP[k];
        }
        rnorm = l2_norm(g, rvec);
        if (rnorm <= flow_tol) break;
        if (steps >= cfg.flow_max_steps)
            throw ConvergenceError("minimize_fixed_p: gradient flow did not reach its tolerance", rnorm);

        for (;;) {
            Field2D trial = axpy_field(u, -tau, dir, sym);
            const double et = energy(trial).total;
            if (et <= e + 1e-10) {
                u = std::move(trial);
                e = et;
                tau = std::min(1.2 * tau, tau_max);
                break;
            }
            tau *= 0.5;
            if (tau < 1e-10 * cfg.flow_step)
                throw ConvergenceError("minimize_fixed_p: no descent step found", rnorm);
        }

        if (cfg.momentum_correction_interval > 0 && (steps + 1) % cfg.momentum_correction_interval == 0) {
            const double drift = std::abs(momentum_p2(u).value - p) / p;
            if (drift > cfg.momentum_drift_limit) {
                std::ostringstream msg;
                msg << "minimize_fixed_p: momentum drifted by " << 100.0 * drift << "%";
                throw ConstraintError(msg.str());
            }
            if (c > 0.0 && c < std::sqrt(2.0)) set_far(c);
            pre.set_phase(u);
            pre.apply(momentum_gradient(u), zP);
            correct_momentum(u, zP, p, sym);
            e = energy(u).total;
        }
    }
    const double flow_c = c;
    validate_speed(c);

    // Newton polish at the emergent speed, then correct the speed until P_2 = p
    // (P_2 decreases with c along the branch, roughly like 2 pi / c).
    TravellingWave tw = solve_fixed_c(u, c, cfg);
    int newton = tw.newton_iterations;
    double c_prev = 0.0, p_prev = 0.0;
    for (int k = 0; k < 6 && std::abs(tw.p - p) > 1e-4 * p; ++k) {
        double c_next = tw.c * tw.p / p;
        if (k > 0 && tw.p != p_prev) c_next = tw.c + (p - tw.p) * (tw.c - c_prev) / (tw.p - p_prev);
        c_prev = tw.c;
        p_prev = tw.p;
        validate_speed(c_next);
        tw = solve_fixed_c(tw.field, c_next, cfg);
        newton += tw.newton_iterations;
    }
    if (std::abs(tw.p - p) > cfg.momentum_drift_limit * p)
        throw ConstraintError("minimize_fixed_p: polished solution misses the requested momentum");
    tw.newton_iterations = newton;
    tw.flow_steps = steps;
    tw.target_p = p;
    tw.flow_multiplier = flow_c;
    return tw;
}

std::vector<cplx> smooth_perturbation(const GridSpec& g, double amplitude, std::uint64_t seed, int modes) {
    if (amplitude < 0.0 || !std::isfinite(amplitude)) throw InputError("perturbation amplitude must be >= 0");
    if (modes < 1) throw InputError("perturbation needs at least one mode");
    std::vector<cplx> eta(g.size(), cplx(0.0, 0.0));
    if (amplitude == 0.0) return eta;

    std::mt19937_64 gen(seed);
    auto uniform = [&gen]() { return 2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0; };
    std::vector<cplx> a(static_cast<std::size_t>(modes * modes));
    for (int l = 0; l < modes; ++l)
        for (int k = 0; k < modes; ++k) {
            const double re = uniform(), im = uniform();
            a[static_cast<std::size_t>(l * modes + k)] = cplx(re, im) / double(k + l + 2);
        }
    // Sine modes vanish on the outer node ring.
    auto sine = [](int k, double t) { return std::sin((k + 1) * pi * t); };
    std::vector<double> sx(static_cast<std::size_t>(modes * g.nx)), sy(static_cast<std::size_t>(modes * g.ny));
    for (int k = 0; k < modes; ++k) {
        for (int i = 0; i < g.nx; ++i) sx[static_cast<std::size_t>(k * g.nx + i)] = sine(k, double(i) / (g.nx - 1));
        for (int j = 0; j < g.ny; ++j) sy[static_cast<std::size_t>(k * g.ny + j)] = sine(k, double(j) / (g.ny - 1));
    }
    std::vector<cplx> row(static_cast<std::size_t>(modes * g.nx));
    for (int l = 0; l < modes; ++l)
        for (int i = 0; i < g.nx; ++i) {
            cplx s = 0.0;
            for (int k = 0; k < modes; ++k)
                s += a[static_cast<std::size_t>(l * modes + k)] * sx[static_cast<std::size_t>(k * g.nx + i)];
            row[static_cast<std::size_t>(l * g.nx + i)] = s;
        }
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            cplx s = 0.0;
            for (int l = 0; l < modes; ++l)
                s += row[static_cast<std::size_t>(l * g.nx + i)] * sy[static_cast<std::size_t>(l * g.ny + j)];
            eta[g.index(i, j)] = s;
        }
    // x1-even part, mirror-exact.
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx / 2 + 1; ++i) {
            const cplx m = 0.5 * (eta[g.index(i, j)] + eta[g.index(g.mirror_i(i), j)]);
            eta[g.index(i, j)] = m;
            eta[g.index(g.mirror_i(i), j)] = m;
        }
    // x2-conjugation symmetric part: eta(x1, -x2) = conj(eta(x1, x2)), real on x2 = 0.
    for (int j = 0; j < g.ny / 2 + 1; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t a = g.index(i, j), b = g.index(i, g.mirror_j(j));
            const cplx m = 0.5 * (eta[a] + std::conj(eta[b]));
            eta[a] = m;
            eta[b] = std::conj(m);
        }
    double sup = 0.0;
    for (const auto& z : eta) sup = std::max(sup, std::abs(z));
    if (sup > 0.0)
        for (auto& z : eta) z *= amplitude / sup;
    return eta;
}

PerturbResult perturb_resolve(const TravellingWave& base, double amplitude, std::uint64_t seed,
                              const SolverConfig& cfg) {
    if (amplitude > 0.05) throw InputError("perturb_resolve: amplitude must be at most 0.05");
    const std::vector<cplx> eta = smooth_perturbation(base.field.grid(), amplitude, seed);
    Field2D start = base.field;
    for (std::size_t k = 0; k < eta.size(); ++k) start.values()[k] += eta[k];
    PerturbResult out;
    out.wave = solve_fixed_c(start, base.c, cfg);
    out.alignment = align_orbit(out.wave.field, base.field);
    return out;
}

}  // namespace gpvw
