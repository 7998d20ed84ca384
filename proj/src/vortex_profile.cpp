#include "gpvw/vortex_profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gpvw/errors.hpp"

namespace gpvw {

namespace {

double discrete_l2(const std::vector<double>& v, double h) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(h * s);
}

// Solves a tridiagonal system in place (Thomas algorithm). lower[0] and upper[n-1] are unused.
void solve_tridiagonal(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper,
                       std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double m = lower[i] / diag[i - 1];
        diag[i] -= m * upper[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

std::vector<double> centred_derivative(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> df(n);
    df[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) df[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    df[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return df;
}

}  // namespace

std::vector<double> profile_residual(const std::vector<double>& r, const std::vector<double>& rho) {
    const std::size_t n = r.size();
    const double h = r[1] - r[0];
    std::vector<double> res(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double ri = r[i];
        res[i - 1] = (rho[i + 1] - 2.0 * rho[i] + rho[i - 1]) / (h * h) +
                     (rho[i + 1] - rho[i - 1]) / (2.0 * h * ri) - rho[i] / (ri * ri) +
                     rho[i] * (1.0 - rho[i] * rho[i]);
    }
    return res;
}

VortexProfile solve_profile(int degree, double r_max, int nodes, double tol, int max_iterations) {
    if (degree != 1 && degree != -1) throw InputError("vortex profile: degree must be +1 or -1");
    if (nodes < 3) throw InputError("vortex profile: need at least 3 nodes");
    if (!(r_max > 0.0)) throw InputError("vortex profile: r_max must be positive");
    if (!(tol > 0.0)) throw InputError("vortex profile: tolerance must be positive");

    VortexProfile p;
    p.degree = degree;
    p.r_max = r_max;
    p.nodes = nodes;
    const double h = r_max / (nodes - 1);
    p.r.resize(nodes);
    p.rho.resize(nodes);
    for (int i = 0; i < nodes; ++i) {
        const double r = i * h;
        p.r[i] = r;
        p.rho[i] = r / std::sqrt(r * r + 2.0);
    }
    p.rho[0] = 0.0;
    p.rho[nodes - 1] = 1.0 - 1.0 / (2.0 * r_max * r_max);

    const std::size_t m = static_cast<std::size_t>(nodes - 2);
    std::vector<double> lower(m), diag(m), upper(m);
    auto res = profile_residual(p.r, p.rho);
    double norm = discrete_l2(res, h);
    int it = 0;
    for (; it < max_iterations && norm > tol; ++it) {
        for (std::size_t k = 0; k < m; ++k) {
            const double ri = p.r[k + 1];
            const double rho = p.rho[k + 1];
            lower[k] = 1.0 / (h * h) - 1.0 / (2.0 * h * ri);
            upper[k] = 1.0 / (h * h) + 1.0 / (2.0 * h * ri);
            diag[k] = -2.0 / (h * h) - 1.0 / (ri * ri) + 1.0 - 3.0 * rho * rho;
        }
        std::vector<double> step(m);
        for (std::size_t k = 0; k < m; ++k) step[k] = -res[k];
        solve_tridiagonal(lower, diag, upper, step);

        // Backtracking on the residual norm.
        double lambda = 1.0;
        std::vector<double> trial = p.rho;
        double trial_norm = norm;
        while (lambda > 1e-4) {
            for (std::size_t k = 0; k < m; ++k) trial[k + 1] = p.rho[k + 1] + lambda * step[k];
            auto trial_res = profile_residual(p.r, trial);
            trial_norm = discrete_l2(trial_res, h);
            if (trial_norm < norm) {
                res = std::move(trial_res);
                break;
            }
            lambda *= 0.5;
        }
        if (lambda <= 1e-4) break;
        p.rho = trial;
        norm = trial_norm;
    }
    p.newton_iterations = it;
    p.residual = norm;
    if (!(norm <= tol)) {
        std::ostringstream msg;
        msg << "vortex profile: Newton did not converge (residual " << norm << " after " << it
            << " iterations)";
        throw ConvergenceError(msg.str(), norm);
    }
    p.drho = centred_derivative(p.rho, h);
    p.kappa = estimate_kappa(p);
    p.drho[0] = p.kappa;
    return p;
}

double estimate_kappa(const VortexProfile& profile) {
    if (profile.nodes < 4 || profile.r.size() < 4 || profile.rho.size() < 4)
        throw InputError("estimate_kappa: need at least 4 nodes");
    const double h = profile.r[1] - profile.r[0];
    if (!(h > 0.0)) throw InputError("estimate_kappa: degenerate radial grid");
    // q(r) = rho/r = kappa + a r^2 + b r^4; Lagrange extrapolation in s = r^2
    // through s = h^2, 4h^2, 9h^2 evaluated at s = 0.
    const double q1 = profile.rho[1] / profile.r[1];
    const double q2 = profile.rho[2] / profile.r[2];
    const double q3 = profile.rho[3] / profile.r[3];
    const double s1 = 1.0, s2 = 4.0, s3 = 9.0;
    const double l1 = (s2 * s3) / ((s1 - s2) * (s1 - s3));
    const double l2 = (s1 * s3) / ((s2 - s1) * (s2 - s3));
    const double l3 = (s1 * s2) / ((s3 - s1) * (s3 - s2));
    return l1 * q1 + l2 * q2 + l3 * q3;
}

ProfileSample eval_profile(const VortexProfile& p, double r) {
    if (r <= 0.0) return {0.0, p.kappa};
    if (r >= p.r_max) {
        if (r == p.r_max) return {p.rho.back(), p.drho.back()};
        return {1.0 - 1.0 / (2.0 * r * r), 1.0 / (r * r * r)};
    }
    const double h = p.spacing();
    auto i = static_cast<std::size_t>(r / h);
    i = std::min(i, p.r.size() - 2);
    const double t = (r - p.r[i]) / h;
    const double y0 = p.rho[i], y1 = p.rho[i + 1];
    const double m0 = p.drho[i] * h, m1 = p.drho[i + 1] * h;
    const double t2 = t * t, t3 = t2 * t;
    const double rho = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 +
                       (t3 - t2) * m1;
    const double drho = ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * y1 +
                         (3 * t2 - 2 * t) * m1) /
                        h;
    return {rho, drho};
}

}  // namespace gpvw
