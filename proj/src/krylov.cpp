#include "gpvw/krylov.hpp"

#include <cmath>

#include "gpvw/parallel.hpp"

namespace gpvw {

namespace {

constexpr std::size_t block = 4096;

void axpy(double a, const std::vector<cplx>& x, std::vector<cplx>& y) {
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += a * x[k];
}

}  // namespace

double real_dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    const std::size_t n = a.size();
    return row_reduce((n + block - 1) / block, [&](std::size_t r) {
        double s = 0.0;
        const std::size_t end = std::min(n, (r + 1) * block);
        for (std::size_t k = r * block; k < end; ++k) s += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
        return s;
    });
}

GmresResult gmres(const LinearMap& A, const LinearMap& M, const std::vector<cplx>& b, const GmresOptions& opt) {
    const std::size_t n = b.size();
    const int m = std::max(1, opt.restart);
    GmresResult out;
    out.solution.assign(n, cplx(0.0, 0.0));
    const double bnorm = std::sqrt(real_dot(b, b));
    if (bnorm == 0.0) {
        out.converged = true;
        return out;
    }

    std::vector<cplx> y(n, cplx(0.0, 0.0));  // preconditioned unknown
    std::vector<cplx> r = b, z(n), w(n);
    std::vector<std::vector<cplx>> V;
    std::vector<std::vector<double>> H(static_cast<std::size_t>(m + 1), std::vector<double>(m, 0.0));
    std::vector<double> cs(m), sn(m), g(m + 1);
    double rnorm = bnorm;

    while (out.iterations < opt.max_iterations) {
        V.assign(1, r);
        for (auto& v : V[0]) v /= rnorm;
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = rnorm;
        int k = 0;
        for (; k < m && out.iterations < opt.max_iterations; ++k) {
            ++out.iterations;
            M(V[k], z);
            A(z, w);
            for (int i = 0; i <= k; ++i) {  // modified Gram-Schmidt
                H[i][k] = real_dot(w, V[i]);
                axpy(-H[i][k], V[i], w);
            }
            H[k + 1][k] = std::sqrt(real_dot(w, w));
            for (int i = 0; i < k; ++i) {
                const double t = cs[i] * H[i][k] + sn[i] * H[i + 1][k];
                H[i + 1][k] = -sn[i] * H[i][k] + cs[i] * H[i + 1][k];
                H[i][k] = t;
            }
            const double den = std::hypot(H[k][k], H[k + 1][k]);
            cs[k] = den == 0.0 ? 1.0 : H[k][k] / den;
            sn[k] = den == 0.0 ? 0.0 : H[k + 1][k] / den;
            const double hk1 = H[k + 1][k];
            H[k][k] = den;
            H[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k] * g[k];
            out.relative_residual = std::abs(g[k + 1]) / bnorm;
            if (out.relative_residual <= opt.rtol || hk1 == 0.0) {
                ++k;
                break;
            }
            V.push_back(w);
            for (auto& v : V.back()) v /= hk1;
        }
        // Back substitution for the Krylov coefficients.
        std::vector<double> coef(k, 0.0);
        for (int i = k - 1; i >= 0; --i) {
            double s = g[i];
            for (int j = i + 1; j < k; ++j) s -= H[i][j] * coef[j];
            coef[i] = s / H[i][i];
        }
        for (int i = 0; i < k; ++i) axpy(coef[i], V[i], y);

        M(y, z);
        A(z, w);
        for (std::size_t q = 0; q < n; ++q) r[q] = b[q] - w[q];
        rnorm = std::sqrt(real_dot(r, r));
        out.relative_residual = rnorm / bnorm;
        if (out.relative_residual <= opt.rtol) {
            out.converged = true;
            break;
        }
    }
    M(y, out.solution);
    return out;
}

}  // namespace gpvw
