#include "gpvw/preconditioner.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "gpvw/errors.hpp"
#include "gpvw/parallel.hpp"

namespace gpvw {

namespace {

// FFTW planning is not thread-safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::vector<double> dirichlet_eigenvalues(int n, double h) {
    std::vector<double> lam(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) lam[k] = (2.0 - 2.0 * std::cos(std::numbers::pi * (k + 1) / (n + 1))) / (h * h);
    return lam;
}

}  // namespace

LaplaceShiftPreconditioner::LaplaceShiftPreconditioner(const GridSpec& grid, double shift_real, double shift_imag)
    : grid_(grid), shift_real_(shift_real), shift_imag_(shift_imag) {
    grid_.validate();
    if (shift_real < 0.0 || shift_imag < 0.0) throw InputError("preconditioner shifts must be non-negative");
    lambda_x_ = dirichlet_eigenvalues(grid_.nx, grid_.hx());
    lambda_y_ = dirichlet_eigenvalues(grid_.ny, grid_.hy());
    const std::size_t n = grid_.size();
    buffer_re_ = fftw_alloc_real(n);
    buffer_im_ = fftw_alloc_real(n);
    std::lock_guard lock(planner_mutex());
    // Row-major with x fastest: FFTW's first dimension is y.
    plan_ = fftw_plan_r2r_2d(grid_.ny, grid_.nx, buffer_re_, buffer_re_, FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
    if (plan_ == nullptr) throw Error("preconditioner: FFTW planning failed");
}

LaplaceShiftPreconditioner::~LaplaceShiftPreconditioner() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    fftw_free(buffer_re_);
    fftw_free(buffer_im_);
}

void LaplaceShiftPreconditioner::set_phase(const Field2D& u) {
    if (!(u.grid() == grid_)) throw InputError("preconditioner: field grid mismatch");
    phase_.resize(grid_.size());
    for (std::size_t k = 0; k < phase_.size(); ++k) {
        const double m = std::abs(u.values()[k]);
        phase_[k] = m >= 1e-3 ? u.values()[k] / m : cplx(1.0, 0.0);
    }
}

void LaplaceShiftPreconditioner::clear_phase() { phase_.clear(); }

void LaplaceShiftPreconditioner::solve_inplace(double* data, double shift) const {
    const auto plan = static_cast<fftw_plan>(plan_);
    fftw_execute_r2r(plan, data, data);
    const double scale = 1.0 / (4.0 * (grid_.nx + 1.0) * (grid_.ny + 1.0));
    const auto nx = static_cast<std::size_t>(grid_.nx);
    for (std::size_t j = 0; j < lambda_y_.size(); ++j)
        for (std::size_t i = 0; i < nx; ++i) data[j * nx + i] *= scale / (lambda_x_[i] + lambda_y_[j] + shift);
    fftw_execute_r2r(plan, data, data);
}

void LaplaceShiftPreconditioner::apply(const std::vector<cplx>& in, std::vector<cplx>& out) const {
    const std::size_t n = grid_.size();
    if (in.size() != n) throw InputError("preconditioner: vector size mismatch");
    const bool rotate = !phase_.empty();
    for (std::size_t k = 0; k < n; ++k) {
        const cplx v = rotate ? std::conj(phase_[k]) * in[k] : in[k];
        buffer_re_[k] = v.real();
        buffer_im_[k] = v.imag();
    }
    solve_inplace(buffer_re_, shift_real_);
    solve_inplace(buffer_im_, shift_imag_);
    out.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx v(buffer_re_[k], buffer_im_[k]);
        out[k] = rotate ? phase_[k] * v : v;
    }
}

}  // namespace gpvw
