#include "gpvw/field.hpp"

#include <algorithm>
#include <cmath>

#include "gpvw/errors.hpp"

namespace gpvw {

void GridSpec::validate() const {
    if (!(half_width > 0.0) || !std::isfinite(half_width)) throw InputError("grid: half width must be positive");
    if (nx < 16 || ny < 16) throw InputError("grid: need at least 16 nodes per direction");
    if (nx % 2 == 0 || ny % 2 == 0) throw InputError("grid: node counts must be odd so the axes are grid lines");
}

GridSpec make_grid(double half_width, int n) {
    GridSpec g{half_width, n, n};
    g.validate();
    return g;
}

cplx FarField::value(double x, double y) const {
    if (dipole == 0.0) return {1.0, 0.0};
    const double s2 = 1.0 - 0.5 * speed * speed;
    const double s = std::sqrt(s2);
    const double den = s2 * x * x + y * y;
    const double phi = dipole * s * y / den;
    const double dphi_dy = dipole * s * (den - 2.0 * y * y) / (den * den);
    const double modulus = 1.0 - 0.5 * speed * dphi_dy;
    return std::polar(modulus, phi);
}

int VortexSet::total_degree() const {
    int s = 0;
    for (const auto& v : entries) s += v.degree;
    return s;
}

Field2D::Field2D(const GridSpec& grid, cplx fill, FarField far)
    : grid_(grid), far_(far), values_(grid.size(), fill) {}

cplx Field2D::at(int i, int j) const {
    if (i >= 0 && i < grid_.nx && j >= 0 && j < grid_.ny) return (*this)(i, j);
    return far_.value(grid_.x(i), grid_.y(j));
}

cplx Field2D::interpolate(double x, double y) const {
    const double fx = (x + grid_.half_width) / grid_.hx();
    const double fy = (y + grid_.half_width) / grid_.hy();
    const double cx = std::clamp(fx, -1.0, static_cast<double>(grid_.nx));
    const double cy = std::clamp(fy, -1.0, static_cast<double>(grid_.ny));
    int i = static_cast<int>(std::floor(cx));
    int j = static_cast<int>(std::floor(cy));
    i = std::clamp(i, -1, grid_.nx - 1);
    j = std::clamp(j, -1, grid_.ny - 1);
    const double tx = cx - i;
    const double ty = cy - j;
    return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) + (1 - tx) * ty * at(i, j + 1) +
           tx * ty * at(i + 1, j + 1);
}

bool Field2D::all_finite() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

Padded::Padded(const Field2D& u) : stride_(static_cast<std::size_t>(u.grid().nx + 2)) {
    const auto& g = u.grid();
    data_.resize(stride_ * static_cast<std::size_t>(g.ny + 2));
    for (int j = -1; j <= g.ny; ++j) {
        cplx* row = data_.data() + static_cast<std::size_t>(j + 1) * stride_;
        if (j == -1 || j == g.ny) {
            for (int i = -1; i <= g.nx; ++i) row[i + 1] = u.at(i, j);
            continue;
        }
        row[0] = u.at(-1, j);
        std::copy_n(u.values().data() + g.index(0, j), g.nx, row + 1);
        row[g.nx + 1] = u.at(g.nx, j);
    }
}

Padded::Padded(const GridSpec& g, const std::vector<cplx>& values)
    : stride_(static_cast<std::size_t>(g.nx + 2)),
      data_(stride_ * static_cast<std::size_t>(g.ny + 2), cplx(0.0, 0.0)) {
    for (int j = 0; j < g.ny; ++j)
        std::copy_n(values.data() + g.index(0, j), g.nx, data_.data() + static_cast<std::size_t>(j + 1) * stride_ + 1);
}

}  // namespace gpvw
