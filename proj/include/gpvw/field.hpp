#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace gpvw {

using cplx = std::complex<double>;

/// Uniform grid on [-L, L]^2 with nx * ny nodes, x index fastest.
struct GridSpec {
    double half_width = 0.0;
    int nx = 0;
    int ny = 0;

    double hx() const { return 2.0 * half_width / (nx - 1); }
    double hy() const { return 2.0 * half_width / (ny - 1); }
    double x(int i) const { return -half_width + i * hx(); }
    double y(int j) const { return -half_width + j * hy(); }
    double cell_area() const { return hx() * hy(); }
    double area() const { return 4.0 * half_width * half_width; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
    }
    int mirror_i(int i) const { return nx - 1 - i; }
    int mirror_j(int j) const { return ny - 1 - j; }

    /// Throws InputError unless L > 0 and nx, ny are odd and >= 17.
    void validate() const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Square grid helper: half width L and n nodes per side.
GridSpec make_grid(double half_width, int n);

/// Linearised far field of a travelling wave of speed c moving along -e2 with
/// dipole strength A:
///   phase   phi = A s x2 / (s^2 x1^2 + x2^2),   s = sqrt(1 - c^2/2)
///   modulus 1 - (c/2) d_2 phi.
/// A = 0 is the constant state 1.
struct FarField {
    double dipole = 0.0;
    double speed = 0.0;

    bool is_unit() const { return dipole == 0.0; }
    cplx value(double x, double y) const;

    friend bool operator==(const FarField&, const FarField&) = default;
};

/// Complex field on a GridSpec. The ring of ghost nodes just outside the grid
/// holds the far-field state (the constant 1 unless a dipole is set).
class Field2D {
public:
    Field2D() = default;
    explicit Field2D(const GridSpec& grid, cplx fill = cplx(1.0, 0.0), FarField far = {});

    const GridSpec& grid() const { return grid_; }
    const FarField& far_field() const { return far_; }
    void set_far_field(const FarField& far) { far_ = far; }

    std::vector<cplx>& values() { return values_; }
    const std::vector<cplx>& values() const { return values_; }

    cplx& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
    const cplx& operator()(int i, int j) const { return values_[grid_.index(i, j)]; }

    /// Value at (i, j) for i in [-1, nx], j in [-1, ny]; ghost nodes read the far field.
    cplx at(int i, int j) const;

    /// Bilinear interpolation; points in the ghost ring interpolate towards the far field.
    cplx interpolate(double x, double y) const;

    bool all_finite() const;

private:
    GridSpec grid_{};
    FarField far_{};
    std::vector<cplx> values_;
};

/// Copy of a field with its ghost ring, stored as (nx + 2) x (ny + 2).
class Padded {
public:
    /// Ghost ring from the field's far field.
    explicit Padded(const Field2D& u);
    /// Ghost ring set to zero (for perturbations / linearised operators).
    Padded(const GridSpec& grid, const std::vector<cplx>& values);

    const cplx& operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(j + 1) * stride_ + static_cast<std::size_t>(i + 1)];
    }

private:
    std::size_t stride_;
    std::vector<cplx> data_;
};

/// Real scalar field on a grid (Jacobian, densities).
struct ScalarField {
    GridSpec grid;
    std::vector<double> values;

    double operator()(int i, int j) const { return values[grid.index(i, j)]; }
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

enum class Frame { physical, rescaled };

struct Vortex {
    Point position;
    int degree = 0;
    bool accurate = true;  ///< false when sub-cell refinement failed (cell centre reported)
};

/// Located zeros with winding degrees.
struct VortexSet {
    std::vector<Vortex> entries;
    Frame frame = Frame::physical;
    double scale = 1.0;  ///< physical length per frame unit

    std::size_t size() const { return entries.size(); }
    int total_degree() const;
};

}  // namespace gpvw
