#pragma once

// Cell-centered uniform grids on axis-aligned boxes (1D intervals, 2D
// rectangles) and the flux-form spatial operators used by the model.
//
// Every operator here is written as a divergence of face fluxes with zero
// flux on boundary faces (homogeneous Neumann). Face fluxes are computed
// once per face, then each cell combines (F_hi - F_lo) / h per axis, which
// makes the operators mirror-symmetric bit for bit and conservative up to
// rounding.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "kellerscope/error.hpp"

namespace kellerscope {

struct ModelParams;

// Per-axis cell counts. In 1D ny == 1.
struct GridShape {
    int dim = 1;
    std::size_t nx = 0;
    std::size_t ny = 1;

    std::size_t size() const { return nx * ny; }
    bool operator==(const GridShape&) const = default;
};

class Domain {
public:
    // Throws DomainError unless dim is 1 or 2, every cell count is >= 3
    // and every length is positive. For dim == 1 the second entries are
    // ignored.
    static Domain make(int dim, std::array<double, 2> lengths, std::array<std::size_t, 2> cells);
    static Domain interval(double length, std::size_t cells);
    static Domain rectangle(double lx, double ly, std::size_t nx, std::size_t ny);

    int dim() const { return shape_.dim; }
    const GridShape& shape() const { return shape_; }
    std::size_t nx() const { return shape_.nx; }
    std::size_t ny() const { return shape_.ny; }
    std::size_t size() const { return shape_.size(); }
    double length(int axis) const { return lengths_[axis]; }
    double spacing(int axis) const { return spacing_[axis]; }
    std::array<double, 2> lengths() const { return lengths_; }
    std::array<double, 2> spacings() const { return spacing_; }

    double measure() const;
    double cell_volume() const;
    // Smallest spacing over the active axes.
    double min_spacing() const;

    std::size_t index(std::size_t i, std::size_t j = 0) const { return j * shape_.nx + i; }
    std::array<double, 2> cell_center(std::size_t i, std::size_t j = 0) const;

    bool operator==(const Domain&) const = default;

    // Empty placeholder; every real domain comes from make().
    Domain() = default;

private:
    GridShape shape_;
    std::array<double, 2> lengths_{1.0, 1.0};
    std::array<double, 2> spacing_{1.0, 1.0};
};

// Cell-centered scalar values, row-major (x fastest).
class Field {
public:
    Field() = default;
    Field(GridShape shape, std::vector<double> values);

    static Field zeros(const Domain& d);
    static Field constant(const Domain& d, double c);
    // f(x, y) sampled at cell centers (y == 0 in 1D).
    static Field sample(const Domain& d, const std::function<double(double, double)>& f);

    const GridShape& shape() const { return shape_; }
    std::size_t size() const { return values_.size(); }

    double& operator[](std::size_t k) { return values_[k]; }
    double operator[](std::size_t k) const { return values_[k]; }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    std::vector<double>& data() { return values_; }
    const std::vector<double>& data() const { return values_; }

    double max() const;
    double min() const;
    double sup_abs() const;
    bool all_finite() const;

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double s);

    bool operator==(const Field&) const = default;

private:
    GridShape shape_;
    std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

// Throws StructuralError when f does not live on d.
void require_on(const Field& f, const Domain& d, const char* what);

// Visits every interior face as (lo_cell, hi_cell, axis). Boundary faces
// carry zero flux and are never visited.
template <class Visitor>
void for_each_interior_face(const Domain& d, Visitor&& visit) {
    const std::size_t nx = d.nx();
    const std::size_t ny = d.ny();
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i + 1 < nx; ++i)
            visit(d.index(i, j), d.index(i + 1, j), 0);
    if (d.dim() == 2)
        for (std::size_t j = 0; j + 1 < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i)
                visit(d.index(i, j), d.index(i, j + 1), 1);
}

// Divergence of a face flux F(lo, hi, axis), F positive in the +axis
// direction. Returns sum over axes of (F_hi_face - F_lo_face) / h.
template <class FaceFlux>
Field flux_divergence(const Domain& d, FaceFlux&& flux) {
    const std::size_t nx = d.nx();
    const std::size_t ny = d.ny();
    const double hx = d.spacing(0);
    // x-face k = j*(nx+1) + i sits left of cell (i, j).
    std::vector<double> fx((nx + 1) * ny, 0.0);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 1; i < nx; ++i)
            fx[j * (nx + 1) + i] = flux(d.index(i - 1, j), d.index(i, j), 0);

    std::vector<double> out(d.size());
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i)
            out[d.index(i, j)] = (fx[j * (nx + 1) + i + 1] - fx[j * (nx + 1) + i]) / hx;

    if (d.dim() == 2) {
        const double hy = d.spacing(1);
        // y-face k = j*nx + i sits below cell (i, j).
        std::vector<double> fy((ny + 1) * nx, 0.0);
        for (std::size_t j = 1; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i)
                fy[j * nx + i] = flux(d.index(i, j - 1), d.index(i, j), 1);
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i)
                out[d.index(i, j)] += (fy[(j + 1) * nx + i] - fy[j * nx + i]) / hy;
    }
    return Field(d.shape(), std::move(out));
}

// Second-difference Laplacian with mirror ghost cells (zero normal flux).
Field laplacian_neumann(const Field& f, const Domain& d);

// div(phi(u_face) grad u) with u_face the arithmetic mean of the two
// neighbours. Throws PreconditionError on negative u.
Field diffusive_divergence(const Field& u, const std::function<double(double)>& phi, const Domain& d);
Field diffusive_divergence(const Field& u, const ModelParams& params, const Domain& d);

// div(chi u grad v) with donor-cell u. Face velocity w = chi (v_hi - v_lo)/h,
// flux = w * u_donor, zero when w == 0.
Field chemotactic_divergence(const Field& u, const Field& v, double chi, const Domain& d);

// Upwind face flux, shared with the stepper's CFL bookkeeping.
inline double upwind_flux(double velocity, double u_lo, double u_hi) {
    if (velocity > 0.0) return velocity * u_lo;
    if (velocity < 0.0) return velocity * u_hi;
    return 0.0;
}

double integrate(const Field& f, const Domain& d);

} // namespace kellerscope
