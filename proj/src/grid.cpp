#include "kellerscope/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kellerscope/model.hpp"

namespace kellerscope {

Domain Domain::make(int dim, std::array<double, 2> lengths, std::array<std::size_t, 2> cells) {
    if (dim != 1 && dim != 2) {
        throw DomainError("domain dimension must be 1 or 2, got " + std::to_string(dim));
    }
    Domain d;
    d.shape_.dim = dim;
    for (int axis = 0; axis < dim; ++axis) {
        if (cells[axis] < 3) {
            throw DomainError("every axis needs at least 3 cells, axis " + std::to_string(axis) + " has " +
                              std::to_string(cells[axis]));
        }
        if (!(lengths[axis] > 0.0) || !std::isfinite(lengths[axis])) {
            throw DomainError("domain lengths must be positive and finite");
        }
        d.lengths_[axis] = lengths[axis];
        d.spacing_[axis] = lengths[axis] / static_cast<double>(cells[axis]);
    }
    d.shape_.nx = cells[0];
    d.shape_.ny = dim == 2 ? cells[1] : 1;
    if (dim == 1) {
        d.lengths_[1] = 1.0;
        d.spacing_[1] = 1.0;
    }
    return d;
}

Domain Domain::interval(double length, std::size_t cells) { return make(1, {length, 1.0}, {cells, 1}); }

Domain Domain::rectangle(double lx, double ly, std::size_t nx, std::size_t ny) {
    return make(2, {lx, ly}, {nx, ny});
}

double Domain::measure() const { return dim() == 2 ? lengths_[0] * lengths_[1] : lengths_[0]; }

double Domain::cell_volume() const { return dim() == 2 ? spacing_[0] * spacing_[1] : spacing_[0]; }

double Domain::min_spacing() const { return dim() == 2 ? std::min(spacing_[0], spacing_[1]) : spacing_[0]; }

std::array<double, 2> Domain::cell_center(std::size_t i, std::size_t j) const {
    const double x = (static_cast<double>(i) + 0.5) * spacing_[0];
    const double y = dim() == 2 ? (static_cast<double>(j) + 0.5) * spacing_[1] : 0.0;
    return {x, y};
}

Field::Field(GridShape shape, std::vector<double> values) : shape_(shape), values_(std::move(values)) {
    if (values_.size() != shape_.size()) {
        std::ostringstream msg;
        msg << "field has " << values_.size() << " values but its grid has " << shape_.size() << " cells";
        throw StructuralError(msg.str());
    }
}

Field Field::zeros(const Domain& d) { return constant(d, 0.0); }

Field Field::constant(const Domain& d, double c) { return Field(d.shape(), std::vector<double>(d.size(), c)); }

Field Field::sample(const Domain& d, const std::function<double(double, double)>& f) {
    std::vector<double> values(d.size());
    for (std::size_t j = 0; j < d.ny(); ++j)
        for (std::size_t i = 0; i < d.nx(); ++i) {
            const auto c = d.cell_center(i, j);
            values[d.index(i, j)] = f(c[0], c[1]);
        }
    return Field(d.shape(), std::move(values));
}

double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }

double Field::sup_abs() const {
    double s = 0.0;
    for (double x : values_) s = std::max(s, std::abs(x));
    return s;
}

bool Field::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

Field& Field::operator+=(const Field& o) {
    if (o.shape_ != shape_) throw StructuralError("field addition with mismatched shapes");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
    return *this;
}

Field& Field::operator-=(const Field& o) {
    if (o.shape_ != shape_) throw StructuralError("field subtraction with mismatched shapes");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
    return *this;
}

Field& Field::operator*=(double s) {
    for (double& x : values_) x *= s;
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

void require_on(const Field& f, const Domain& d, const char* what) {
    if (f.shape() != d.shape()) {
        std::ostringstream msg;
        msg << what << ": field shape (dim=" << f.shape().dim << ", " << f.shape().nx << "x" << f.shape().ny
            << ") does not match domain (dim=" << d.dim() << ", " << d.nx() << "x" << d.ny() << ")";
        throw StructuralError(msg.str());
    }
}

Field laplacian_neumann(const Field& f, const Domain& d) {
    require_on(f, d, "laplacian_neumann");
    const auto h = d.spacings();
    return flux_divergence(d, [&](std::size_t lo, std::size_t hi, int axis) { return (f[hi] - f[lo]) / h[axis]; });
}

Field diffusive_divergence(const Field& u, const std::function<double(double)>& phi, const Domain& d) {
    require_on(u, d, "diffusive_divergence");
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (u[k] < 0.0) {
            throw PreconditionError("diffusive_divergence: negative density " + std::to_string(u[k]) + " at cell " +
                                    std::to_string(k));
        }
    }
    const auto h = d.spacings();
    return flux_divergence(d, [&](std::size_t lo, std::size_t hi, int axis) {
        const double face = 0.5 * (u[lo] + u[hi]);
        return phi(face) * (u[hi] - u[lo]) / h[axis];
    });
}

Field diffusive_divergence(const Field& u, const ModelParams& params, const Domain& d) {
    return diffusive_divergence(u, [&params](double s) { return phi(s, params); }, d);
}

Field chemotactic_divergence(const Field& u, const Field& v, double chi, const Domain& d) {
    require_on(u, d, "chemotactic_divergence (u)");
    require_on(v, d, "chemotactic_divergence (v)");
    const auto h = d.spacings();
    return flux_divergence(d, [&](std::size_t lo, std::size_t hi, int axis) {
        const double w = chi * (v[hi] - v[lo]) / h[axis];
        return upwind_flux(w, u[lo], u[hi]);
    });
}

double integrate(const Field& f, const Domain& d) {
    require_on(f, d, "integrate");
    double sum = 0.0;
    for (double x : f.values()) sum += x;
    return sum * d.cell_volume();
}

} // namespace kellerscope
