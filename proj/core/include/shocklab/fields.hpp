#pragma once

// Uniform 1-D grid fields and the calculus primitives the rest of the
// library is written against.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "shocklab/errors.hpp"

namespace shocklab {

enum class Topology { periodic, clamped };

/// Uniform grid on [-L, L) with nodes x_j = -L + j*dx, dx = 2L/n.
class GridSpec {
public:
    GridSpec(double half_length, std::size_t cell_count, Topology topology = Topology::periodic);

    double half_length() const noexcept { return half_length_; }
    double length() const noexcept { return 2.0 * half_length_; }
    std::size_t size() const noexcept { return cell_count_; }
    double dx() const noexcept { return dx_; }
    Topology topology() const noexcept { return topology_; }
    bool periodic() const noexcept { return topology_ == Topology::periodic; }

    double node(std::size_t j) const noexcept { return -half_length_ + static_cast<double>(j) * dx_; }
    bool contains(double x) const noexcept { return x >= -half_length_ && x < half_length_; }

    GridSpec with_topology(Topology t) const { return GridSpec(half_length_, cell_count_, t); }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;

private:
    double half_length_;
    std::size_t cell_count_;
    double dx_;
    Topology topology_;
};

/// Grid samples of a real function. Immutable; every value is finite.
class Field {
public:
    Field(GridSpec grid, std::vector<double> values);

    static Field constant(const GridSpec& grid, double c);

    template <class Fn>
    static Field sample(const GridSpec& grid, Fn&& fn) {
        std::vector<double> v(grid.size());
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = fn(grid.node(j));
        return Field(grid, std::move(v));
    }

    const GridSpec& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t j) const noexcept { return values_[j]; }

    double min() const;
    double max() const;

    /// Same samples on the same nodes, relabelled with another topology.
    Field with_topology(Topology t) const { return Field(grid_.with_topology(t), values_); }

    /// result[j] = values[(j + k) mod n]; moves the profile k cells to the left.
    Field shifted_cyclic(std::ptrdiff_t k) const;

    std::vector<double> release() && { return std::move(values_); }

    friend Field operator+(const Field& a, const Field& b);
    friend Field operator-(const Field& a, const Field& b);
    friend Field operator*(double s, const Field& a);
    friend Field operator+(const Field& a, double c);

private:
    GridSpec grid_;
    std::vector<double> values_;
};

void require_same_grid(const Field& a, const Field& b);

/// A field whose nodal values increase strictly from left to right.
class MonotoneField {
public:
    explicit MonotoneField(Field f);

    const Field& field() const noexcept { return field_; }
    const GridSpec& grid() const noexcept { return field_.grid(); }
    std::span<const double> values() const noexcept { return field_.values(); }
    double operator[](std::size_t j) const noexcept { return field_[j]; }
    std::size_t size() const noexcept { return field_.size(); }

private:
    Field field_;
};

/// Second-order central difference; one-sided second-order stencils at
/// the ends of a clamped grid.
Field spatial_derivative(const Field& f);

enum class Quadrature { trapezoid, fourth_order };

/// Antiderivative F with F(b) = 0. The trapezoid variant evaluates F(b) by
/// linear interpolation; the fourth-order variant integrates the local cubic
/// exactly over partial cells.
Field cumulative_from(const Field& f, double b, Quadrature q = Quadrature::trapezoid);

/// Fourth-order antiderivative from x_0, evaluable anywhere in [-L, L].
/// Partial cells integrate the local cubic exactly. On a clamped grid the
/// last cell [x_{n-1}, L] holds the last value.
class Antiderivative {
public:
    explicit Antiderivative(Field f);
    double operator()(double x) const;
    const Field& integrand() const noexcept { return f_; }

private:
    Field f_;
    std::vector<double> nodal_;
};

/// Fourth-order integral of f over [a, b] with a, b in [-L, L].
double integral_between(const Field& f, double a, double b);

/// Linear interpolation. Periodic grids wrap; clamped grids reject x
/// outside [-L, L) and hold the last value on [x_{n-1}, L).
double interpolate(const Field& f, double x);

/// The x with piecewise-linear F(x) = target. Throws OutOfRange when the
/// target is outside [F(x_0), F(x_{n-1})].
double invert_monotone(const MonotoneField& F, double target);

/// Inversion of the quasi-periodic extension F(x + 2L) = F(x) + increment.
/// Defined for every real target; the result may lie outside [-L, L).
double invert_quasi_periodic(const MonotoneField& F, double increment, double target);

struct Window {
    double lo;
    double hi;
};

/// dx * sum |f_j - g_j| over nodes inside the window (whole grid if absent).
double l1_distance(const Field& f, const Field& g, std::optional<Window> window = std::nullopt);

/// CSV snapshot with header `x,value`, one row per node in order.
void write_csv(std::ostream& os, const Field& f);
Field read_csv(std::istream& is, const GridSpec& grid);

} // namespace shocklab
