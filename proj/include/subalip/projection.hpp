#pragma once

#include "subalip/polynomial.hpp"
#include "subalip/roots.hpp"

#include <array>
#include <string>

namespace subalip {

// Axis-aligned rational box [xlo, xhi] x [ylo, yhi].
struct Box {
    Rational xlo = -1, xhi = 1, ylo = -1, yhi = 1;

    bool contains(const Rational& x, const Rational& y) const { return xlo <= x && x <= xhi && ylo <= y && y <= yhi; }
    Rational width() const { return xhi - xlo; }
    Rational height() const { return yhi - ylo; }
};

// Linear change of coordinates (x, y) -> (u, v) followed by projection to u.
// The map is: optional swap of x and y, then rotation by the rational angle
// whose half-angle tangent is `rotation`, then the shear (u, v) -> (u + t v, v).
struct ProjectionSpec {
    Rational shear = 0;
    bool axis_swap = false;
    Rational rotation = 0;

    static ProjectionSpec identity() { return {}; }
    static ProjectionSpec swap() { return {0, true, 0}; }
    static ProjectionSpec sheared(const Rational& t) { return {t, false, 0}; }
    static ProjectionSpec rotated(const Rational& s) { return {0, false, s}; }

    // Row-major 2x2 matrix of the map and of its inverse.
    std::array<Rational, 4> matrix() const;
    std::array<Rational, 4> inverse() const;
    std::array<double, 4> matrix_double() const;
    std::array<double, 4> inverse_double() const;

    std::array<Rational, 2> forward(const Rational& x, const Rational& y) const;
    std::array<Rational, 2> backward(const Rational& u, const Rational& v) const;

    // P(x, y) rewritten in the (u, v) coordinates, variable 0 = u, 1 = v.
    Polynomial transform(const Polynomial& p) const;
    // Range of u over the box.
    Interval base_range(const Box& box) const;

    std::string to_string() const;
    friend bool operator==(const ProjectionSpec&, const ProjectionSpec&) = default;
};

std::vector<ProjectionSpec> default_projection_candidates();

}  // namespace subalip
