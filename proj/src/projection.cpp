#include "subalip/projection.hpp"

#include <algorithm>

namespace subalip {

namespace {

std::array<Rational, 4> multiply(const std::array<Rational, 4>& a, const std::array<Rational, 4>& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

std::array<double, 4> to_double(const std::array<Rational, 4>& m) {
    return {m[0].get_d(), m[1].get_d(), m[2].get_d(), m[3].get_d()};
}

}  // namespace

std::array<Rational, 4> ProjectionSpec::matrix() const {
    std::array<Rational, 4> m{1, 0, 0, 1};
    if (axis_swap) m = {0, 1, 1, 0};
    if (rotation != 0) {
        const Rational& s = rotation;
        Rational c = (1 - s * s) / (1 + s * s), sn = 2 * s / (1 + s * s);
        m = multiply({c, -sn, sn, c}, m);
    }
    if (shear != 0) m = multiply({1, shear, 0, 1}, m);
    return m;
}

std::array<Rational, 4> ProjectionSpec::inverse() const {
    auto m = matrix();
    Rational det = m[0] * m[3] - m[1] * m[2];
    return {m[3] / det, -m[1] / det, -m[2] / det, m[0] / det};
}

std::array<double, 4> ProjectionSpec::matrix_double() const { return to_double(matrix()); }
std::array<double, 4> ProjectionSpec::inverse_double() const { return to_double(inverse()); }

std::array<Rational, 2> ProjectionSpec::forward(const Rational& x, const Rational& y) const {
    auto m = matrix();
    return {m[0] * x + m[1] * y, m[2] * x + m[3] * y};
}

std::array<Rational, 2> ProjectionSpec::backward(const Rational& u, const Rational& v) const {
    auto m = inverse();
    return {m[0] * u + m[1] * v, m[2] * u + m[3] * v};
}

Polynomial ProjectionSpec::transform(const Polynomial& p) const {
    if (*this == identity()) return p;
    auto m = inverse();
    Polynomial u = Polynomial::variable(2, 0), v = Polynomial::variable(2, 1);
    std::vector<Polynomial> images{m[0] * u + m[1] * v, m[2] * u + m[3] * v};
    return p.compose(images);
}

Interval ProjectionSpec::base_range(const Box& box) const {
    auto m = matrix();
    Rational lo, hi;
    bool first = true;
    for (const Rational& x : {box.xlo, box.xhi})
        for (const Rational& y : {box.ylo, box.yhi}) {
            Rational u = m[0] * x + m[1] * y;
            if (first || u < lo) lo = u;
            if (first || u > hi) hi = u;
            first = false;
        }
    return Interval(lo, hi);
}

std::string ProjectionSpec::to_string() const {
    std::string out;
    auto add = [&](const std::string& part) { out += (out.empty() ? "" : "+") + part; };
    if (axis_swap) add("swap");
    if (rotation != 0) add("rot(" + subalip::to_string(rotation) + ")");
    if (shear != 0) add("shear(" + subalip::to_string(shear) + ")");
    return out.empty() ? "identity" : out;
}

std::vector<ProjectionSpec> default_projection_candidates() {
    return {ProjectionSpec::identity(), ProjectionSpec::swap(), ProjectionSpec::sheared(1), ProjectionSpec::sheared(-1),
            ProjectionSpec::sheared(make_rational(1, 2))};
}

}  // namespace subalip
