#include "subalip/roots.hpp"

#include <cmath>
#include <algorithm>
#include <stdexcept>

namespace subalip {

Interval::Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (hi < lo) throw std::invalid_argument("interval with lo > hi");
}

IsolatedRoot::IsolatedRoot(UPoly poly, Interval interval, int index)
    : poly_(std::move(poly)), interval_(std::move(interval)), index_(index) {
    if (!is_rational()) {
        sign_lo_ = poly_.sign_at(interval_.lo);
        if (sign_lo_ == 0 || poly_.sign_at(interval_.hi) != -sign_lo_)
            throw std::invalid_argument("isolating interval without sign change");
    }
}

IsolatedRoot IsolatedRoot::exact(const Rational& value) {
    return IsolatedRoot(UPoly({-value, Rational(1)}), Interval(value, value), 0);
}

void IsolatedRoot::refine(const Rational& width) {
    while (!is_rational() && interval_.width() >= width) {
        Rational m = interval_.midpoint();
        int s = poly_.sign_at(m);
        if (s == 0) {
            interval_ = Interval(m, m);
        } else if (s == sign_lo_) {
            interval_.lo = m;
        } else {
            interval_.hi = m;
        }
    }
    has_double_ = false;
}

double IsolatedRoot::to_double() const {
    if (has_double_) return cached_double_;
    IsolatedRoot copy = *this;
    Rational scale = std::max(abs(interval_.lo), abs(interval_.hi));
    if (scale < 1) scale = 1;
    Rational width = scale;
    mpq_div_2exp(width.get_mpq_t(), scale.get_mpq_t(), 60);
    copy.refine(width);
    cached_double_ = copy.interval_.midpoint().get_d();
    has_double_ = true;
    return cached_double_;
}

Rational IsolatedRoot::approximation(const Rational& tolerance) const {
    IsolatedRoot copy = *this;
    copy.refine(tolerance);
    return copy.interval_.midpoint();
}

int IsolatedRoot::compare(const Rational& q) const {
    if (is_rational()) return sgn(interval_.lo - q);
    if (q <= interval_.lo) return 1;
    if (q >= interval_.hi) return -1;
    int s = poly_.sign_at(q);
    if (s == 0) return 0;
    return s == sign_lo_ ? 1 : -1;
}

namespace {

// Roots of squarefree g inside the closed interval [lo, hi].
int count_roots_closed(const UPoly& g, const Rational& lo, const Rational& hi) {
    if (lo == hi) return g.sign_at(lo) == 0 ? 1 : 0;
    int n = count_roots_open(g, lo, hi);
    if (g.sign_at(lo) == 0) ++n;
    if (g.sign_at(hi) == 0) ++n;
    return n;
}

}  // namespace

bool same_number(IsolatedRoot& a, IsolatedRoot& b) { return compare(a, b) == 0; }

int compare(IsolatedRoot& a, IsolatedRoot& b) {
    if (a.is_rational()) return -b.compare(a.interval().lo);
    if (b.is_rational()) return a.compare(b.interval().lo);
    // Equal iff the gcd has a root in the intersection of both intervals.
    Rational lo = std::max(a.interval().lo, b.interval().lo);
    Rational hi = std::min(a.interval().hi, b.interval().hi);
    if (lo <= hi) {
        UPoly g = gcd(a.poly(), b.poly());
        if (g.degree() >= 1 && count_roots_closed(g, lo, hi) > 0) return 0;
    }
    for (;;) {
        if (a.interval().hi < b.interval().lo) return -1;
        if (b.interval().hi < a.interval().lo) return 1;
        if (a.interval().hi == b.interval().lo && !(a.is_rational() && b.is_rational())) return -1;
        if (b.interval().hi == a.interval().lo && !(a.is_rational() && b.is_rational())) return 1;
        a.refine(a.interval().width() / 2);
        b.refine(b.interval().width() / 2);
        if (a.is_rational()) return -b.compare(a.interval().lo);
        if (b.is_rational()) return a.compare(b.interval().lo);
    }
}

int sign_at(const UPoly& q, IsolatedRoot& r) {
    if (r.is_rational()) return q.sign_at(r.interval().lo);
    if (q.is_zero()) return 0;
    UPoly g = gcd(q, r.poly());
    if (g.degree() >= 1 && count_roots_open(g, r.interval().lo, r.interval().hi) > 0) return 0;
    UPoly qs = square_free_part(q);
    while (count_roots_open(qs, r.interval().lo, r.interval().hi) > 0) {
        r.refine(r.interval().width() / 2);
        if (r.is_rational()) return q.sign_at(r.interval().lo);
    }
    return q.sign_at(r.interval().midpoint());
}

Rational root_bound(const UPoly& p) {
    if (p.degree() <= 0) return 1;
    Rational m = 0;
    for (int i = 0; i < p.degree(); ++i) m = std::max(m, Rational(abs(p.coeff(i) / p.leading())));
    return 1 + m;
}

int descartes_variations(const UPoly& p, const Rational& lo, const Rational& hi) {
    // x = lo + (hi - lo) * s maps (0,1) to (lo,hi); s = 1/(1+t) maps (0,inf) to (0,1).
    UPoly unit = p.taylor_shift(lo).scale(hi - lo);
    UPoly positive = unit.reversed().taylor_shift(1);
    return sign_variations(positive.coeffs());
}

int count_roots_open(const UPoly& squarefree, const Rational& lo, const Rational& hi) {
    if (squarefree.degree() <= 0 || !(lo < hi)) return 0;
    int v = descartes_variations(squarefree, lo, hi);
    if (v <= 1) return v;
    Rational m = (lo + hi) / 2;
    int at_mid = squarefree.sign_at(m) == 0 ? 1 : 0;
    return count_roots_open(squarefree, lo, m) + at_mid + count_roots_open(squarefree, m, hi);
}

namespace {

void isolate_open(const UPoly& p, const Rational& lo, const Rational& hi, std::vector<IsolatedRoot>& out) {
    int v = descartes_variations(p, lo, hi);
    if (v == 0) return;
    if (v == 1 && p.sign_at(lo) != 0 && p.sign_at(hi) != 0) {
        out.emplace_back(p, Interval(lo, hi), 0);
        return;
    }
    Rational m = (lo + hi) / 2;
    isolate_open(p, lo, m, out);
    if (p.sign_at(m) == 0) out.push_back(IsolatedRoot(p, Interval(m, m), 0));
    isolate_open(p, m, hi, out);
}

}  // namespace

std::vector<IsolatedRoot> isolate_real_roots(const UPoly& p, const Interval& range) {
    if (p.is_zero()) throw std::invalid_argument("isolate_real_roots: zero polynomial");
    std::vector<IsolatedRoot> out;
    if (p.degree() == 0) return out;
    UPoly sf = square_free_part(p);
    if (range.lo == range.hi) {
        if (sf.sign_at(range.lo) == 0) out.push_back(IsolatedRoot(sf, range, 0));
        return out;
    }
    if (sf.sign_at(range.lo) == 0) out.push_back(IsolatedRoot(sf, Interval(range.lo, range.lo), 0));
    isolate_open(sf, range.lo, range.hi, out);
    if (sf.sign_at(range.hi) == 0) out.push_back(IsolatedRoot(sf, Interval(range.hi, range.hi), 0));
    for (std::size_t i = 0; i < out.size(); ++i) out[i].set_index(static_cast<int>(i));
    return out;
}

std::vector<IsolatedRoot> isolate_real_roots(const UPoly& p) {
    Rational b = root_bound(p);
    return isolate_real_roots(p, Interval(-b, b));
}

}  // namespace subalip

namespace subalip {

namespace {

double horner(const std::vector<double>& c, double t) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
    return acc;
}

}  // namespace

std::vector<double> real_roots_numeric(const std::vector<double>& coeffs, double lo, double hi) {
    std::vector<double> c = coeffs;
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    if (c.size() <= 1) return {};
    if (c.size() == 2) {
        double r = -c[0] / c[1];
        if (r >= lo && r <= hi) return {r};
        return {};
    }
    std::vector<double> dc(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) dc[i - 1] = c[i] * static_cast<double>(i);
    std::vector<double> knots{lo};
    for (double r : real_roots_numeric(dc, lo, hi))
        if (r > knots.back()) knots.push_back(r);
    if (hi > knots.back()) knots.push_back(hi);

    std::vector<double> roots;
    double scale = 0.0;
    for (double x : c) scale = std::max(scale, std::abs(x));
    const double zero_tol = scale * 1e-14;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        double a = knots[k], b = knots[k + 1];
        double fa = horner(c, a), fb = horner(c, b);
        if (std::abs(fa) <= zero_tol) {
            if (roots.empty() || a - roots.back() > 1e-12 * std::max(1.0, std::abs(a))) roots.push_back(a);
            continue;
        }
        if (std::abs(fb) <= zero_tol) continue;  // picked up as the next piece's left end
        if ((fa < 0) == (fb < 0)) continue;
        for (int it = 0; it < 200 && b - a > 0; ++it) {
            double m = 0.5 * (a + b);
            if (m <= a || m >= b) break;
            double fm = horner(c, m);
            if (fm == 0.0) {
                a = b = m;
                break;
            }
            if ((fm < 0) == (fa < 0)) a = m, fa = fm;
            else b = m;
        }
        roots.push_back(0.5 * (a + b));
    }
    if (std::abs(horner(c, hi)) <= zero_tol && (roots.empty() || hi - roots.back() > 1e-12 * std::max(1.0, std::abs(hi))))
        roots.push_back(hi);
    return roots;
}

}  // namespace subalip
