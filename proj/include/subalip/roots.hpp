#pragma once

#include "subalip/rational.hpp"
#include "subalip/upoly.hpp"

#include <vector>

namespace subalip {

struct Interval {
    Rational lo;
    Rational hi;

    Interval() = default;
    Interval(Rational l, Rational h);
    Rational width() const { return hi - lo; }
    Rational midpoint() const { return (lo + hi) / 2; }
    bool contains(const Rational& q) const { return lo <= q && q <= hi; }
};

// A real algebraic number: the unique root of a square-free polynomial in a
// rational interval. Either lo == hi (an exact rational root), or the root is
// interior and poly is nonzero with opposite signs at both endpoints.
class IsolatedRoot {
public:
    IsolatedRoot(UPoly poly, Interval interval, int index);
    static IsolatedRoot exact(const Rational& value);

    const UPoly& poly() const { return poly_; }
    const Interval& interval() const { return interval_; }
    int index() const { return index_; }
    void set_index(int i) { index_ = i; }
    bool is_rational() const { return interval_.lo == interval_.hi; }

    // Shrinks the isolating interval below the given width (bisection).
    void refine(const Rational& width);
    double to_double() const;
    // A rational within `tolerance` of the root.
    Rational approximation(const Rational& tolerance) const;

    // sign(root - q)
    int compare(const Rational& q) const;

private:
    UPoly poly_;
    Interval interval_;
    int index_;
    int sign_lo_ = 0;
    mutable double cached_double_ = 0.0;
    mutable bool has_double_ = false;
};

// sign(a - b) for two algebraic numbers; refines both as needed.
int compare(IsolatedRoot& a, IsolatedRoot& b);
bool same_number(IsolatedRoot& a, IsolatedRoot& b);
// Sign of q at the algebraic number r.
int sign_at(const UPoly& q, IsolatedRoot& r);

// Upper bound on the absolute value of every complex root (Cauchy).
Rational root_bound(const UPoly& p);

// Number of sign variations of p transformed to the open interval (lo, hi);
// an upper bound on the number of roots there, exact when it is 0 or 1.
int descartes_variations(const UPoly& p, const Rational& lo, const Rational& hi);

// Real roots of square_free_part(p) in the closed interval range, sorted and
// pairwise disjoint. Production path: Descartes-rule bisection.
std::vector<IsolatedRoot> isolate_real_roots(const UPoly& p, const Interval& range);
std::vector<IsolatedRoot> isolate_real_roots(const UPoly& p);

// Floating-point real roots of sum c[i] t^i in [lo, hi], found by splitting
// at the roots of the derivative and bisecting each monotone piece. Roots of
// even multiplicity are reported only when they hit machine zero.
std::vector<double> real_roots_numeric(const std::vector<double>& coeffs, double lo, double hi);

// Exact count of distinct real roots in (lo, hi) for a square-free polynomial.
int count_roots_open(const UPoly& squarefree, const Rational& lo, const Rational& hi);

}  // namespace subalip
