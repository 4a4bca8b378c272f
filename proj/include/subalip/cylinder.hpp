#pragma once

#include "subalip/formula.hpp"
#include "subalip/projection.hpp"
#include "subalip/roots.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace subalip {

class UnboundedSetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoFiniteProjectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when the fiber root count changes inside a base cell, i.e. the
// discriminant set missed a point.
class BranchCountError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Why a base point was added. A point can carry several reasons.
enum Provenance : unsigned {
    SingularImage = 1u << 0,        // root of a pairwise resultant
    CriticalValue = 1u << 1,        // root of a fiber discriminant
    BoundaryEndpoint = 1u << 2,     // leading coefficient vanishes, a branch escapes
    NonFinitenessRepair = 1u << 3,  // a vertical line lies in the zero set
    SlopeLocus = 1u << 4,           // supplied by the caller (slope conditions)
};
std::string provenance_string(unsigned flags);

struct DiscriminantSet {
    std::vector<IsolatedRoot> points;  // sorted, isolating intervals disjoint
    std::vector<unsigned> provenance;  // Provenance flags per point
};

struct Cell1D {
    enum class Kind { Point, Open };
    Kind kind = Kind::Open;
    // For a point cell lo and hi are the same number. Box edges are exact roots.
    IsolatedRoot lo = IsolatedRoot::exact(0);
    IsolatedRoot hi = IsolatedRoot::exact(0);
    bool lo_is_box = false;
    bool hi_is_box = false;
    // Rational sample strictly inside an open cell; unused for points.
    Rational sample;

    bool is_point() const { return kind == Kind::Point; }
    // Exact membership of a base coordinate.
    bool contains(const Rational& u) const;
    bool contains(double u) const;
};

// The branch_index-th distinct real root (0-based, increasing) of
// poly(u, .) for u in the base cell; poly is in the projected coordinates.
struct RootFunction {
    Polynomial poly{2};
    int branch_index = 0;
    Cell1D base;

    // Exact branch value over a rational base point.
    IsolatedRoot at(const Rational& u) const;
};

// Fast floating-point evaluation of a RootFunction.
class BranchEvaluator {
public:
    explicit BranchEvaluator(const RootFunction& f);
    // NaN when the fiber has too few real roots (only near the cell ends).
    double operator()(double u) const;

private:
    std::vector<std::vector<double>> coeffs_;  // coefficient of v^k as a polynomial in u
    int index_;
};

struct CylindricalCell {
    Cell1D base;
    RootFunction lower;
    RootFunction upper;
    Rational sample_u, sample_v;  // a point of the cell in projected coordinates
};

std::vector<Polynomial> boundary_polynomials(const Formula& U, const Box& box);

ProjectionSpec ensure_finite_projection(const Formula& U, const std::vector<ProjectionSpec>& candidates);

// Base points for the boundary polynomials of U under proj, plus the real
// roots of any extra univariate polynomials in u (tagged SlopeLocus).
DiscriminantSet discriminant_set(const Formula& U, const ProjectionSpec& proj,
                                 const std::vector<UPoly>& extra = {});

// Same, for a family already written in projected coordinates (u, v).
DiscriminantSet discriminant_set_of(const std::vector<Polynomial>& projected_family, const std::vector<UPoly>& extra = {});

// Square-free primitive parts in v of a projected family, dropping members
// that do not depend on v, without duplicates.
std::vector<Polynomial> fiber_family(const std::vector<Polynomial>& projected_family);

// A dyadic rational strictly between two numbers a < b, in the middle third.
Rational rational_between(IsolatedRoot a, IsolatedRoot b);

std::vector<Cell1D> base_cells(const DiscriminantSet& d, const Interval& box);

// The sorted fiber over a rational base point: distinct real roots of the
// boundary polynomials with, for each root, the owning polynomial and its
// ordinal among that polynomial's roots.
struct Fiber {
    Rational u;
    std::vector<IsolatedRoot> roots;
    std::vector<int> owner;
    std::vector<int> ordinal;
    // Rational samples of the k+1 open sectors, bottom to top.
    std::vector<Rational> sector_samples;
};
Fiber fiber_at(const std::vector<Polynomial>& projected_boundary, const Rational& u);

std::vector<CylindricalCell> lift_cells(const Formula& U, const ProjectionSpec& proj, const std::vector<Cell1D>& cells);

// Exact membership of the original-coordinate point (x, y).
bool cyl_membership(const CylindricalCell& c, const ProjectionSpec& proj, const Rational& x, const Rational& y);

struct CylindricalDecomposition {
    ProjectionSpec proj;
    Box box;
    Interval base_range;
    std::vector<Polynomial> boundary;  // projected, primitive in v, square-free
    DiscriminantSet disc;
    std::vector<Cell1D> cells;
    std::vector<CylindricalCell> cylinders;
};

// boundary_polynomials + ensure_finite_projection + discriminant_set +
// base_cells + lift_cells.
CylindricalDecomposition decompose(const Formula& U, const Box& box,
                                   const std::vector<ProjectionSpec>& candidates = default_projection_candidates());
// Same, with the projection fixed by the caller.
CylindricalDecomposition decompose_with(const Formula& U, const Box& box, const ProjectionSpec& proj);

// Interval endpoints as exact rationals, or "[lo, hi]" isolating intervals
// with the defining polynomial.
nlohmann::json to_json(const IsolatedRoot& r);
nlohmann::json to_json(const CylindricalDecomposition& d);

// The projected, square-free boundary polynomials used for lifting: each
// atom polynomial's primitive part in v (nonconstant ones only).
std::vector<Polynomial> projected_boundary(const Formula& U, const ProjectionSpec& proj);

}  // namespace subalip
