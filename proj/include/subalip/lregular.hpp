#pragma once

#include "subalip/cylinder.hpp"
#include "subalip/distance.hpp"

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace subalip {

// No frame in the refinement list brings a cell's bounding branches under
// the slope bound within the depth limit.
class FrameExhaustionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One cell of an L-regular decomposition, described in the coordinates (u, v)
// of `frame`.
//  Sector:  {u in base, lower(u) < v < upper(u)}, open, dimension 2.
//  Graph:   {u in base, v = graph(u)}; when `transposed` the branch is steep
//           and is a graph over v instead, with slope measured as du/dv.
//  Segment: the open vertical segment (a, b) over a base point (original
//           coordinates, numeric ends).
//  Point:   the single point a.
struct LRegularCell {
    enum class Shape { Point, Segment, Graph, Sector };
    Shape shape = Shape::Sector;
    ProjectionSpec frame;
    Cell1D base;
    RootFunction lower, upper;
    RootFunction graph;
    bool transposed = false;
    Point a, b;
    Rational sample_u, sample_v;  // Sector: a rational interior point (frame coordinates)
    double M = 0.0;               // recorded slope bound
    int level = 0;                // refinement depth that produced the cell

    int dim() const;
    CylindricalCell cylinder() const;  // Sector only
};

// Floating-point membership for a Sector.
class SectorEvaluator {
public:
    explicit SectorEvaluator(const LRegularCell& c);
    bool contains(const Point& p) const;
    std::array<double, 2> to_frame(const Point& p) const;
    Point from_frame(double u, double v) const;
    double lower(double u) const { return lower_(u); }
    double upper(double u) const { return upper_(u); }
    double lo() const { return lo_; }
    double hi() const { return hi_; }

private:
    BranchEvaluator lower_, upper_;
    double lo_, hi_;
    std::array<double, 4> m_, inv_;
};

// Disjoint cells whose union is U, each with |slope| <= C1 in its own frame.
std::vector<LRegularCell> lregular_decompose(const Formula& U, double C1, const Box& box = Box{-2, 2, -2, 2});

// The open cells of one frame's decomposition of U (cut additionally at the
// slope loci), merged through walls inside U, whose bounding branches
// satisfy |slope| <= C1. No refinement.
std::vector<LRegularCell> slope_regular_cells(const Formula& U, double C1, const ProjectionSpec& frame,
                                              const Box& box = Box{-2, 2, -2, 2});

// Sectors stacked over one base whose common wall lies inside U are merged
// into one open cell, so the remaining walls lie on the boundary of U.
std::vector<LRegularCell> merge_interior_walls(const Formula& U, std::vector<LRegularCell> cells);

// |dv/du| of a branch at a rational base point (du/dv when transposed),
// from the implicit derivative -P_u / P_v.
double branch_slope(const RootFunction& f, const Rational& u, bool transposed = false);

struct SlopeCheck {
    bool pass = true;
    double max_slope = 0.0;
};
// Samples the open base uniformly at rational points.
SlopeCheck check_lregular(const LRegularCell& cell, int samples = 128);

struct QuasiConvexityReport {
    double max_ratio = 0.0;
    int pairs = 0;
};
// Ratio path length / distance over random point pairs of a Sector. A path
// goes vertically to a level curve (fixed fraction between the two bounding
// branches), follows it, and goes vertically to the end point.
QuasiConvexityReport quasiconvexity_estimate(const LRegularCell& cell, int pairs = 200, std::uint64_t seed = 1);

nlohmann::json to_json(const LRegularCell& c);
nlohmann::json to_json(const std::vector<LRegularCell>& cells);

}  // namespace subalip
