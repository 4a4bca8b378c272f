#pragma once

#include "subalip/lregular.hpp"

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace subalip {

// A test point of U lies in no piece, even after the extra random shears.
class CoverageGapError : public std::runtime_error {
public:
    CoverageGapError(const std::string& what, Point witness) : std::runtime_error(what), witness(witness) {}
    Point witness;
};

// Distance from p to the sampled boundary of U (at least 4096 boundary lines).
double distance_to_boundary(const Formula& U, const Point& p, const Box& box = Box{-2, 2, -2, 2});
// Distance from p to the sampled boundary of an open cell.
double distance_to_boundary(const LRegularCell& cell, const Point& p, double spacing = 1e-3);

// Pieces are open cells (Sector shape) in the frame that produced them. Plain
// cylinders carry M = 0 (no slope bound claimed).
struct CoverPiece {
    LRegularCell cell;
    int projection = 0;  // index into RegularCover::projections
};

struct RegularCover {
    std::vector<ProjectionSpec> projections;
    std::vector<CoverPiece> pieces;
    bool lregular = false;
    double C1 = 0.0;
    // Measurement: grid centers of U at distance > delta from the boundary.
    Box box;
    int grid = 0;
    double delta = 0.0;
    int tested = 0;
    double C = 0.0;
    Point tight;  // a test point where the ratio equals C
    int random_shears = 0;
    std::uint64_t seed = 0;
};

struct CoverOptions {
    Box box{-2, 2, -2, 2};
    int grid = 128;
    int boundary_lines = 4096;
    double piece_spacing = 1e-3;
    int retries = 5;         // random rational shears tried after the fixed frames
    std::uint64_t seed = 0;
};

// Cylinders of the cylindrical decompositions under three finite projections
// (more when a gap forces random shears). Throws CoverageGapError.
RegularCover regular_cover(const Formula& U, const CoverOptions& opt = {});

// Open cells whose bounding branches have |slope| <= C1 in their own frame,
// collected over frames until the test grid is covered.
RegularCover lregular_cover(const Formula& U, double C1, const CoverOptions& opt = {});

// Per-piece membership and boundary distances for a built cover.
class CoverEvaluator {
public:
    CoverEvaluator(const RegularCover& cover, double spacing = 1e-3);
    // max over pieces containing p of dist(p, boundary of the piece); 0 when
    // p is in no piece.
    double max_piece_distance(const Point& p, int* piece = nullptr) const;
    bool covered(const Point& p) const;
    double tolerance() const { return tolerance_; }

private:
    std::vector<SectorEvaluator> evals_;
    std::vector<DistanceField> fields_;
    double tolerance_ = 0.0;
};

struct InductionCheck {
    bool in_cylinder = false;  // x0 lies in a cylinder over the base piece
    bool regular = false;      // check_regularity at x0 with (C, eps) = (32, 1/64)
    double dist_boundary_U1 = 0.0;
    double dist_X = 0.0;
    double dist_base = 0.0;    // horizontal distance to the vertical walls over the base ends
    double dist_disc = 0.0;    // same, to the nearest discriminant point
    double tolerance = 0.0;
    bool identity = false;     // |d(U1) - min(d(X), d(base))| <= 2 tolerance
    bool x_side = false;       // the minimum is realised by X
    bool hypothesis = false;   // d(disc) <= Ct d(base)
    bool conclusion = false;   // d(X) <= Ct^2 d(U1) (+ tolerance)
    bool pass = false;         // identity and (hypothesis implies conclusion)
};

// Holds the decomposition of U under one projection (cylinders merged through
// walls inside U, so their walls lie on the boundary) and the boundary field of U.
class InductionChecker {
public:
    InductionChecker(const Formula& U, const ProjectionSpec& proj, const Box& box = Box{-2, 2, -2, 2},
                     int boundary_lines = 4096);
    InductionCheck check(const Cell1D& base, const Point& x0, double Ct) const;
    // The base cell whose cylinder contains x0, when there is one.
    const Cell1D* base_of(const Point& x0) const;
    const CylindricalDecomposition& decomposition() const { return dec_; }

private:
    std::vector<Polynomial> X_;
    Box box_;
    CylindricalDecomposition dec_;
    std::vector<LRegularCell> cells_;
    DistanceField field_;
};

InductionCheck lem_induction_check(const Formula& U, const ProjectionSpec& proj, const Cell1D& base, const Point& x0,
                                   double Ct, const Box& box = Box{-2, 2, -2, 2});

nlohmann::json to_json(const RegularCover& c);
nlohmann::json to_json(const InductionCheck& r);

}  // namespace subalip
