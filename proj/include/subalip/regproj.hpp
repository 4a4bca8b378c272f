#pragma once

#include "subalip/cylinder.hpp"
#include "subalip/distance.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace subalip {

// The open double cone {apex + lambda (eta, 1) : |eta - xi| < eps, lambda != 0},
// written in the coordinates of `frame` (a swap and/or rotation; no shear).
struct ConeSpec {
    Point apex;
    double xi = 0.0;
    double eps = 0.25;
    ProjectionSpec frame;
    // When set, only intersections inside this box count: X is the compact
    // part of the zero sets, not their unbounded continuation.
    std::optional<Box> window;

    // The projection parallel to (xi, 1) in frame coordinates: frame followed by shear -xi.
    ProjectionSpec projection() const;
    bool contains(const Point& p) const;
};

struct BranchTrace {
    int poly = 0;    // index into X
    int ordinal = 0; // position among that polynomial's roots on each line
    std::vector<std::pair<double, double>> samples;  // (eta, lambda), eta increasing
    bool clean = true;
    std::string issue;
};

struct RegularityReport {
    bool finite = true;
    int branch_count = 0;
    bool clean = true;
    double gradient_ratio_max = 0.0;
    double C = 0.0;
    bool verdict = false;
    std::vector<BranchTrace> traces;
};

// Sweeps 2 * steps values of eta across the aperture (spacing eps / steps)
// and follows the real lambda solutions of each polynomial.
std::vector<BranchTrace> trace_branches(const std::vector<Polynomial>& X, const ConeSpec& cone, int steps = 32);

RegularityReport check_regularity(const std::vector<Polynomial>& X, const ConeSpec& cone, double C, int steps = 32);

std::optional<std::size_t> find_regular_direction(const std::vector<Polynomial>& X, const Point& x0,
                                                  const std::vector<double>& candidates, double C, double eps,
                                                  const ProjectionSpec& frame = {}, int steps = 32,
                                                  const std::optional<Box>& window = std::nullopt);

// Starting at eps = 1/4, halves the aperture until no point of X lying over
// the discriminant set of cone.projection() is inside the cone, or eps < 2^-10.
double choose_aperture(const std::vector<Polynomial>& X, const DiscriminantSet& disc, ConeSpec cone);

struct ConeDistanceReport {
    bool pass = true;
    bool degenerate = false;  // X minus the cone is empty
    double distance_outside_cone = 0.0;
    double distance_to_discriminant = 0.0;
    double ratio = 0.0;
};

// dist(x0, X \ cone) <= Ct * dist(x0', disc) with X given by boundary samples
// and disc the discriminant set of cone.projection().
ConeDistanceReport cone_distance_check(const std::vector<Point>& boundary_samples, const ConeSpec& cone,
                                       const DiscriminantSet& disc, double Ct);

nlohmann::json to_json(const RegularityReport& r);

}  // namespace subalip
