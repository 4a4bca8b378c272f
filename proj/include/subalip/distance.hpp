#pragma once

#include "subalip/cylinder.hpp"
#include "subalip/formula.hpp"
#include "subalip/projection.hpp"

#include <vector>

namespace subalip {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Point& a, const Point& b);

// Nearest-neighbour queries over a fixed point set, bucketed on a uniform grid.
class PointCloud {
public:
    PointCloud() = default;
    explicit PointCloud(std::vector<Point> points);

    bool empty() const { return points_.empty(); }
    std::size_t size() const { return points_.size(); }
    const std::vector<Point>& points() const { return points_; }

    // Distance to the nearest point (infinity when empty); optionally returns it.
    double nearest(const Point& q, Point* witness = nullptr) const;

private:
    std::vector<Point> points_;
    double x0_ = 0, y0_ = 0, cell_ = 1;
    int nx_ = 0, ny_ = 0;
    std::vector<std::vector<int>> buckets_;
};

// Coefficients in t of p restricted to the line (x, y) = (a + b t, c + d t).
std::vector<double> restrict_to_line(const Polynomial& p, double a, double b, double c, double d);

// Points of the zero set of p in the box, found on `lines` equally spaced
// vertical and `lines` horizontal lines.
std::vector<Point> sample_zero_set(const Polynomial& p, const Box& box, int lines);

// Zero-set samples of the atoms of U that lie on the topological boundary:
// a sample is kept when its small neighbourhood meets both U and its complement.
std::vector<Point> sample_boundary(const Formula& U, const Box& box, int lines);

// Boundary of a cylinder, in original coordinates: both branch graphs and the
// two vertical sides over the base endpoints. `spacing` is the target gap
// between consecutive samples.
std::vector<Point> sample_cylinder_boundary(const CylindricalCell& c, const ProjectionSpec& proj, double spacing);

// Distance to a sampled set with an explicit error bound: the true distance
// lies within `tolerance` of the returned value.
class DistanceField {
public:
    DistanceField() = default;
    DistanceField(std::vector<Point> samples, double tolerance);

    double operator()(const Point& p) const { return cloud_.nearest(p); }
    double nearest(const Point& p, Point* witness) const { return cloud_.nearest(p, witness); }
    double tolerance() const { return tolerance_; }
    std::size_t sample_count() const { return cloud_.size(); }
    bool empty() const { return cloud_.empty(); }

private:
    PointCloud cloud_;
    double tolerance_ = 0.0;
};

// Sample spacing along the boundary is at most box extent / lines * sqrt(2).
DistanceField boundary_distance_field(const Formula& U, const Box& box, int lines = 4096);

}  // namespace subalip
