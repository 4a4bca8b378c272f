#pragma once

#include "subalip/cover.hpp"
#include "subalip/lipball.hpp"
#include "subalip/regproj.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace subalip {

// The n x n pixels of a box; pixel (i, j) has the exact center
// (xlo + (i + 1/2) w / n, ylo + (j + 1/2) h / n).
class RasterGrid {
public:
    explicit RasterGrid(int resolution = 512, const Box& box = Box{-2, 2, -2, 2});

    int resolution() const { return n_; }
    const Box& box() const { return box_; }
    Rational center_x(int i) const;
    Rational center_y(int j) const;
    Point center(int i, int j) const;
    double pixel_diagonal() const;

private:
    int n_;
    Box box_;
};

// Row-major bits, bit (i, j) at index j * n + i.
struct Bitmap {
    int resolution = 0;
    std::vector<std::uint8_t> bits;

    bool at(int i, int j) const { return bits[static_cast<std::size_t>(j) * resolution + i] != 0; }
    long count() const;
};

// Exact membership of every pixel center; uses nothing but the formula.
Bitmap rasterize_formula(const Formula& U, const RasterGrid& grid);

struct Witness {
    Point p;
    std::string what;
};

struct VerificationReport {
    std::string check;
    int tested = 0;
    int excluded = 0;
    long mismatch_count = 0;
    std::vector<Witness> mismatches;  // the first few, in scan order
    bool pass = true;
    double delta = 0.0;
    double seconds = 0.0;

    // Fraction of tested points without a mismatch.
    double agreement() const;
};

// max(4 * pixel diagonal, 2 * the extension error of s).
double minimum_tube_width(const SignedCombination& s, const RasterGrid& grid);

// Pixels farther than delta from the boundary of U and from every region
// boundary must satisfy eval_signed_combination = 1_U. delta < 0 means the
// minimum; a smaller positive delta is rejected. `random_points` extra
// rational points of the box, drawn from `seed`, are checked the same way.
VerificationReport compare_indicators(const Formula& U, const SignedCombination& s, const RasterGrid& grid,
                                      double delta = -1.0, int random_points = 0, std::uint64_t seed = 0);

// Coverage and dist(x, bd U) <= C max_i dist(x, bd U_i) at the pixels of U
// past the cover's delta-tube, at the cover's C.
VerificationReport verify_cover(const Formula& U, const RegularCover& cover, const RasterGrid& grid);

// Traces of one regularity check, drawn in original coordinates.
struct TracePlot {
    ConeSpec cone;
    std::vector<BranchTrace> traces;
};

struct PlotArtifacts {
    std::optional<Formula> set;
    std::vector<LRegularCell> cells;
    std::vector<LRegularCell> pieces;
    std::vector<std::shared_ptr<const LipschitzBallRegion>> regions;
    std::vector<TracePlot> traces;
    Box view{-2, 2, -2, 2};
};

// Layers: set (pixel runs), boundary, cells, cover, regions, traces.
std::string render_svg(const PlotArtifacts& a);
// Throws std::runtime_error when the file cannot be written.
void plot_svg(const PlotArtifacts& a, const std::string& path);

// Report JSON without timing, so equal inputs give equal bytes.
nlohmann::json to_json(const VerificationReport& r, bool with_timing = false);

// The named planar sets used throughout the tests and the acceptance run.
std::vector<std::pair<std::string, std::string>> corpus();

}  // namespace subalip
