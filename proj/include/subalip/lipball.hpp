#pragma once

#include "subalip/lregular.hpp"

#include <json.hpp>

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace subalip {

// The sampled Lipschitz quotient exceeds the requested constant; a and b are
// the neighbouring samples (point, value) where the quotient is largest.
class ExtensionRejected : public std::runtime_error {
public:
    ExtensionRejected(const std::string& what, std::pair<double, double> a, std::pair<double, double> b)
        : std::runtime_error(what), a(a), b(b) {}
    std::pair<double, double> a, b;
};

// f~(p) = offset + max_q (f(q) - L |p - q|) over a finite sample of the base.
// Exact at the samples when f is L-Lipschitz there; between samples it may
// undershoot f by at most 2 L h (h the largest sample gap).
class LipschitzFunctionExtension {
public:
    LipschitzFunctionExtension() = default;
    // samples: (point, value) pairs; rejects when some quotient exceeds L(1 + 1e-6).
    LipschitzFunctionExtension(std::vector<std::pair<double, double>> samples, double L, double offset = 0.0);
    static LipschitzFunctionExtension constant(double c);
    // Same sample set as `other`, new L and offset.
    static LipschitzFunctionExtension sharing(const LipschitzFunctionExtension& other, double L, double offset);

    double operator()(double p) const;
    LipschitzFunctionExtension shifted(double delta) const;

    double L() const { return L_; }
    double offset() const { return offset_; }
    const std::vector<std::pair<double, double>>& samples() const { return *samples_; }
    double max_gap() const { return max_gap_; }
    double max_quotient() const { return max_quotient_; }
    // Syntactic identity: the shared sample set, L and offset.
    std::string key() const;

private:
    std::shared_ptr<const std::vector<std::pair<double, double>>> samples_;
    double L_ = 0.0;
    double offset_ = 0.0;
    double fmax_ = 0.0;
    double max_gap_ = 0.0;
    double max_quotient_ = 0.0;
    std::size_t steepest_ = 0;  // max_quotient_ is attained between samples steepest_ - 1 and steepest_

    [[noreturn]] void reject(const std::vector<std::pair<double, double>>& samples, double L) const;
};

// Samples f at `samples` points of its open base (ends pulled in by 1e-9 of
// the width, standing in for the one-sided limits).
LipschitzFunctionExtension mcshane_extend(const RootFunction& f, double L, double offset = 0.0, int samples = 256);

// dim 1: the open interval (lo, hi) of the base coordinate.
// dim 2: {base coordinate in (lo, hi), lower(u) < fiber coordinate < upper(u)}.
// Coordinates are (u, v) = m (x, y) for an invertible 2x2 matrix m.
struct LipschitzBallRegion {
    int dim = 2;
    std::array<double, 4> m{1, 0, 0, 1};
    double lo = 0.0, hi = 0.0;
    LipschitzFunctionExtension lower, upper;

    bool contains(const Point& p) const;
    std::string key() const;
};

struct SignedTerm {
    int coefficient = 0;
    std::shared_ptr<const LipschitzBallRegion> region;
};

struct SignedCombination {
    std::vector<SignedTerm> terms;

    // Adds coefficients of syntactically identical regions, dropping zeros.
    void add(int coefficient, std::shared_ptr<const LipschitzBallRegion> region);
    void append(const SignedCombination& other);
    // Largest 2 L h over all extensions: the extension error bound.
    double extension_error() const;
};

// +U_{f-1,g} + U_{f,g+1} - U_{f-1,g+1}, with L = 1.25 M.
SignedCombination decompose_open_cell(const LRegularCell& cell, int samples = 256);
// Graph, Segment and Point cells: + the strip h-1 < z < h+1, minus its two
// halves (for a point: the 2-d instance, 1 - 2 - 2 + 4 boxes).
SignedCombination decompose_graph_cell(const LRegularCell& cell, int samples = 256);
SignedCombination decompose_indicator(const Formula& U, double C1 = 1.0, const Box& box = Box{-2, 2, -2, 2},
                                      int samples = 256);

int eval_signed_combination(const SignedCombination& s, const Point& p);

struct BallCertificate {
    bool certified = true;
    std::vector<std::string> violations;
    int depth = 0;
    double L_lower = 0.0, L_upper = 0.0;
    double gap = 0.0;  // min (upper - lower) over the closed base
};
BallCertificate certify_ball(const LipschitzBallRegion& r, int grid = 512);

// Points on the boundary of a region (original coordinates), at most
// `spacing` apart along each piece.
std::vector<Point> sample_region_boundary(const LipschitzBallRegion& r, double spacing);

nlohmann::json to_json(const LipschitzBallRegion& r);
// A list of {coefficient, region}; each sample set's data is written once, with
// the first extension that uses it.
nlohmann::json to_json(const SignedCombination& s);
// Inverse of to_json; throws std::invalid_argument or nlohmann::json errors.
SignedCombination signed_combination_from_json(const nlohmann::json& j);

}  // namespace subalip
