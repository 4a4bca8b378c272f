#pragma once

#include "subalip/rational.hpp"

#include <string>
#include <vector>

namespace subalip {

// Dense univariate polynomial over Q; coeffs[i] multiplies t^i.
// Trailing zeros are trimmed, so the zero polynomial has no coefficients.
class UPoly {
public:
    UPoly() = default;
    explicit UPoly(std::vector<Rational> coeffs);
    static UPoly constant(const Rational& c);
    static UPoly monomial(const Rational& c, int degree);

    const std::vector<Rational>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    // -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const Rational& leading() const { return coeffs_.back(); }
    Rational coeff(int i) const;

    Rational eval(const Rational& t) const;
    double eval(double t) const;
    int sign_at(const Rational& t) const { return sgn(eval(t)); }

    UPoly derivative() const;
    UPoly monic() const;
    // Integer coefficients with gcd 1 and positive leading coefficient.
    UPoly primitive() const;

    // t -> t + a
    UPoly taylor_shift(const Rational& a) const;
    // t -> s * t
    UPoly scale(const Rational& s) const;
    // t^d p(1/t)
    UPoly reversed() const;

    friend UPoly operator+(const UPoly& a, const UPoly& b);
    friend UPoly operator-(const UPoly& a, const UPoly& b);
    friend UPoly operator*(const UPoly& a, const UPoly& b);
    friend UPoly operator*(const Rational& c, const UPoly& a);
    friend bool operator==(const UPoly& a, const UPoly& b) { return a.coeffs_ == b.coeffs_; }

    std::string to_string(const std::string& var = "t") const;

private:
    void trim();
    std::vector<Rational> coeffs_;
};

struct UDivision {
    UPoly quotient;
    UPoly remainder;
};

UDivision divide(const UPoly& a, const UPoly& b);
// Monic gcd; gcd(0, 0) = 0.
UPoly gcd(const UPoly& a, const UPoly& b);
UPoly square_free_part(const UPoly& p);

// Sign variations of the coefficient sequence, zeros skipped.
int sign_variations(const std::vector<Rational>& seq);

}  // namespace subalip
