#pragma once

#include "subalip/rational.hpp"
#include "subalip/upoly.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace subalip {

using Exponents = std::vector<int>;

// Lex order with the highest-index variable most significant.
struct ExponentOrder {
    bool operator()(const Exponents& a, const Exponents& b) const {
        return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
    }
};

// Sparse multivariate polynomial with rational coefficients. The leading
// term under ExponentOrder is the last map entry.
class Polynomial {
public:
    explicit Polynomial(int nvars = 1);
    static Polynomial constant(int nvars, const Rational& c);
    static Polynomial variable(int nvars, int var);
    static Polynomial from_upoly(int nvars, int var, const UPoly& p);

    int nvars() const { return nvars_; }
    const std::map<Exponents, Rational, ExponentOrder>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;
    std::size_t term_count() const { return terms_.size(); }

    void add_term(const Exponents& e, const Rational& c);

    int degree(int var) const;
    int total_degree() const;
    bool depends_on(int var) const { return degree(var) > 0; }
    // Highest-index variable that occurs, or -1 for constants.
    int main_variable() const;

    // Coefficient of var^k, as a polynomial in the same ring (var absent).
    Polynomial coefficient(int var, int k) const;
    std::vector<Polynomial> coefficients(int var) const;
    Polynomial leading_coefficient(int var) const { return coefficient(var, degree(var)); }

    Polynomial derivative(int var) const;

    Rational eval(std::span<const Rational> point) const;
    double eval(std::span<const double> point) const;

    // Substitute a rational for one variable; the variable disappears (degree 0).
    Polynomial substitute(int var, const Rational& value) const;
    // Replace each variable i by images[i] (all images share one ring).
    Polynomial compose(const std::vector<Polynomial>& images) const;
    // The univariate polynomial in var; all other variables must be absent.
    UPoly to_upoly(int var) const;

    Polynomial pow(int k) const;
    Polynomial operator-() const;
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Rational& c, const Polynomial& a);
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    const Rational& leading_term_coefficient() const { return terms_.rbegin()->second; }
    // Scaled to integer coefficients with gcd 1 and positive lex-leading coefficient.
    Polynomial normalized() const;

    std::string to_string(std::span<const std::string> names = {}) const;

private:
    int nvars_;
    std::map<Exponents, Rational, ExponentOrder> terms_;
};

std::string default_variable_name(int index);

// Exact division; nullopt unless b divides a over Q.
std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b);
// Pseudo-remainder of a by b with respect to var.
Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, int var);

// Greatest common divisor over Q (normalized). Recursive primitive PRS.
Polynomial gcd(const Polynomial& a, const Polynomial& b);
// gcd of coefficients of p viewed as polynomial in var.
Polynomial content(const Polynomial& p, int var);
Polynomial primitive_part(const Polynomial& p, int var);

}  // namespace subalip
