#pragma once

#include "subalip/polynomial.hpp"

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace subalip {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Atoms are always stored as `poly rel 0`; `>` and `>=` are normalized by
// negating the polynomial.
enum class Relation { Less, LessEqual, Equal };

class Formula {
public:
    enum class Kind { Atom, And, Or, Not };

    static Formula atom(Polynomial poly, Relation rel);
    static Formula conjunction(std::vector<Formula> children);
    static Formula disjunction(std::vector<Formula> children);
    static Formula negation(Formula child);

    Kind kind() const { return node_->kind; }
    int dimension() const { return node_->dimension; }
    const Polynomial& polynomial() const { return node_->poly; }
    Relation relation() const { return node_->rel; }
    const std::vector<Formula>& children() const { return node_->children; }

    // Truth value given the sign of each atom polynomial at some point.
    bool evaluate(const std::function<int(const Polynomial&)>& sign_of) const;
    bool contains(std::span<const Rational> point) const;
    bool contains(std::span<const double> point) const;

    // Distinct atom polynomials in first-occurrence order.
    std::vector<Polynomial> atom_polynomials() const;

    std::string to_string() const;
    friend bool operator==(const Formula& a, const Formula& b);

private:
    struct Node {
        Kind kind;
        int dimension;
        Polynomial poly{1};
        Relation rel = Relation::Less;
        std::vector<Formula> children;
    };
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

// Grammar: infix arithmetic over x, y, z with integer, decimal and a/b
// literals, `+ - * ^`, relations `< <= = > >=`, connectives `and or not`,
// and parentheses. ambient = 0 infers the dimension from the variables used
// (at least 2).
Formula parse_formula(std::string_view text, int ambient = 2);

bool formula_membership(const Formula& f, std::span<const Rational> point);

}  // namespace subalip
