#include "subalip/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace subalip {

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error(message + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
      line_(line),
      column_(column) {}

Formula Formula::atom(Polynomial poly, Relation rel) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Atom;
    n->dimension = poly.nvars();
    n->poly = std::move(poly);
    n->rel = rel;
    return Formula(std::move(n));
}

namespace {

int common_dimension(const std::vector<Formula>& children) {
    if (children.empty()) throw std::invalid_argument("connective without operands");
    int d = children.front().dimension();
    for (const auto& c : children)
        if (c.dimension() != d) throw DimensionError("formula operands disagree on ambient dimension");
    return d;
}

}  // namespace

Formula Formula::conjunction(std::vector<Formula> children) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::And;
    n->dimension = common_dimension(children);
    n->children = std::move(children);
    return Formula(std::move(n));
}

Formula Formula::disjunction(std::vector<Formula> children) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Or;
    n->dimension = common_dimension(children);
    n->children = std::move(children);
    return Formula(std::move(n));
}

Formula Formula::negation(Formula child) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Not;
    n->dimension = child.dimension();
    n->children.push_back(std::move(child));
    return Formula(std::move(n));
}

bool Formula::evaluate(const std::function<int(const Polynomial&)>& sign_of) const {
    switch (kind()) {
        case Kind::Atom: {
            int s = sign_of(polynomial());
            switch (relation()) {
                case Relation::Less: return s < 0;
                case Relation::LessEqual: return s <= 0;
                case Relation::Equal: return s == 0;
            }
            return false;
        }
        case Kind::And:
            for (const auto& c : children())
                if (!c.evaluate(sign_of)) return false;
            return true;
        case Kind::Or:
            for (const auto& c : children())
                if (c.evaluate(sign_of)) return true;
            return false;
        case Kind::Not: return !children().front().evaluate(sign_of);
    }
    return false;
}

bool Formula::contains(std::span<const Rational> point) const {
    if (static_cast<int>(point.size()) != dimension()) throw DimensionError("point dimension does not match formula");
    return evaluate([&](const Polynomial& p) { return sgn(p.eval(point)); });
}

bool Formula::contains(std::span<const double> point) const {
    if (static_cast<int>(point.size()) != dimension()) throw DimensionError("point dimension does not match formula");
    return evaluate([&](const Polynomial& p) {
        double v = p.eval(point);
        return v < 0 ? -1 : (v > 0 ? 1 : 0);
    });
}

std::vector<Polynomial> Formula::atom_polynomials() const {
    std::vector<Polynomial> out;
    std::function<void(const Formula&)> walk = [&](const Formula& f) {
        if (f.kind() == Kind::Atom) {
            for (const auto& p : out)
                if (p == f.polynomial()) return;
            out.push_back(f.polynomial());
            return;
        }
        for (const auto& c : f.children()) walk(c);
    };
    walk(*this);
    return out;
}

std::string Formula::to_string() const {
    switch (kind()) {
        case Kind::Atom: {
            const char* rel = relation() == Relation::Less ? " < 0" : relation() == Relation::LessEqual ? " <= 0" : " = 0";
            return polynomial().to_string() + rel;
        }
        case Kind::And:
        case Kind::Or: {
            std::string sep = kind() == Kind::And ? " and " : " or ";
            std::string s = "(";
            for (std::size_t i = 0; i < children().size(); ++i) {
                if (i) s += sep;
                s += children()[i].to_string();
            }
            return s + ")";
        }
        case Kind::Not: return "not " + children().front().to_string();
    }
    return {};
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.kind() != b.kind() || a.dimension() != b.dimension()) return false;
    if (a.kind() == Formula::Kind::Atom) return a.relation() == b.relation() && a.polynomial() == b.polynomial();
    if (a.children().size() != b.children().size()) return false;
    for (std::size_t i = 0; i < a.children().size(); ++i)
        if (!(a.children()[i] == b.children()[i])) return false;
    return true;
}

namespace {

enum class Tok { Number, Var, And, Or, Not, Plus, Minus, Star, Caret, Slash, LParen, RParen, Lt, Le, Eq, Gt, Ge, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

constexpr int kMaxVars = 3;

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        int l = line, cc = col;
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t j = i;
            while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) ++j;
            std::string text(src.substr(i, j - i));
            if (std::count(text.begin(), text.end(), '.') > 1 || text == ".")
                throw ParseError("malformed number '" + text + "'", l, cc);
            out.push_back({Tok::Number, text, l, cc});
            advance(j - i);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isalnum(static_cast<unsigned char>(src[j]))) ++j;
            std::string word(src.substr(i, j - i));
            Tok k;
            if (word == "and") k = Tok::And;
            else if (word == "or") k = Tok::Or;
            else if (word == "not") k = Tok::Not;
            else if (word == "x" || word == "y" || word == "z") k = Tok::Var;
            else throw ParseError("unknown identifier '" + word + "'", l, cc);
            out.push_back({k, word, l, cc});
            advance(j - i);
            continue;
        }
        auto two = src.substr(i, 2);
        if (two == "<=") {
            out.push_back({Tok::Le, "<=", l, cc});
            advance(2);
            continue;
        }
        if (two == ">=") {
            out.push_back({Tok::Ge, ">=", l, cc});
            advance(2);
            continue;
        }
        Tok k;
        switch (c) {
            case '+': k = Tok::Plus; break;
            case '-': k = Tok::Minus; break;
            case '*': k = Tok::Star; break;
            case '^': k = Tok::Caret; break;
            case '/': k = Tok::Slash; break;
            case '(': k = Tok::LParen; break;
            case ')': k = Tok::RParen; break;
            case '<': k = Tok::Lt; break;
            case '>': k = Tok::Gt; break;
            case '=': k = Tok::Eq; break;
            default: throw ParseError(std::string("unexpected character '") + c + "'", l, cc);
        }
        out.push_back({k, std::string(1, c), l, cc});
        advance(1);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Formula parse() {
        Formula f = disjunction();
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
        return f;
    }

    int max_var = -1;

private:
    const Token& peek() const { return toks_[pos_]; }
    Token take() { return toks_[pos_++]; }
    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        throw ParseError(t.kind == Tok::End ? msg + " (end of input)" : msg, t.line, t.column);
    }
    void expect(Tok k, const char* what) {
        if (peek().kind != k) fail(std::string("expected ") + what);
        ++pos_;
    }

    static bool is_relation(Tok k) { return k == Tok::Lt || k == Tok::Le || k == Tok::Eq || k == Tok::Gt || k == Tok::Ge; }

    Formula disjunction() {
        std::vector<Formula> parts{conjunction()};
        while (peek().kind == Tok::Or) {
            ++pos_;
            parts.push_back(conjunction());
        }
        return parts.size() == 1 ? parts.front() : Formula::disjunction(std::move(parts));
    }

    Formula conjunction() {
        std::vector<Formula> parts{negation()};
        while (peek().kind == Tok::And) {
            ++pos_;
            parts.push_back(negation());
        }
        return parts.size() == 1 ? parts.front() : Formula::conjunction(std::move(parts));
    }

    Formula negation() {
        if (peek().kind == Tok::Not) {
            ++pos_;
            return Formula::negation(negation());
        }
        if (peek().kind == Tok::LParen) {
            // Either a parenthesized formula or the start of an arithmetic atom.
            std::size_t save = pos_;
            int save_var = max_var;
            try {
                ++pos_;
                Formula inner = disjunction();
                expect(Tok::RParen, "')'");
                Tok next = peek().kind;
                if (!is_relation(next) && next != Tok::Plus && next != Tok::Minus && next != Tok::Star && next != Tok::Caret)
                    return inner;
            } catch (const ParseError&) {
            }
            pos_ = save;
            max_var = save_var;
        }
        return atom();
    }

    Formula atom() {
        Polynomial lhs = expression();
        Tok rel = peek().kind;
        if (!is_relation(rel)) fail("expected relation");
        ++pos_;
        Polynomial rhs = expression();
        switch (rel) {
            case Tok::Lt: return Formula::atom(lhs - rhs, Relation::Less);
            case Tok::Le: return Formula::atom(lhs - rhs, Relation::LessEqual);
            case Tok::Eq: return Formula::atom(lhs - rhs, Relation::Equal);
            case Tok::Gt: return Formula::atom(rhs - lhs, Relation::Less);
            default: return Formula::atom(rhs - lhs, Relation::LessEqual);
        }
    }

    Polynomial expression() {
        Polynomial acc = term();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            bool plus = take().kind == Tok::Plus;
            Polynomial t = term();
            acc = plus ? acc + t : acc - t;
        }
        return acc;
    }

    Polynomial term() {
        Polynomial acc = unary();
        while (peek().kind == Tok::Star) {
            ++pos_;
            acc = acc * unary();
        }
        return acc;
    }

    Polynomial unary() {
        if (peek().kind == Tok::Minus) {
            ++pos_;
            return -unary();
        }
        if (peek().kind == Tok::Plus) {
            ++pos_;
            return unary();
        }
        return power();
    }

    Polynomial power() {
        Polynomial base = primary();
        if (peek().kind == Tok::Caret) {
            ++pos_;
            if (peek().kind != Tok::Number || peek().text.find('.') != std::string::npos)
                fail("expected non-negative integer exponent");
            int e = std::stoi(take().text);
            return base.pow(e);
        }
        return base;
    }

    Polynomial primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Number: {
                Rational v = parse_rational(take().text);
                if (peek().kind == Tok::Slash) {
                    ++pos_;
                    if (peek().kind != Tok::Number) fail("expected denominator");
                    Rational d = parse_rational(take().text);
                    if (d == 0) fail("zero denominator");
                    v /= d;
                }
                return Polynomial::constant(kMaxVars, v);
            }
            case Tok::Var: {
                int idx = t.text == "x" ? 0 : t.text == "y" ? 1 : 2;
                max_var = std::max(max_var, idx);
                ++pos_;
                return Polynomial::variable(kMaxVars, idx);
            }
            case Tok::LParen: {
                ++pos_;
                Polynomial inner = expression();
                expect(Tok::RParen, "')'");
                return inner;
            }
            default: fail(t.kind == Tok::End ? "expected operand" : "expected operand, found '" + t.text + "'");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

Polynomial shrink(const Polynomial& p, int nvars) {
    Polynomial out(nvars);
    for (const auto& [e, c] : p.terms()) {
        for (std::size_t i = static_cast<std::size_t>(nvars); i < e.size(); ++i)
            if (e[i] != 0) throw DimensionError("atom uses a variable outside the ambient dimension");
        out.add_term(Exponents(e.begin(), e.begin() + nvars), c);
    }
    return out;
}

Formula restrict(const Formula& f, int nvars) {
    switch (f.kind()) {
        case Formula::Kind::Atom: return Formula::atom(shrink(f.polynomial(), nvars), f.relation());
        case Formula::Kind::Not: return Formula::negation(restrict(f.children().front(), nvars));
        default: {
            std::vector<Formula> kids;
            for (const auto& c : f.children()) kids.push_back(restrict(c, nvars));
            return f.kind() == Formula::Kind::And ? Formula::conjunction(std::move(kids)) : Formula::disjunction(std::move(kids));
        }
    }
}

}  // namespace

Formula parse_formula(std::string_view text, int ambient) {
    Parser parser(tokenize(text));
    Formula raw = parser.parse();
    int dim = ambient > 0 ? ambient : std::max(2, parser.max_var + 1);
    if (parser.max_var >= dim)
        throw DimensionError("formula uses variable '" + default_variable_name(parser.max_var) + "' outside ambient dimension " +
                             std::to_string(dim));
    return restrict(raw, dim);
}

bool formula_membership(const Formula& f, std::span<const Rational> point) { return f.contains(point); }

}  // namespace subalip
