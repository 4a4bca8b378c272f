#include "subalip/polynomial.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace subalip {

namespace {

Exponents zero_exponents(int nvars) { return Exponents(static_cast<std::size_t>(nvars), 0); }

void check_ring(const Polynomial& a, const Polynomial& b) {
    if (a.nvars() != b.nvars()) throw std::invalid_argument("polynomials live in different rings");
}

}  // namespace

std::string default_variable_name(int index) {
    static const char* names[] = {"x", "y", "z", "w"};
    if (index >= 0 && index < 4) return names[index];
    return "v" + std::to_string(index);
}

Polynomial::Polynomial(int nvars) : nvars_(nvars) {
    if (nvars < 1) throw std::invalid_argument("polynomial needs at least one variable");
}

Polynomial Polynomial::constant(int nvars, const Rational& c) {
    Polynomial p(nvars);
    p.add_term(zero_exponents(nvars), c);
    return p;
}

Polynomial Polynomial::variable(int nvars, int var) {
    Polynomial p(nvars);
    Exponents e = zero_exponents(nvars);
    e.at(static_cast<std::size_t>(var)) = 1;
    p.add_term(e, 1);
    return p;
}

Polynomial Polynomial::from_upoly(int nvars, int var, const UPoly& u) {
    Polynomial p(nvars);
    for (int i = 0; i <= u.degree(); ++i) {
        Exponents e = zero_exponents(nvars);
        e.at(static_cast<std::size_t>(var)) = i;
        p.add_term(e, u.coeff(i));
    }
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total_degree() == 0);
}

Rational Polynomial::constant_term() const {
    auto it = terms_.find(zero_exponents(nvars_));
    return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
    if (static_cast<int>(e.size()) != nvars_) throw std::invalid_argument("exponent arity mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

int Polynomial::degree(int var) const {
    int d = is_zero() ? -1 : 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[static_cast<std::size_t>(var)]);
    return d;
}

int Polynomial::total_degree() const {
    int d = is_zero() ? -1 : 0;
    for (const auto& [e, c] : terms_) {
        int s = 0;
        for (int k : e) s += k;
        d = std::max(d, s);
    }
    return d;
}

int Polynomial::main_variable() const {
    for (int v = nvars_ - 1; v >= 0; --v)
        if (depends_on(v)) return v;
    return -1;
}

Polynomial Polynomial::coefficient(int var, int k) const {
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[static_cast<std::size_t>(var)] != k) continue;
        Exponents f = e;
        f[static_cast<std::size_t>(var)] = 0;
        out.add_term(f, c);
    }
    return out;
}

std::vector<Polynomial> Polynomial::coefficients(int var) const {
    const int d = degree(var);
    std::vector<Polynomial> out(static_cast<std::size_t>(std::max(d, 0)) + 1, Polynomial(nvars_));
    for (const auto& [e, c] : terms_) {
        Exponents f = e;
        int k = f[static_cast<std::size_t>(var)];
        f[static_cast<std::size_t>(var)] = 0;
        out[static_cast<std::size_t>(k)].add_term(f, c);
    }
    return out;
}

Polynomial Polynomial::derivative(int var) const {
    if (var < 0 || var >= nvars_) throw std::out_of_range("derivative: variable index");
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
        int k = e[static_cast<std::size_t>(var)];
        if (k == 0) continue;
        Exponents f = e;
        f[static_cast<std::size_t>(var)] = k - 1;
        out.add_term(f, c * k);
    }
    return out;
}

Rational Polynomial::eval(std::span<const Rational> point) const {
    if (static_cast<int>(point.size()) != nvars_) throw std::invalid_argument("point dimension mismatch");
    Rational acc = 0, term;
    mpq_class power;
    for (const auto& [e, c] : terms_) {
        term = c;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            mpz_pow_ui(power.get_num_mpz_t(), point[i].get_num_mpz_t(), static_cast<unsigned long>(e[i]));
            mpz_pow_ui(power.get_den_mpz_t(), point[i].get_den_mpz_t(), static_cast<unsigned long>(e[i]));
            term *= power;
        }
        acc += term;
    }
    return acc;
}

double Polynomial::eval(std::span<const double> point) const {
    if (static_cast<int>(point.size()) != nvars_) throw std::invalid_argument("point dimension mismatch");
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
        double term = c.get_d();
        for (std::size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k) term *= point[i];
        acc += term;
    }
    return acc;
}

Polynomial Polynomial::substitute(int var, const Rational& value) const {
    std::vector<Rational> powers{Rational(1)};
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
        int k = e[static_cast<std::size_t>(var)];
        while (static_cast<int>(powers.size()) <= k) powers.push_back(powers.back() * value);
        Exponents f = e;
        f[static_cast<std::size_t>(var)] = 0;
        out.add_term(f, c * powers[static_cast<std::size_t>(k)]);
    }
    return out;
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& images) const {
    if (static_cast<int>(images.size()) != nvars_) throw std::invalid_argument("compose: arity mismatch");
    const int target = images.front().nvars();
    std::vector<std::vector<Polynomial>> powers(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) powers[i].push_back(Polynomial::constant(target, 1));
    Polynomial out(target);
    for (const auto& [e, c] : terms_) {
        Polynomial term = Polynomial::constant(target, c);
        for (std::size_t i = 0; i < e.size(); ++i) {
            auto& pw = powers[i];
            while (static_cast<int>(pw.size()) <= e[i]) pw.push_back(pw.back() * images[i]);
            if (e[i] > 0) term = term * pw[static_cast<std::size_t>(e[i])];
        }
        out = out + term;
    }
    return out;
}

UPoly Polynomial::to_upoly(int var) const {
    std::vector<Rational> c(static_cast<std::size_t>(std::max(degree(var), 0)) + 1);
    for (const auto& [e, coef] : terms_) {
        for (std::size_t i = 0; i < e.size(); ++i)
            if (static_cast<int>(i) != var && e[i] != 0)
                throw std::invalid_argument("to_upoly: polynomial is not univariate in the requested variable");
        c[static_cast<std::size_t>(e[static_cast<std::size_t>(var)])] += coef;
    }
    return UPoly(std::move(c));
}

Polynomial Polynomial::pow(int k) const {
    Polynomial result = Polynomial::constant(nvars_, 1), base = *this;
    while (k > 0) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return result;
}

Polynomial Polynomial::operator-() const {
    Polynomial out = *this;
    for (auto& [e, c] : out.terms_) c = -c;
    return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    check_ring(a, b);
    Polynomial out = a;
    for (const auto& [e, c] : b.terms_) out.add_term(e, c);
    return out;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    check_ring(a, b);
    Polynomial out = a;
    for (const auto& [e, c] : b.terms_) out.add_term(e, -c);
    return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    check_ring(a, b);
    Polynomial out(a.nvars_);
    Exponents f(static_cast<std::size_t>(a.nvars_));
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            for (std::size_t i = 0; i < f.size(); ++i) f[i] = ea[i] + eb[i];
            out.add_term(f, ca * cb);
        }
    return out;
}

Polynomial operator*(const Rational& s, const Polynomial& a) {
    if (s == 0) return Polynomial(a.nvars_);
    Polynomial out = a;
    for (auto& [e, c] : out.terms_) c *= s;
    return out;
}

Polynomial Polynomial::normalized() const {
    if (is_zero()) return *this;
    mpz_class den_lcm = 1, num_gcd = 0;
    for (const auto& [e, c] : terms_) {
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
    }
    Rational scale(den_lcm, num_gcd);
    scale.canonicalize();
    if (leading_term_coefficient() < 0) scale = -scale;
    return scale * *this;
}

std::string Polynomial::to_string(std::span<const std::string> names) const {
    if (is_zero()) return "0";
    auto name = [&](std::size_t i) { return i < names.size() ? names[i] : default_variable_name(static_cast<int>(i)); };
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        Rational a = abs(c);
        bool has_var = false;
        for (int k : e) has_var = has_var || k > 0;
        bool need_star = false;
        if (!has_var || a != 1) {
            os << a.get_str();
            need_star = true;
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (need_star) os << "*";
            os << name(i);
            if (e[i] > 1) os << "^" << e[i];
            need_star = true;
        }
        first = false;
    }
    return os.str();
}

std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b) {
    check_ring(a, b);
    if (b.is_zero()) throw std::domain_error("division by zero polynomial");
    Polynomial q(a.nvars()), r = a;
    const auto& [lb_e, lb_c] = *b.terms().rbegin();
    while (!r.is_zero()) {
        const auto& [lr_e, lr_c] = *r.terms().rbegin();
        Exponents m(lr_e.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
            m[i] = lr_e[i] - lb_e[i];
            if (m[i] < 0) return std::nullopt;
        }
        Polynomial t(a.nvars());
        t.add_term(m, lr_c / lb_c);
        q = q + t;
        r = r - t * b;
    }
    return q;
}

Polynomial pseudo_remainder(const Polynomial& a, const Polynomial& b, int var) {
    const int db = b.degree(var);
    if (db < 0) throw std::domain_error("pseudo-remainder by zero");
    Polynomial lb = b.leading_coefficient(var);
    Polynomial r = a;
    while (!r.is_zero() && r.degree(var) >= db) {
        const int dr = r.degree(var);
        Polynomial lr = r.leading_coefficient(var);
        Polynomial shift(a.nvars());
        Exponents e(static_cast<std::size_t>(a.nvars()), 0);
        e[static_cast<std::size_t>(var)] = dr - db;
        shift.add_term(e, 1);
        r = lb * r - lr * shift * b;
    }
    return r;
}

Polynomial content(const Polynomial& p, int var) {
    Polynomial g(p.nvars());
    for (const auto& c : p.coefficients(var)) {
        if (c.is_zero()) continue;
        g = gcd(g, c);
        if (g.is_constant()) break;
    }
    return g;
}

Polynomial primitive_part(const Polynomial& p, int var) {
    if (p.is_zero()) return p;
    auto q = divide_exact(p, content(p, var));
    if (!q) throw std::logic_error("content does not divide polynomial");
    return *q;
}

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
    check_ring(a, b);
    if (a.is_zero()) return b.normalized();
    if (b.is_zero()) return a.normalized();
    const int v = std::max(a.main_variable(), b.main_variable());
    if (v < 0) return Polynomial::constant(a.nvars(), 1);
    Polynomial ca = content(a, v), cb = content(b, v);
    Polynomial g_content = gcd(ca, cb);
    Polynomial pa = *divide_exact(a, ca), pb = *divide_exact(b, cb);
    if (pa.degree(v) < pb.degree(v)) std::swap(pa, pb);
    while (!pb.is_zero()) {
        if (pb.degree(v) == 0) {
            pa = Polynomial::constant(a.nvars(), 1);
            break;
        }
        Polynomial r = pseudo_remainder(pa, pb, v);
        pa = std::move(pb);
        pb = r.is_zero() ? r : primitive_part(r, v);
    }
    return (g_content * pa).normalized();
}

}  // namespace subalip
