#include "subalip/upoly.hpp"

#include <sstream>
#include <stdexcept>

namespace subalip {

UPoly::UPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

UPoly UPoly::constant(const Rational& c) { return UPoly({c}); }

UPoly UPoly::monomial(const Rational& c, int degree) {
    std::vector<Rational> v(static_cast<std::size_t>(degree) + 1);
    v.back() = c;
    return UPoly(std::move(v));
}

void UPoly::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational UPoly::coeff(int i) const {
    if (i < 0 || i > degree()) return 0;
    return coeffs_[static_cast<std::size_t>(i)];
}

Rational UPoly::eval(const Rational& t) const {
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc *= t;
        acc += *it;
    }
    return acc;
}

double UPoly::eval(double t) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + it->get_d();
    return acc;
}

UPoly UPoly::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<Rational> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<long>(i);
    return UPoly(std::move(d));
}

UPoly UPoly::monic() const {
    if (is_zero()) return {};
    UPoly r = *this;
    Rational lc = leading();
    for (auto& c : r.coeffs_) c /= lc;
    return r;
}

UPoly UPoly::primitive() const {
    if (is_zero()) return {};
    mpz_class den_lcm = 1;
    for (const auto& c : coeffs_) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    std::vector<mpz_class> ints;
    ints.reserve(coeffs_.size());
    mpz_class g = 0;
    for (const auto& c : coeffs_) {
        mpz_class v = c.get_num() * (den_lcm / c.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        ints.push_back(v);
    }
    if (ints.back() < 0) g = -g;
    std::vector<Rational> out;
    out.reserve(ints.size());
    for (auto& v : ints) out.emplace_back(mpz_class(v / g));
    return UPoly(std::move(out));
}

UPoly UPoly::taylor_shift(const Rational& a) const {
    std::vector<Rational> c = coeffs_;
    const std::size_t n = c.size();
    // Horner-style synthetic division, O(n^2).
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = n - 1; j > i; --j) c[j - 1] += a * c[j];
    return UPoly(std::move(c));
}

UPoly UPoly::scale(const Rational& s) const {
    std::vector<Rational> c = coeffs_;
    Rational p = 1;
    for (auto& x : c) {
        x *= p;
        p *= s;
    }
    return UPoly(std::move(c));
}

UPoly UPoly::reversed() const {
    std::vector<Rational> c(coeffs_.rbegin(), coeffs_.rend());
    return UPoly(std::move(c));
}

UPoly operator+(const UPoly& a, const UPoly& b) {
    std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
    return UPoly(std::move(c));
}

UPoly operator-(const UPoly& a, const UPoly& b) {
    std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
    return UPoly(std::move(c));
}

UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return UPoly(std::move(c));
}

UPoly operator*(const Rational& s, const UPoly& a) {
    std::vector<Rational> c = a.coeffs_;
    for (auto& x : c) x *= s;
    return UPoly(std::move(c));
}

std::string UPoly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Rational& c = coeffs_[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        Rational a = abs(c);
        if (i == 0 || a != 1) os << a.get_str();
        if (i > 0) {
            if (a != 1) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

UDivision divide(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw std::domain_error("division by zero polynomial");
    std::vector<Rational> r = a.coeffs();
    const int db = b.degree();
    if (a.degree() < db) return {UPoly{}, a};
    std::vector<Rational> q(static_cast<std::size_t>(a.degree() - db) + 1);
    const Rational& lb = b.leading();
    for (int i = a.degree(); i >= db; --i) {
        Rational f = r[static_cast<std::size_t>(i)] / lb;
        q[static_cast<std::size_t>(i - db)] = f;
        if (f == 0) continue;
        for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(i - db + j)] -= f * b.coeffs()[static_cast<std::size_t>(j)];
    }
    r.resize(static_cast<std::size_t>(db));
    return {UPoly(std::move(q)), UPoly(std::move(r))};
}

UPoly gcd(const UPoly& a, const UPoly& b) {
    UPoly x = a.primitive(), y = b.primitive();
    while (!y.is_zero()) {
        UPoly r = divide(x, y).remainder.primitive();
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

UPoly square_free_part(const UPoly& p) {
    if (p.degree() <= 0) return p;
    UPoly g = gcd(p, p.derivative());
    return divide(p, g).quotient.primitive();
}

int sign_variations(const std::vector<Rational>& seq) {
    int count = 0, last = 0;
    for (const auto& c : seq) {
        int s = sgn(c);
        if (s == 0) continue;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

}  // namespace subalip
