#include "subalip/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace subalip {

Rational make_rational(long num, long den) {
    if (den == 0) throw std::domain_error("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational from_double(double d) {
    if (!std::isfinite(d)) throw std::domain_error("non-finite double");
    mpq_class q;
    mpq_set_d(q.get_mpq_t(), d);
    return q;
}

double to_double(const Rational& q) { return q.get_d(); }

Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::size_t frac = s.size() - dot - 1;
        mpz_class num(digits.empty() ? "0" : digits, 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
        Rational q(num, den);
        q.canonicalize();
        return q;
    }
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    if (q.get_den() == 0) throw std::domain_error("zero denominator");
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

int sign(const Rational& q) { return sgn(q); }

Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

Rational floor_rational(const Rational& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(r);
}

Rational ceil_rational(const Rational& q) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(r);
}

Rational simplest_between(const Rational& lo, const Rational& hi) {
    if (!(lo < hi)) throw std::invalid_argument("simplest_between: empty interval");
    // Smallest dyadic denominator 2^k admitting an integer multiple strictly inside.
    mpz_class den = 1;
    for (;;) {
        Rational scaled_lo = lo * den;
        Rational cand = floor_rational(scaled_lo) + 1;
        Rational q = cand / den;
        if (q < hi) return q;
        den *= 2;
    }
}

}  // namespace subalip
