#pragma once

#include "subalip/polynomial.hpp"

#include <string>

namespace subalip {

// Sylvester matrix of p and q with respect to var, entries in the full ring.
std::vector<std::vector<Polynomial>> sylvester_matrix(const Polynomial& p, const Polynomial& q, int var);

// Res_var(p, q) by fraction-free (Bareiss) elimination of the Sylvester matrix.
Polynomial resultant(const Polynomial& p, const Polynomial& q, int var);

enum class DiscriminantNormalization { DividedByLeadingCoefficient, RawResultant };

struct Discriminant {
    Polynomial value;
    DiscriminantNormalization normalization;
};

// Res(p, dp/dvar) / lc(p) when the division is exact, else the raw resultant.
Discriminant discriminant(const Polynomial& p, int var);

std::string to_string(DiscriminantNormalization n);

// p / gcd(p, dp/dvar): same real roots in var, repeated factors removed.
Polynomial square_free_part(const Polynomial& p, int var);
// p / gcd(p, all partials): removes every repeated irreducible factor.
Polynomial square_free_part(const Polynomial& p);

}  // namespace subalip
