#include "subalip/elimination.hpp"

#include <stdexcept>

namespace subalip {

std::vector<std::vector<Polynomial>> sylvester_matrix(const Polynomial& p, const Polynomial& q, int var) {
    const int m = p.degree(var), n = q.degree(var);
    if (m < 0 || n < 0) throw std::domain_error("resultant of the zero polynomial");
    const int size = m + n;
    auto pc = p.coefficients(var), qc = q.coefficients(var);
    std::vector<std::vector<Polynomial>> s(static_cast<std::size_t>(size),
                                           std::vector<Polynomial>(static_cast<std::size_t>(size), Polynomial(p.nvars())));
    // Rows 0..n-1 carry shifted copies of p, rows n..n+m-1 copies of q;
    // column j multiplies var^(size-1-j).
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) s[r][r + m - k] = pc[static_cast<std::size_t>(k)];
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) s[n + r][r + n - k] = qc[static_cast<std::size_t>(k)];
    return s;
}

Polynomial resultant(const Polynomial& p, const Polynomial& q, int var) {
    if (p.nvars() != q.nvars()) throw std::invalid_argument("resultant: ring mismatch");
    if (p.is_zero() || q.is_zero()) throw std::domain_error("resultant of the zero polynomial");
    const int m = p.degree(var), n = q.degree(var);
    if (m == 0 && n == 0) return Polynomial::constant(p.nvars(), 1);
    if (m == 0) return p.pow(n);
    if (n == 0) return q.pow(m);

    auto a = sylvester_matrix(p, q, var);
    const std::size_t size = a.size();
    Polynomial prev = Polynomial::constant(p.nvars(), 1);
    int sign_flip = 1;
    for (std::size_t k = 0; k + 1 < size; ++k) {
        if (a[k][k].is_zero()) {
            std::size_t swap_row = k + 1;
            while (swap_row < size && a[swap_row][k].is_zero()) ++swap_row;
            if (swap_row == size) return Polynomial(p.nvars());
            std::swap(a[k], a[swap_row]);
            sign_flip = -sign_flip;
        }
        for (std::size_t i = k + 1; i < size; ++i) {
            for (std::size_t j = k + 1; j < size; ++j) {
                Polynomial num = a[k][k] * a[i][j] - a[i][k] * a[k][j];
                auto quotient = divide_exact(num, prev);
                if (!quotient) throw std::logic_error("Bareiss step not exact");
                a[i][j] = std::move(*quotient);
            }
            a[i][k] = Polynomial(p.nvars());
        }
        prev = a[k][k];
    }
    Polynomial det = a[size - 1][size - 1];
    return sign_flip < 0 ? -det : det;
}

Discriminant discriminant(const Polynomial& p, int var) {
    if (p.degree(var) < 1) throw std::domain_error("discriminant: degree in variable must be positive");
    if (p.degree(var) == 1) return {Polynomial::constant(p.nvars(), 1), DiscriminantNormalization::DividedByLeadingCoefficient};
    Polynomial r = resultant(p, p.derivative(var), var);
    if (auto q = divide_exact(r, p.leading_coefficient(var)))
        return {std::move(*q), DiscriminantNormalization::DividedByLeadingCoefficient};
    return {std::move(r), DiscriminantNormalization::RawResultant};
}

std::string to_string(DiscriminantNormalization n) {
    return n == DiscriminantNormalization::DividedByLeadingCoefficient ? "res/lc" : "raw-resultant";
}

Polynomial square_free_part(const Polynomial& p, int var) {
    if (p.is_zero()) throw std::domain_error("square_free_part of zero");
    if (p.degree(var) <= 0) return p.normalized();
    Polynomial g = gcd(p, p.derivative(var));
    return divide_exact(p, g)->normalized();
}

Polynomial square_free_part(const Polynomial& p) {
    if (p.is_zero()) throw std::domain_error("square_free_part of zero");
    Polynomial g = p;
    for (int v = 0; v < p.nvars(); ++v) {
        if (!p.depends_on(v)) continue;
        g = gcd(g, p.derivative(v));
    }
    if (g.is_zero()) return p.normalized();
    return divide_exact(p, g)->normalized();
}

}  // namespace subalip
