#pragma once

#include "wt1/bigint.hpp"

#include <string>
#include <vector>

namespace wt1 {

// Dense univariate polynomial over Q, coefficients in ascending degree,
// no trailing zeros (the zero polynomial has an empty coefficient vector).
struct QPoly {
    std::vector<Q> c;

    QPoly() = default;
    explicit QPoly(std::vector<Q> coeffs) : c(std::move(coeffs)) { trim(); }

    static QPoly zero() { return QPoly{}; }
    static QPoly one() { return QPoly({Q(1)}); }
    static QPoly x() { return QPoly({Q(0), Q(1)}); }
    static QPoly constant(const Q& a) { return QPoly({a}); }
    // c0 + c1 x + ... from integer initializers
    static QPoly from_int(std::vector<long long> v);

    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
    const Q& lead() const { return c.back(); }
    Q at(size_t i) const { return i < c.size() ? c[i] : Q(0); }
    void trim();

    bool operator==(const QPoly& o) const { return c == o.c; }
};

QPoly operator+(const QPoly& a, const QPoly& b);
QPoly operator-(const QPoly& a, const QPoly& b);
QPoly operator*(const QPoly& a, const QPoly& b);
QPoly operator*(const Q& s, const QPoly& a);
QPoly poly_neg(const QPoly& a);

// quotient and remainder; divisor must be nonzero
std::pair<QPoly, QPoly> poly_divmod(const QPoly& a, const QPoly& b);
QPoly poly_mod(const QPoly& a, const QPoly& b);

Q poly_eval(const QPoly& f, const Q& x);
// f(g) mod m
QPoly poly_compose_mod(const QPoly& f, const QPoly& g, const QPoly& m);
QPoly poly_derivative(const QPoly& f);

// Monic gcd; zero iff both inputs are zero.
QPoly poly_gcd(const QPoly& a, const QPoly& b);

// Resultant via Sylvester matrix with fraction-free reduction.
Q poly_resultant(const QPoly& a, const QPoly& b);

// disc(f) = (-1)^{n(n-1)/2} Res(f, f') / lc(f)
Q poly_discriminant(const QPoly& f);

bool poly_is_monic(const QPoly& f);
bool poly_is_integral(const QPoly& f);

// Number of real roots, via Sturm chains. Requires squarefree not needed
// (we divide out repeated factors first).
int poly_real_root_count(const QPoly& f);

// Irreducibility over Q for monic integral polynomials at desk scale:
// modular degree patterns first, then a bounded search for a monic
// integral factor of any degree the patterns could not exclude.
// Returns true if proven irreducible, false if a factor was found;
// throws error("IrreducibilityUndecided") when neither is established.
bool poly_irreducible_over_Q(const QPoly& f);

std::string poly_to_string(const QPoly& f, const std::string& var = "x");

}  // namespace wt1
