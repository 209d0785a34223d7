#pragma once

#include "wt1/bigint.hpp"
#include "wt1/poly.hpp"

#include <vector>

namespace wt1 {

// Dense polynomial over F_p, p an odd-or-even prime < 2^31.
// Coefficients reduced to [0, p).
struct FpPoly {
    uint64_t p = 0;
    std::vector<uint64_t> c;  // ascending, trimmed

    FpPoly() = default;
    FpPoly(uint64_t prime, std::vector<uint64_t> coeffs) : p(prime), c(std::move(coeffs)) { trim(); }

    static FpPoly zero(uint64_t p) { return FpPoly(p, {}); }
    static FpPoly one(uint64_t p) { return FpPoly(p, {1}); }
    static FpPoly x(uint64_t p) { return FpPoly(p, {0, 1}); }

    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    uint64_t at(size_t i) const { return i < c.size() ? c[i] : 0; }
    void trim();
    bool operator==(const FpPoly& o) const { return p == o.p && c == o.c; }
    bool operator<(const FpPoly& o) const;  // by degree then lex on coefficients
};

FpPoly fp_add(const FpPoly& a, const FpPoly& b);
FpPoly fp_sub(const FpPoly& a, const FpPoly& b);
FpPoly fp_mul(const FpPoly& a, const FpPoly& b);
FpPoly fp_scale(uint64_t s, const FpPoly& a);
std::pair<FpPoly, FpPoly> fp_divmod(const FpPoly& a, const FpPoly& b);
FpPoly fp_mod(const FpPoly& a, const FpPoly& b);
FpPoly fp_gcd(FpPoly a, FpPoly b);  // monic
FpPoly fp_monic(const FpPoly& a);
FpPoly fp_powmod(const FpPoly& a, const Z& e, const FpPoly& m);
FpPoly fp_derivative(const FpPoly& a);
uint64_t fp_eval(const FpPoly& f, uint64_t x);
FpPoly fp_compose_mod(const FpPoly& f, const FpPoly& g, const FpPoly& m);

// reduce an integral QPoly modulo p (fails on denominators divisible by p)
FpPoly fp_reduce(const QPoly& f, uint64_t p);

// inverse of a mod m, gcd(a, m) = 1 required
FpPoly fp_invmod(const FpPoly& a, const FpPoly& m);

// Full factorization over F_p: squarefree split (including p-th power
// extraction), distinct-degree, then Cantor-Zassenhaus equal-degree
// splitting with a deterministic seed derived from the input.
// Result sorted (by degree, then lex), with multiplicities.
// Throws error("CompositeModulus") if p is not prime.
std::vector<std::pair<FpPoly, int>> fp_factor(const FpPoly& f);

bool fp_is_irreducible(const FpPoly& f);

// lexicographically smallest monic irreducible of the given degree
FpPoly fp_find_irreducible(uint64_t p, int degree);

}  // namespace wt1
