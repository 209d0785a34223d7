#pragma once

#include "wt1/fp.hpp"

#include <memory>
#include <vector>

namespace wt1 {

// F_{p^f} realized as F_p[y]/(h), h monic irreducible of degree f.
struct FqContext {
    uint64_t p;
    int f;
    FpPoly h;

    FqContext(uint64_t prime, int deg) : p(prime), f(deg), h(fp_find_irreducible(prime, deg)) {}
    FqContext(uint64_t prime, FpPoly modulus) : p(prime), f(modulus.degree()), h(std::move(modulus)) {}

    Z order() const { return z_pow(Z(p), static_cast<uint64_t>(f)); }
};

// Elements are reduced FpPoly of degree < f.
using FqElem = FpPoly;

FqElem fq_reduce(const FqContext& k, const FpPoly& a);
FqElem fq_add(const FqContext& k, const FqElem& a, const FqElem& b);
FqElem fq_sub(const FqContext& k, const FqElem& a, const FqElem& b);
FqElem fq_mul(const FqContext& k, const FqElem& a, const FqElem& b);
FqElem fq_inv(const FqContext& k, const FqElem& a);
FqElem fq_pow(const FqContext& k, const FqElem& a, const Z& e);
FqElem fq_from_u64(const FqContext& k, uint64_t a);

// enumerate all q elements in a fixed order (lex on coefficient vectors)
std::vector<FqElem> fq_all(const FqContext& k);

// evaluate an F_p polynomial at an F_q point
FqElem fq_eval_poly(const FqContext& k, const FpPoly& f, const FqElem& x);

// all roots of f (an F_p polynomial) in F_q, sorted
std::vector<FqElem> fq_roots(const FqContext& k, const FpPoly& f);

// multiplicative order of a nonzero element
Z fq_order(const FqContext& k, const FqElem& a);

// lexicographically smallest element of exact multiplicative order m;
// requires m | p^f - 1
FqElem fq_element_of_order(const FqContext& k, const Z& m);

}  // namespace wt1
