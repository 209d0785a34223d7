#pragma once

#include "wt1/fq.hpp"
#include "wt1/poly.hpp"

#include <optional>
#include <vector>

namespace wt1 {

// Absolute number field Q[x]/(f), arithmetic in the monogenic order Z[theta].
struct NumberField {
    QPoly f;
    int degree;
    Z poly_disc;

    explicit NumberField(QPoly defining);

    bool is_rationals() const { return degree == 1; }
};

// Element in the power basis of theta; coords.size() == degree.
struct NfElement {
    std::vector<Q> coords;

    NfElement() = default;
    explicit NfElement(std::vector<Q> c) : coords(std::move(c)) {}
    static NfElement zero(const NumberField& K) { return NfElement(std::vector<Q>(K.degree, Q(0))); }
    static NfElement from_rational(const NumberField& K, const Q& a);
    static NfElement gen(const NumberField& K);

    bool is_zero() const;
    bool operator==(const NfElement& o) const { return coords == o.coords; }
};

NfElement nf_add(const NumberField& K, const NfElement& a, const NfElement& b);
NfElement nf_sub(const NumberField& K, const NfElement& a, const NfElement& b);
NfElement nf_neg(const NumberField& K, const NfElement& a);
NfElement nf_mul(const NumberField& K, const NfElement& a, const NfElement& b);
NfElement nf_scale(const NumberField& K, const Q& s, const NfElement& a);
NfElement nf_inv(const NumberField& K, const NfElement& a);
NfElement nf_pow(const NumberField& K, const NfElement& a, const Z& e);
// value of a rational polynomial at theta
NfElement nf_from_poly(const NumberField& K, const QPoly& g);
QPoly nf_to_poly(const NfElement& a);

Q nf_norm(const NumberField& K, const NfElement& x);
bool nf_is_integral(const NfElement& x);
// lcm of coordinate denominators
Z nf_denominator(const NfElement& x);

// Prime of K above ell in two-element form (ell, gen(theta)).
struct PrimeFactor {
    Z ell;
    int e;
    int f;
    FpPoly gen;  // monic irreducible over F_ell

    bool operator==(const PrimeFactor& o) const {
        return ell == o.ell && e == o.e && f == o.f && gen == o.gen;
    }
};

// Kummer-Dedekind factorization of a rational prime, guarded by the full
// Dedekind index criterion at ell (sharper than the ell^2 | disc screen).
// Throws error("IndexDivisor") when Z[theta] is not maximal at ell, unless
// assume_maximal attests otherwise; error("CompositeModulus") on non-prime ell.
std::vector<PrimeFactor> factor_rational_prime(const NumberField& K, const Z& ell,
                                               bool assume_maximal = false);

// Residue field O_K/P together with the image of theta (the class of x).
struct ResidueField {
    FqContext k;
    FqElem theta;
};
ResidueField prime_residue_field(const NumberField& K, const PrimeFactor& P);

// Image of an element in O_K/P; denominators must be coprime to ell.
FqElem nf_mod_prime(const NumberField& K, const NfElement& x, const ResidueField& R);

// Exact P-adic valuation of the fractional ideal (x); error("ZeroElement") on x = 0.
int element_valuation(const NumberField& K, const NfElement& x, const PrimeFactor& P);

// Z-lattice of an integral ideal, rows = basis in the power basis of theta.
struct IdealLattice {
    int n = 0;
    std::vector<std::vector<Z>> rows;  // echelon form, pivots on the diagonal
};
IdealLattice ideal_from_two_elements(const NumberField& K, const PrimeFactor& P);
IdealLattice ideal_mul(const NumberField& K, const IdealLattice& A, const IdealLattice& B);
bool ideal_contains(const IdealLattice& L, const std::vector<Z>& v);

// source field embedded into target: image of the source generator.
struct FieldEmbedding {
    NfElement gen_image;                  // element of the target field
    std::vector<NfElement> gen_powers;    // cached powers, length = source degree
};
FieldEmbedding make_embedding(const NumberField& source, const NumberField& target,
                              const NfElement& gen_image);
NfElement embed_element(const NumberField& target, const FieldEmbedding& emb, const NfElement& x);

}  // namespace wt1
