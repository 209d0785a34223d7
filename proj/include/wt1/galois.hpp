#pragma once

#include "wt1/numberfield.hpp"
#include "wt1/padic.hpp"

#include <optional>
#include <vector>

namespace wt1 {

struct GroupTable {
    int n = 0;
    std::vector<std::vector<int>> mul;  // mul[i][j] = i o j (apply j first, then i)
    std::vector<int> inv;
    int id = 0;

    int conj(int g, int h) const { return mul[g][mul[h][inv[g]]]; }  // g h g^{-1}
};

// Dihedral marking: cyclic index-2 subgroup G'' = Gal(H/M), an involution
// sigma outside it, and (when identified) the complex conjugation c in G''.
struct DihedralShape {
    GroupTable T;
    std::vector<int> gm;  // indices of G'' elements, gm[0] = identity
    std::vector<bool> in_gm;
    int sigma = -1;
    int conj = -1;
};

// Synthetic dihedral group of order 2m (m >= 1) for character-level work:
// rotations r^0..r^{m-1} then reflections s r^0..s r^{m-1}; sigma = s,
// conj = r^{m/2} when m is even.
DihedralShape make_dihedral_shape(int m);

// Field-backed Galois data: H Galois over F with the elements of Gal(H/F)
// given as exact polynomial maps theta -> P(theta).
struct DihedralData {
    NumberField H;
    int base_degree;              // [F:Q]
    std::vector<QPoly> elem;      // P_g per group index, elem[shape.T.id] = x
    DihedralShape S;

    // apply a group element to a field element
    NfElement apply(int g, const NfElement& x) const;
};

// Build and fully verify the group from generator maps. m_gen_in_H pins M
// inside H so that G'' can be recognized; sigma_map/conj_map select the
// marked elements (conj_map optional).
DihedralData build_dihedral_data(NumberField H, int base_degree,
                                 const std::vector<QPoly>& generator_maps,
                                 const NfElement& m_gen_in_H,
                                 const QPoly& sigma_map,
                                 const std::optional<QPoly>& conj_map);

// Exact character on G'' with values in mu_m, stored as exponents of zeta_m.
struct Character {
    Z m = 1;
    std::vector<Z> exp;        // indexed by group element, meaningful on G'' only
    std::vector<bool> defined;

    Z value_exp(int g) const;
    bool is_trivial(const DihedralShape& S) const;
};

// psi(r0) = zeta_m^k extended multiplicatively along the cyclic G''.
Character make_character(const DihedralShape& S, int r0, const Z& m, const Z& k);

struct HeartCharacter {
    Character chi;      // psi / psi^sigma
    bool degenerate;    // trivial on a nontrivial G''
    bool quadratic;     // chi^2 trivial
};

// psi_heart(g) = psi(g) * psi(sigma^-1 g sigma)^{-1}
HeartCharacter heart_character(const Character& psi, const DihedralShape& S);

// eta(g) = psi(sigma g), eta'(g) = psi(g sigma^-1), for g outside G''.
// Error ElementInGM when g lies in G''. Returns exponents of zeta_m.
std::pair<Z, Z> eta_value(const Character& psi, const DihedralShape& S, int g);

// (dim pi^{+tau}, dim pi^{-tau}) = ((dim + tr)/2, (dim - tr)/2).
// Error NonIntegralResult when the halves are not integers.
std::pair<Z, Z> eigenspace_dims(const Z& dim, const Z& trace);
// same, verifying tau^2 = 1 first (error NonInvolution)
std::pair<Z, Z> eigenspace_dims(const DihedralShape& S, int tau, const Z& dim, const Z& trace);

struct InducedCharacterData {
    Z dim;
    std::vector<Z> traces;  // character values at the conjugations tau_i
    bool trivial = false;
};

struct MultiplicityBound {
    Z bound;
    bool equality_under_Leopoldt;
};

// m_pi >= sum_i dim pi^{-tau_i} for nontrivial pi; m_1 >= 1.
MultiplicityBound multiplicity_bound(const InducedCharacterData& pi);

// Frobenius attached to lambda: the unique g with g(theta) = theta^q mod lambda,
// where q is the residue size of the F-prime below. Checked to stabilize lambda
// and to be unique. Errors: RamifiedPrime (lambda.e > 1 or any ramified factor).
int frobenius_at(const DihedralData& D, const Z& q, const PrimeFactor& lambda,
                 const std::vector<PrimeFactor>& all_factors);

// image ideal g(lambda) among the factors of the same rational prime
int prime_image(const DihedralData& D, int g, const std::vector<PrimeFactor>& factors, int t);

// right action on p-adic embedding labels: iota_j o g
std::vector<std::vector<int>> embedding_action(const DihedralData& D, const EmbeddingSet& E);

}  // namespace wt1
