#include "wt1/galois.hpp"

#include <algorithm>

namespace wt1 {

DihedralShape make_dihedral_shape(int m) {
    if (m < 1) fail("BadGroup", "dihedral parameter must be >= 1");
    int n = 2 * m;
    GroupTable T;
    T.n = n;
    T.mul.assign(n, std::vector<int>(n, 0));
    T.inv.assign(n, 0);
    // element i < m: r^i; element m + i: s r^i with s r s^{-1} = r^{-1}
    auto enc = [m](int flip, int rot) { return flip ? m + ((rot % m + m) % m) : ((rot % m + m) % m); };
    for (int i = 0; i < n; ++i) {
        int fi = i >= m, ri = fi ? i - m : i;
        for (int j = 0; j < n; ++j) {
            int fj = j >= m, rj = fj ? j - m : j;
            // multiplicatively: (s^{fi} r^{ai})(s^{fj} r^{aj}) = s^{fi+fj} r^{aj + (-1)^{fj} ai}
            int rot = rj + (fj ? -ri : ri);
            T.mul[i][j] = enc(fi ^ fj, rot);
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (T.mul[i][j] == 0) T.inv[i] = j;
    T.id = 0;
    DihedralShape S;
    S.T = T;
    for (int i = 0; i < m; ++i) S.gm.push_back(i);
    S.in_gm.assign(n, false);
    for (int i = 0; i < m; ++i) S.in_gm[i] = true;
    S.sigma = m;  // s
    S.conj = (m % 2 == 0 && m > 1) ? m / 2 : -1;
    return S;
}

NfElement DihedralData::apply(int g, const NfElement& x) const {
    return nf_from_poly(H, poly_compose_mod(nf_to_poly(x), elem[g], H.f));
}

DihedralData build_dihedral_data(NumberField H, int base_degree,
                                 const std::vector<QPoly>& generator_maps,
                                 const NfElement& m_gen_in_H,
                                 const QPoly& sigma_map,
                                 const std::optional<QPoly>& conj_map) {
    const int degH = H.degree;
    if (base_degree < 1 || degH % (2 * base_degree) != 0)
        fail("BadGroup", "degree of H incompatible with [F:Q]");
    const int order = degH / base_degree;

    auto verify_map = [&](const QPoly& P) {
        QPoly img = poly_compose_mod(H.f, poly_mod(P, H.f), H.f);
        if (!img.is_zero()) fail("BadAutomorphism", "map image is not a root of the defining polynomial");
        return poly_mod(P, H.f);
    };

    std::vector<QPoly> elems;
    auto find = [&](const QPoly& P) -> int {
        for (size_t i = 0; i < elems.size(); ++i)
            if (elems[i] == P) return static_cast<int>(i);
        return -1;
    };
    elems.push_back(QPoly::x());
    std::vector<QPoly> gens;
    for (auto& g : generator_maps) gens.push_back(verify_map(g));
    gens.push_back(verify_map(sigma_map));
    if (conj_map) gens.push_back(verify_map(*conj_map));
    for (auto& g : gens)
        if (find(g) < 0) elems.push_back(g);
    // close under composition
    bool grew = true;
    while (grew) {
        grew = false;
        size_t sz = elems.size();
        for (size_t i = 0; i < sz && !grew; ++i) {
            for (size_t j = 0; j < sz; ++j) {
                QPoly prod = poly_compose_mod(elems[i], elems[j], H.f);  // j o i ... indexing fixed below
                if (find(prod) < 0) {
                    elems.push_back(prod);
                    grew = true;
                    if (elems.size() > static_cast<size_t>(order))
                        fail("BadGroup", "generated group larger than [H:F]");
                    break;
                }
            }
        }
    }
    if (static_cast<int>(elems.size()) != order)
        fail("BadGroup", "generators produce a group of order " + std::to_string(elems.size()) +
                             ", expected " + std::to_string(order));

    // canonical element order: identity first, then sorted by coefficient vectors
    std::sort(elems.begin() + 0, elems.end(), [](const QPoly& a, const QPoly& b) {
        if (a == QPoly::x()) return !(b == QPoly::x()) ? true : false;
        if (b == QPoly::x()) return false;
        if (a.c.size() != b.c.size()) return a.c.size() < b.c.size();
        return a.c < b.c;
    });

    DihedralData D{std::move(H), base_degree, elems, {}};
    auto& T = D.S.T;
    T.n = order;
    T.id = 0;
    if (!(D.elem[0] == QPoly::x())) fail("Internal", "identity not first after sort");
    T.mul.assign(order, std::vector<int>(order, -1));
    T.inv.assign(order, -1);
    auto idx = [&](const QPoly& P) {
        for (int i = 0; i < order; ++i)
            if (D.elem[i] == P) return i;
        fail("Internal", "group not closed");
        return -1;
    };
    for (int i = 0; i < order; ++i) {
        for (int j = 0; j < order; ++j) {
            // (i o j)(theta) = i(j(theta)) = P_j(P_i(theta))
            T.mul[i][j] = idx(poly_compose_mod(D.elem[j], D.elem[i], D.H.f));
        }
    }
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j)
            if (T.mul[i][j] == T.id) T.inv[i] = j;

    // G'' = stabilizer of the embedded M generator
    QPoly mpol = nf_to_poly(m_gen_in_H);
    D.S.in_gm.assign(order, false);
    for (int g = 0; g < order; ++g) {
        if (poly_compose_mod(mpol, D.elem[g], D.H.f) == poly_mod(mpol, D.H.f)) {
            D.S.in_gm[g] = true;
            D.S.gm.push_back(g);
        }
    }
    if (static_cast<int>(D.S.gm.size()) * 2 != order)
        fail("BadGroup", "Gal(H/M) does not have index 2 (got order " +
                             std::to_string(D.S.gm.size()) + " in " + std::to_string(order) + ")");
    // G'' must be cyclic
    {
        int m = static_cast<int>(D.S.gm.size());
        bool cyclic = false;
        for (int g : D.S.gm) {
            int k = g, ord = 1;
            while (k != T.id) {
                k = T.mul[k][g];
                ++ord;
            }
            if (ord == m) {
                cyclic = true;
                break;
            }
        }
        if (!cyclic && m > 1) fail("BadGroup", "Gal(H/M) is not cyclic");
    }
    D.S.sigma = idx(poly_mod(sigma_map, D.H.f));
    if (D.S.in_gm[D.S.sigma]) fail("BadGroup", "sigma fixes M");
    if (T.mul[D.S.sigma][D.S.sigma] != T.id) fail("BadGroup", "sigma is not an involution");
    // sigma-conjugation stability of G''
    for (int g : D.S.gm)
        if (!D.S.in_gm[T.conj(D.S.sigma, g)]) fail("BadGroup", "G'' not stable under sigma");
    if (conj_map) {
        D.S.conj = idx(poly_mod(*conj_map, D.H.f));
        int c = D.S.conj;
        if (!D.S.in_gm[c]) fail("BadGroup", "complex conjugation does not fix M");
        if (T.mul[c][c] != T.id) fail("BadGroup", "complex conjugation is not an involution");
        for (int g = 0; g < order; ++g)
            if (T.conj(g, c) != c) fail("BadGroup", "complex conjugation is not central");
    }
    return D;
}

Z Character::value_exp(int g) const {
    if (g < 0 || g >= static_cast<int>(defined.size()) || !defined[g])
        fail("ElementInGM", "character not defined at this element");
    return exp[g];
}

bool Character::is_trivial(const DihedralShape& S) const {
    for (int g : S.gm)
        if (exp[g] % m != 0) return false;
    return true;
}

Character make_character(const DihedralShape& S, int r0, const Z& m, const Z& k) {
    if (m < 1) fail("BadCharacter", "order must be positive");
    if (!S.in_gm[r0]) fail("ElementInGM", "generator must lie in G''");
    int n = S.T.n;
    Character chi;
    chi.m = m;
    chi.exp.assign(n, Z(0));
    chi.defined.assign(n, false);
    // walk the cyclic subgroup generated by r0
    int g = S.T.id, steps = 0;
    Z e = 0;
    do {
        if (chi.defined[g] && (chi.exp[g] - e) % m != 0)
            fail("BadCharacter", "inconsistent exponents on the generator orbit");
        chi.defined[g] = true;
        chi.exp[g] = ((e % m) + m) % m;
        g = S.T.mul[g][r0];
        e += k;
        ++steps;
    } while (g != S.T.id && steps <= n);
    if (static_cast<size_t>(steps) != S.gm.size())
        fail("BadCharacter", "chosen element does not generate G''");
    // closure consistency: r0^{|G''|} = 1 forces m | |G''| k
    if ((Z(steps) * k) % m != 0)
        fail("BadCharacter", "exponent incompatible with the generator order");
    return chi;
}

HeartCharacter heart_character(const Character& psi, const DihedralShape& S) {
    Character chi;
    chi.m = psi.m;
    chi.exp.assign(S.T.n, Z(0));
    chi.defined.assign(S.T.n, false);
    for (int g : S.gm) {
        int gs = S.T.conj(S.T.inv[S.sigma], g);  // sigma^{-1} g sigma
        Z e = ((psi.value_exp(g) - psi.value_exp(gs)) % psi.m + psi.m) % psi.m;
        chi.exp[g] = e;
        chi.defined[g] = true;
    }
    HeartCharacter out{std::move(chi), false, false};
    bool trivial = true, sq_trivial = true;
    for (int g : S.gm) {
        if (out.chi.exp[g] % out.chi.m != 0) trivial = false;
        if ((2 * out.chi.exp[g]) % out.chi.m != 0) sq_trivial = false;
    }
    out.degenerate = trivial && S.gm.size() > 1;
    out.quadratic = sq_trivial;
    if (S.gm.size() == 1) out.degenerate = false;  // nothing to cut: plumbing tower H = M
    return out;
}

std::pair<Z, Z> eta_value(const Character& psi, const DihedralShape& S, int g) {
    if (S.in_gm[g]) fail("ElementInGM", "eta is defined outside G'' only");
    int sg = S.T.mul[S.sigma][g];            // sigma g
    int gs = S.T.mul[g][S.T.inv[S.sigma]];   // g sigma^{-1}
    return {psi.value_exp(sg), psi.value_exp(gs)};
}

std::pair<Z, Z> eigenspace_dims(const Z& dim, const Z& trace) {
    Z plus = dim + trace, minus = dim - trace;
    if (plus % 2 != 0 || minus % 2 != 0)
        fail("NonIntegralResult", "character data inconsistent: (dim +- trace) is odd");
    Z dplus = plus / 2, dminus = minus / 2;
    if (dplus < 0 || dminus < 0)
        fail("NonIntegralResult", "negative eigenspace dimension");
    return {dplus, dminus};
}

std::pair<Z, Z> eigenspace_dims(const DihedralShape& S, int tau, const Z& dim, const Z& trace) {
    if (S.T.mul[tau][tau] != S.T.id) fail("NonInvolution", "tau^2 != 1");
    return eigenspace_dims(dim, trace);
}

MultiplicityBound multiplicity_bound(const InducedCharacterData& pi) {
    if (pi.trivial) return MultiplicityBound{Z(1), false};
    Z total = 0;
    for (const Z& tr : pi.traces) total += eigenspace_dims(pi.dim, tr).second;
    return MultiplicityBound{total, true};
}

int frobenius_at(const DihedralData& D, const Z& q, const PrimeFactor& lambda,
                 const std::vector<PrimeFactor>& all_factors) {
    for (const auto& P : all_factors)
        if (P.e > 1) fail("RamifiedPrime", P.ell.str() + " ramifies in H");
    if (lambda.e != 1) fail("RamifiedPrime", "lambda is ramified");
    ResidueField R = prime_residue_field(D.H, lambda);
    FqElem target = fq_pow(R.k, R.theta, q);
    int found = -1;
    for (int g = 0; g < D.S.T.n; ++g) {
        FpPoly red;
        try {
            red = fp_reduce(D.elem[g], R.k.p);
        } catch (const error&) {
            fail("BadReduction", "automorphism map has denominators divisible by ell");
        }
        if (fq_eval_poly(R.k, red, R.theta) == target) {
            if (found >= 0) fail("AmbiguousFrobenius", "two automorphisms agree mod lambda");
            found = g;
        }
    }
    if (found < 0) fail("Internal", "no automorphism realizes Frobenius mod lambda");
    // decomposition-group check: found must stabilize lambda
    int t = -1;
    for (size_t i = 0; i < all_factors.size(); ++i)
        if (all_factors[i] == lambda) t = static_cast<int>(i);
    if (t >= 0 && prime_image(D, found, all_factors, t) != t)
        fail("Internal", "Frobenius candidate does not stabilize lambda");
    return found;
}

int prime_image(const DihedralData& D, int g, const std::vector<PrimeFactor>& factors, int t) {
    // g(lambda_t) = (ell, gbar_t(P_g(theta))): locate the factor it vanishes at
    uint64_t p = static_cast<uint64_t>(factors[t].ell);
    FpPoly Pg = fp_reduce(D.elem[g], p);
    int found = -1;
    for (size_t s = 0; s < factors.size(); ++s) {
        ResidueField R = prime_residue_field(D.H, factors[s]);
        FqElem img = fq_eval_poly(R.k, Pg, R.theta);
        FqElem val = fq_eval_poly(R.k, factors[t].gen, img);
        if (val.is_zero()) {
            if (found >= 0) fail("Internal", "prime image not unique");
            found = static_cast<int>(s);
        }
    }
    if (found < 0) fail("Internal", "prime image not found");
    return found;
}

std::vector<std::vector<int>> embedding_action(const DihedralData& D, const EmbeddingSet& E) {
    const PadicContext& c = *E.ctx;
    int n = static_cast<int>(E.embs.size());
    std::vector<std::vector<int>> act(D.S.T.n, std::vector<int>(n, -1));
    for (int g = 0; g < D.S.T.n; ++g) {
        for (int j = 0; j < n; ++j) {
            RingElem img = embed_nf_ring(D.H, nf_from_poly(D.H, D.elem[g]), c, E.embs[j]);
            int hit = -1;
            for (int t = 0; t < n; ++t) {
                if (E.embs[t].root == img) {
                    hit = t;
                    break;
                }
            }
            if (hit < 0) fail("EmbeddingGap", "Galois image of a root is not among the embeddings");
            act[g][j] = hit;
        }
    }
    return act;
}

}  // namespace wt1
