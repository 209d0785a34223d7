#include "wt1/numberfield.hpp"

#include <algorithm>
#include <limits>

namespace wt1 {

NumberField::NumberField(QPoly defining) : f(std::move(defining)) {
    if (!poly_is_monic(f) || !poly_is_integral(f))
        fail("NotMonicIntegral", "defining polynomial must be monic with integer coefficients");
    degree = f.degree();
    if (degree < 1) fail("DegreeTooSmall", "defining polynomial must have degree >= 1");
    if (degree > 1 && !poly_irreducible_over_Q(f))
        fail("ReduciblePolynomial", "defining polynomial factors over Q: " + poly_to_string(f));
    Q d = poly_discriminant(f);
    if (d == 0) fail("SingularPolynomial", "zero discriminant");
    poly_disc = q_num(d);  // integral for monic integral f
}

NfElement NfElement::from_rational(const NumberField& K, const Q& a) {
    std::vector<Q> c(K.degree, Q(0));
    c[0] = a;
    return NfElement(std::move(c));
}

NfElement NfElement::gen(const NumberField& K) {
    std::vector<Q> c(K.degree, Q(0));
    if (K.degree == 1) {
        // theta is the root of a degree-1 polynomial x + a0
        c[0] = -K.f.c[0];
    } else {
        c[1] = 1;
    }
    return NfElement(std::move(c));
}

bool NfElement::is_zero() const {
    for (const auto& x : coords)
        if (x != 0) return false;
    return true;
}

static void check_len(const NumberField& K, const NfElement& a) {
    if (static_cast<int>(a.coords.size()) != K.degree)
        fail("CoordLength", "element coordinate length does not match field degree");
}

NfElement nf_add(const NumberField& K, const NfElement& a, const NfElement& b) {
    check_len(K, a);
    check_len(K, b);
    NfElement r = a;
    for (int i = 0; i < K.degree; ++i) r.coords[i] += b.coords[i];
    return r;
}

NfElement nf_sub(const NumberField& K, const NfElement& a, const NfElement& b) {
    check_len(K, a);
    check_len(K, b);
    NfElement r = a;
    for (int i = 0; i < K.degree; ++i) r.coords[i] -= b.coords[i];
    return r;
}

NfElement nf_neg(const NumberField& K, const NfElement& a) {
    check_len(K, a);
    NfElement r = a;
    for (auto& x : r.coords) x = -x;
    return r;
}

NfElement nf_scale(const NumberField& K, const Q& s, const NfElement& a) {
    check_len(K, a);
    NfElement r = a;
    for (auto& x : r.coords) x *= s;
    return r;
}

QPoly nf_to_poly(const NfElement& a) { return QPoly(a.coords); }

NfElement nf_from_poly(const NumberField& K, const QPoly& g) {
    QPoly r = poly_mod(g, K.f);
    std::vector<Q> c(K.degree, Q(0));
    for (int i = 0; i <= r.degree(); ++i) c[i] = r.c[i];
    return NfElement(std::move(c));
}

NfElement nf_mul(const NumberField& K, const NfElement& a, const NfElement& b) {
    check_len(K, a);
    check_len(K, b);
    return nf_from_poly(K, nf_to_poly(a) * nf_to_poly(b));
}

NfElement nf_inv(const NumberField& K, const NfElement& a) {
    check_len(K, a);
    if (a.is_zero()) fail("ZeroElement", "inverse of zero field element");
    // extended Euclid in Q[x] against the defining polynomial
    QPoly r0 = K.f, r1 = nf_to_poly(a);
    QPoly s0 = QPoly::zero(), s1 = QPoly::one();
    while (!r1.is_zero()) {
        auto [q, r2] = poly_divmod(r0, r1);
        QPoly s2 = s0 - q * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if (r0.degree() != 0) fail("NotInvertible", "defining polynomial not irreducible?");
    return nf_from_poly(K, (Q(1) / r0.c[0]) * s0);
}

NfElement nf_pow(const NumberField& K, const NfElement& a, const Z& e) {
    if (e < 0) return nf_pow(K, nf_inv(K, a), -e);
    NfElement r = NfElement::from_rational(K, 1);
    NfElement base = a;
    Z k = e;
    while (k > 0) {
        if ((k & 1) != 0) r = nf_mul(K, r, base);
        base = nf_mul(K, base, base);
        k >>= 1;
    }
    return r;
}

Q nf_norm(const NumberField& K, const NfElement& x) {
    check_len(K, x);
    if (x.is_zero()) return Q(0);
    // product of the conjugates of x = resultant of f and the coordinate polynomial
    return poly_resultant(K.f, nf_to_poly(x));
}

bool nf_is_integral(const NfElement& x) {
    for (const auto& c : x.coords)
        if (q_den(c) != 1) return false;
    return true;
}

Z nf_denominator(const NfElement& x) {
    Z d = 1;
    for (const auto& c : x.coords) {
        Z den = q_den(c);
        d = d / z_gcd(d, den) * den;
    }
    return d;
}

static QPoly lift_monic(const FpPoly& g) {
    std::vector<Q> c(g.c.size());
    for (size_t i = 0; i < g.c.size(); ++i) c[i] = Q(Z(g.c[i]));
    return QPoly(std::move(c));
}

std::vector<PrimeFactor> factor_rational_prime(const NumberField& K, const Z& ell,
                                               bool assume_maximal) {
    if (ell <= 1 || ell > Z(std::numeric_limits<int64_t>::max()) ||
        !is_prime_u64(static_cast<uint64_t>(ell)))
        fail("CompositeModulus", ell.str() + " is not a prime in range");
    uint64_t p = static_cast<uint64_t>(ell);
    FpPoly fbar = fp_reduce(K.f, p);
    if (fbar.degree() != K.degree) fail("BadReduction", "leading coefficient vanished mod ell");
    auto factors = fp_factor(fbar);
    bool ramified = false;
    for (auto& [g, e] : factors)
        if (e > 1) ramified = true;
    if (ramified && !assume_maximal) {
        // Dedekind criterion: with fbar = prod g_i^{e_i}, set g* = prod g_i,
        // h* = fbar/g*, T = (lift(g*)lift(h*) - f)/ell; Z[theta] is maximal at
        // ell iff gcd(Tbar, g*, h*) = 1.
        FpPoly gstar = FpPoly::one(p);
        for (auto& [g, e] : factors) gstar = fp_mul(gstar, g);
        FpPoly hstar = fp_divmod(fbar, gstar).first;
        QPoly G = lift_monic(gstar), H = lift_monic(hstar);
        QPoly T = G * H - K.f;
        for (auto& c : T.c) c /= Q(ell);
        if (!poly_is_integral(T)) fail("Internal", "Dedekind lift not divisible by ell");
        FpPoly Tbar = fp_reduce(T, p);
        FpPoly d = fp_gcd(fp_gcd(Tbar, gstar), hstar);
        if (d.degree() != 0)
            fail("IndexDivisor", ell.str() + " divides the index [O_K : Z[theta]]; " +
                                     "re-present the field with a different defining polynomial");
    }
    std::vector<PrimeFactor> out;
    for (auto& [g, e] : factors) out.push_back(PrimeFactor{ell, e, g.degree(), g});
    std::sort(out.begin(), out.end(),
              [](const PrimeFactor& a, const PrimeFactor& b) { return a.gen < b.gen; });
    int sum = 0;
    for (auto& P : out) sum += P.e * P.f;
    if (sum != K.degree) fail("Internal", "sum e_i f_i != degree");
    return out;
}

ResidueField prime_residue_field(const NumberField& K, const PrimeFactor& P) {
    (void)K;
    FqContext k(static_cast<uint64_t>(P.ell), P.gen);
    FqElem theta = fq_reduce(k, FpPoly::x(k.p));
    return ResidueField{std::move(k), std::move(theta)};
}

FqElem nf_mod_prime(const NumberField& K, const NfElement& x, const ResidueField& R) {
    check_len(K, x);
    FpPoly xp = fp_reduce(nf_to_poly(x), R.k.p);
    return fq_eval_poly(R.k, xp, R.theta);
}

// ---- ideal lattices --------------------------------------------------------

static std::vector<Z> coords_of_integral(const NumberField& K, const NfElement& x) {
    std::vector<Z> v(K.degree);
    for (int i = 0; i < K.degree; ++i) {
        if (q_den(x.coords[i]) != 1) fail("NotIntegral", "lattice vector must be integral");
        v[i] = q_num(x.coords[i]);
    }
    return v;
}

// integer row echelon with pivots on the diagonal (full-rank input expected)
static IdealLattice hnf(int n, std::vector<std::vector<Z>> rows) {
    int r = 0;
    for (int j = 0; j < n && r < static_cast<int>(rows.size()); ++j) {
        // gcd-eliminate column j among rows r..end
        while (true) {
            int best = -1;
            for (int i = r; i < static_cast<int>(rows.size()); ++i) {
                if (rows[i][j] != 0 && (best == -1 || z_abs(rows[i][j]) < z_abs(rows[best][j])))
                    best = i;
            }
            if (best == -1) break;
            std::swap(rows[r], rows[best]);
            bool clean = true;
            for (int i = r + 1; i < static_cast<int>(rows.size()); ++i) {
                if (rows[i][j] == 0) continue;
                Z q = rows[i][j] / rows[r][j];  // truncated division is fine here
                if (q != 0)
                    for (int t = 0; t < n; ++t) rows[i][t] -= q * rows[r][t];
                if (rows[i][j] != 0) clean = false;
            }
            if (clean) break;
        }
        if (rows[r][j] == 0) fail("Internal", "ideal lattice not full rank");
        if (rows[r][j] < 0)
            for (int t = 0; t < n; ++t) rows[r][t] = -rows[r][t];
        ++r;
    }
    if (r != n) fail("Internal", "ideal lattice rank deficient");
    rows.resize(n);
    // reduce entries above each pivot for a canonical form
    for (int j = n - 1; j >= 0; --j) {
        for (int i = 0; i < j; ++i) {
            Z q = rows[i][j] / rows[j][j];
            if (rows[i][j] < 0 && rows[i][j] % rows[j][j] != 0) q -= 1;  // floor
            if (q != 0)
                for (int t = 0; t < n; ++t) rows[i][t] -= q * rows[j][t];
        }
    }
    return IdealLattice{n, std::move(rows)};
}

IdealLattice ideal_from_two_elements(const NumberField& K, const PrimeFactor& P) {
    int n = K.degree;
    NfElement g = nf_from_poly(K, lift_monic(P.gen));
    std::vector<std::vector<Z>> rows;
    for (int i = 0; i < n; ++i) {
        NfElement ti = nf_pow(K, NfElement::gen(K), Z(i));
        rows.push_back(coords_of_integral(K, nf_scale(K, Q(P.ell), ti)));
        rows.push_back(coords_of_integral(K, nf_mul(K, g, ti)));
    }
    return hnf(n, std::move(rows));
}

IdealLattice ideal_mul(const NumberField& K, const IdealLattice& A, const IdealLattice& B) {
    int n = K.degree;
    std::vector<std::vector<Z>> rows;
    rows.reserve(static_cast<size_t>(n) * n);
    for (const auto& a : A.rows) {
        std::vector<Q> ac(a.begin(), a.end());
        NfElement ea(ac);
        for (const auto& b : B.rows) {
            std::vector<Q> bc(b.begin(), b.end());
            NfElement eb(bc);
            rows.push_back(coords_of_integral(K, nf_mul(K, ea, eb)));
        }
    }
    return hnf(n, std::move(rows));
}

bool ideal_contains(const IdealLattice& L, const std::vector<Z>& v) {
    std::vector<Z> x = v;
    // pivots on the diagonal: forward eliminate
    for (int j = 0; j < L.n; ++j) {
        if (x[j] % L.rows[j][j] != 0) return false;
        Z c = x[j] / L.rows[j][j];
        if (c != 0)
            for (int t = 0; t < L.n; ++t) x[t] -= c * L.rows[j][t];
    }
    for (const auto& t : x)
        if (t != 0) return false;
    return true;
}

int element_valuation(const NumberField& K, const NfElement& x, const PrimeFactor& P) {
    check_len(K, x);
    if (x.is_zero()) fail("ZeroElement", "valuation of the zero element");
    Z d = nf_denominator(x);
    NfElement y = nf_scale(K, Q(d), x);
    int vden = d == 1 ? 0 : z_val(d, P.ell) * P.e;

    Q ny = nf_norm(K, y);
    Z nnum = z_abs(q_num(ny));
    int bound = nnum % P.ell == 0 ? z_val(nnum, P.ell) : 0;
    if (bound == 0) {
        // cheap residue test still required: unit at P iff nonzero mod P
        return -vden + 0;
    }
    IdealLattice Pl = ideal_from_two_elements(K, P);
    IdealLattice Lk = Pl;
    std::vector<Z> yv = coords_of_integral(K, y);
    int v = 0;
    while (v < bound + 1 && ideal_contains(Lk, yv)) {
        ++v;
        Lk = ideal_mul(K, Lk, Pl);
    }
    return v - vden;
}

FieldEmbedding make_embedding(const NumberField& source, const NumberField& target,
                              const NfElement& gen_image) {
    // the image must satisfy the source defining polynomial
    NfElement acc = NfElement::zero(target);
    NfElement pw = NfElement::from_rational(target, 1);
    std::vector<NfElement> powers;
    for (int i = 0; i <= source.degree; ++i) {
        if (i < source.degree) powers.push_back(pw);
        acc = nf_add(target, acc, nf_scale(target, source.f.at(i), pw));
        pw = nf_mul(target, pw, gen_image);
    }
    if (!acc.is_zero())
        fail("BadEmbedding", "generator image does not satisfy the source polynomial");
    return FieldEmbedding{gen_image, std::move(powers)};
}

NfElement embed_element(const NumberField& target, const FieldEmbedding& emb, const NfElement& x) {
    NfElement acc = NfElement::zero(target);
    if (x.coords.size() != emb.gen_powers.size())
        fail("CoordLength", "element does not belong to the embedding's source field");
    for (size_t i = 0; i < x.coords.size(); ++i)
        acc = nf_add(target, acc, nf_scale(target, x.coords[i], emb.gen_powers[i]));
    return acc;
}

}  // namespace wt1
