#include "wt1/fp.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace wt1 {

void FpPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

bool FpPoly::operator<(const FpPoly& o) const {
    if (c.size() != o.c.size()) return c.size() < o.c.size();
    for (size_t i = c.size(); i-- > 0;)
        if (c[i] != o.c[i]) return c[i] < o.c[i];
    return false;
}

static void check_same_p(const FpPoly& a, const FpPoly& b) {
    if (a.p != b.p) fail("ModulusMismatch", "mixed F_p polynomials");
}

FpPoly fp_add(const FpPoly& a, const FpPoly& b) {
    check_same_p(a, b);
    std::vector<uint64_t> r(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) r[i] = (a.at(i) + b.at(i)) % a.p;
    return FpPoly(a.p, std::move(r));
}

FpPoly fp_sub(const FpPoly& a, const FpPoly& b) {
    check_same_p(a, b);
    std::vector<uint64_t> r(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) r[i] = (a.at(i) + a.p - b.at(i) % a.p) % a.p;
    return FpPoly(a.p, std::move(r));
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b) {
    check_same_p(a, b);
    if (a.is_zero() || b.is_zero()) return FpPoly::zero(a.p);
    std::vector<uint64_t> r(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j) {
            r[i + j] = (r[i + j] + static_cast<unsigned __int128>(a.c[i]) * b.c[j]) % a.p;
        }
    }
    return FpPoly(a.p, std::move(r));
}

FpPoly fp_scale(uint64_t s, const FpPoly& a) {
    FpPoly r = a;
    s %= a.p;
    for (auto& x : r.c) x = mulmod_u64(x, s, a.p);
    r.trim();
    return r;
}

static uint64_t inv_u64(uint64_t a, uint64_t p) {
    return powmod_u64(a % p, p - 2, p);
}

std::pair<FpPoly, FpPoly> fp_divmod(const FpPoly& a, const FpPoly& b) {
    check_same_p(a, b);
    if (b.is_zero()) fail("DivisionByZero", "F_p polynomial division by zero");
    FpPoly rem = a;
    if (a.degree() < b.degree()) return {FpPoly::zero(a.p), rem};
    std::vector<uint64_t> q(a.degree() - b.degree() + 1, 0);
    uint64_t binv = inv_u64(b.c.back(), a.p);
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
        int k = rem.degree() - b.degree();
        uint64_t f = mulmod_u64(rem.c.back(), binv, a.p);
        q[k] = f;
        for (size_t i = 0; i < b.c.size(); ++i) {
            uint64_t sub = mulmod_u64(f, b.c[i], a.p);
            rem.c[k + i] = (rem.c[k + i] + a.p - sub) % a.p;
        }
        rem.trim();
    }
    return {FpPoly(a.p, std::move(q)), rem};
}

FpPoly fp_mod(const FpPoly& a, const FpPoly& b) { return fp_divmod(a, b).second; }

FpPoly fp_monic(const FpPoly& a) {
    if (a.is_zero()) return a;
    return fp_scale(inv_u64(a.c.back(), a.p), a);
}

FpPoly fp_gcd(FpPoly a, FpPoly b) {
    while (!b.is_zero()) {
        FpPoly r = fp_mod(a, b);
        a = b;
        b = r;
    }
    return fp_monic(a);
}

FpPoly fp_powmod(const FpPoly& a, const Z& e, const FpPoly& m) {
    FpPoly base = fp_mod(a, m);
    FpPoly r = FpPoly::one(a.p);
    Z k = e;
    while (k > 0) {
        if ((k & 1) != 0) r = fp_mod(fp_mul(r, base), m);
        base = fp_mod(fp_mul(base, base), m);
        k >>= 1;
    }
    return r;
}

FpPoly fp_derivative(const FpPoly& a) {
    if (a.degree() <= 0) return FpPoly::zero(a.p);
    std::vector<uint64_t> r(a.c.size() - 1, 0);
    for (size_t i = 1; i < a.c.size(); ++i) r[i - 1] = mulmod_u64(i % a.p, a.c[i], a.p);
    return FpPoly(a.p, std::move(r));
}

uint64_t fp_eval(const FpPoly& f, uint64_t x) {
    uint64_t r = 0;
    x %= f.p;
    for (auto it = f.c.rbegin(); it != f.c.rend(); ++it) r = (mulmod_u64(r, x, f.p) + *it) % f.p;
    return r;
}

FpPoly fp_compose_mod(const FpPoly& f, const FpPoly& g, const FpPoly& m) {
    FpPoly r = FpPoly::zero(f.p);
    for (auto it = f.c.rbegin(); it != f.c.rend(); ++it) {
        r = fp_mod(fp_add(fp_mul(r, g), FpPoly(f.p, {*it})), m);
    }
    return r;
}

FpPoly fp_reduce(const QPoly& f, uint64_t p) {
    std::vector<uint64_t> r(f.c.size(), 0);
    for (size_t i = 0; i < f.c.size(); ++i) {
        Z num = q_num(f.c[i]) % Z(p);
        Z den = q_den(f.c[i]) % Z(p);
        if (den == 0) fail("BadReduction", "denominator divisible by " + std::to_string(p));
        uint64_t n = static_cast<uint64_t>((num % Z(p) + Z(p)) % Z(p));
        uint64_t d = static_cast<uint64_t>((den % Z(p) + Z(p)) % Z(p));
        r[i] = mulmod_u64(n, inv_u64(d, p), p);
    }
    return FpPoly(p, std::move(r));
}

FpPoly fp_invmod(const FpPoly& a, const FpPoly& m) {
    // extended Euclid
    FpPoly r0 = m, r1 = fp_mod(a, m);
    FpPoly s0 = FpPoly::zero(m.p), s1 = FpPoly::one(m.p);
    while (!r1.is_zero()) {
        auto [q, r2] = fp_divmod(r0, r1);
        FpPoly s2 = fp_sub(s0, fp_mul(q, s1));
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if (r0.degree() != 0) fail("NotInvertible", "element not invertible in F_p[x]/(m)");
    return fp_mod(fp_scale(inv_u64(r0.c[0], m.p), s0), m);
}

// squarefree decomposition, handling p-th powers; returns (g, multiplicity)
static std::vector<std::pair<FpPoly, int>> fp_squarefree(const FpPoly& f0) {
    std::vector<std::pair<FpPoly, int>> out;
    uint64_t p = f0.p;
    FpPoly f = fp_monic(f0);

    std::function<void(FpPoly, int)> rec = [&](FpPoly g, int mult) {
        FpPoly d = fp_derivative(g);
        if (d.is_zero()) {
            // g = h(x^p); take p-th root coefficientwise (Frobenius on F_p is identity)
            std::vector<uint64_t> h;
            for (size_t i = 0; i < g.c.size(); i += p) h.push_back(g.c[i]);
            rec(FpPoly(p, std::move(h)), mult * static_cast<int>(p));
            return;
        }
        FpPoly c = fp_gcd(g, d);
        FpPoly w = fp_divmod(g, c).first;
        int i = 1;
        while (w.degree() > 0) {
            FpPoly y = fp_gcd(w, c);
            FpPoly z = fp_divmod(w, y).first;
            if (z.degree() > 0) out.push_back({fp_monic(z), mult * i});
            ++i;
            w = y;
            c = fp_divmod(c, y).first;
        }
        if (c.degree() > 0) rec(c, mult);
    };
    rec(f, 1);
    return out;
}

// distinct-degree on a squarefree monic input: list of (product, degree)
static std::vector<std::pair<FpPoly, int>> fp_ddf(const FpPoly& f) {
    std::vector<std::pair<FpPoly, int>> out;
    uint64_t p = f.p;
    FpPoly fstar = f;
    FpPoly w = fp_mod(FpPoly::x(p), fstar);
    int d = 0;
    while (fstar.degree() > 2 * (d + 1) - 1 && fstar.degree() > 0) {
        ++d;
        w = fp_powmod(w, Z(p), fstar);
        FpPoly g = fp_gcd(fp_sub(w, FpPoly::x(p)), fstar);
        if (g.degree() > 0) {
            out.push_back({g, d});
            fstar = fp_divmod(fstar, g).first;
            w = fp_mod(w, fstar);
        }
    }
    if (fstar.degree() > 0) out.push_back({fstar, fstar.degree()});
    return out;
}

// equal-degree splitting (Cantor-Zassenhaus), deterministic seeding
static void fp_edf(const FpPoly& f, int d, SplitMix64& rng, std::vector<FpPoly>& out) {
    if (f.degree() == d) {
        out.push_back(fp_monic(f));
        return;
    }
    uint64_t p = f.p;
    int n = f.degree();
    while (true) {
        std::vector<uint64_t> rc(n, 0);
        for (int i = 0; i < n; ++i) rc[i] = rng.below(p);
        FpPoly a(p, std::move(rc));
        if (a.is_zero()) continue;
        FpPoly g = fp_gcd(a, f);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            fp_edf(g, d, rng, out);
            fp_edf(fp_divmod(f, g).first, d, rng, out);
            return;
        }
        FpPoly b;
        if (p == 2) {
            // trace map over F_{2^d}
            FpPoly t = fp_mod(a, f);
            FpPoly acc = t;
            for (int i = 1; i < d; ++i) {
                t = fp_mod(fp_mul(t, t), f);
                acc = fp_add(acc, t);
            }
            b = acc;
        } else {
            Z e = (z_pow(Z(p), d) - 1) / 2;
            b = fp_sub(fp_powmod(a, e, f), FpPoly::one(p));
        }
        g = fp_gcd(b, f);
        if (g.degree() > 0 && g.degree() < f.degree()) {
            fp_edf(g, d, rng, out);
            fp_edf(fp_divmod(f, g).first, d, rng, out);
            return;
        }
    }
}

std::vector<std::pair<FpPoly, int>> fp_factor(const FpPoly& f) {
    if (f.p < 2 || !is_prime_u64(f.p)) fail("CompositeModulus", std::to_string(f.p) + " is not prime");
    if (f.is_zero()) fail("ZeroPolynomial", "cannot factor the zero polynomial mod p");
    std::map<FpPoly, int> acc;
    uint64_t seed = 0x9e3779b97f4a7c15ull ^ f.p;
    for (uint64_t c : f.c) seed = seed * 1099511628211ull + c + 1;
    SplitMix64 rng(seed);
    for (auto& [g, mult] : fp_squarefree(f)) {
        for (auto& [prod, d] : fp_ddf(g)) {
            std::vector<FpPoly> irr;
            fp_edf(prod, d, rng, irr);
            for (auto& q : irr) acc[q] += mult;
        }
    }
    std::vector<std::pair<FpPoly, int>> out(acc.begin(), acc.end());
    return out;
}

bool fp_is_irreducible(const FpPoly& f) {
    if (f.degree() <= 0) return false;
    auto fs = fp_factor(f);
    return fs.size() == 1 && fs[0].second == 1;
}

FpPoly fp_find_irreducible(uint64_t p, int degree) {
    if (degree == 1) return FpPoly::x(p);
    // lexicographic scan over monic polynomials, constant-first ordering
    std::vector<uint64_t> c(degree + 1, 0);
    c[degree] = 1;
    while (true) {
        FpPoly f(p, c);
        f.c = c;  // keep exact length
        if (f.degree() == degree && fp_is_irreducible(f)) return f;
        int i = 0;
        while (i < degree) {
            if (++c[i] < p) break;
            c[i] = 0;
            ++i;
        }
        if (i == degree) fail("NoIrreducible", "no irreducible polynomial found (impossible)");
    }
}

}  // namespace wt1
