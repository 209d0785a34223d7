#include "wt1/poly.hpp"

#include "wt1/fp.hpp"

#include <algorithm>
#include <sstream>

namespace wt1 {

void QPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

QPoly QPoly::from_int(std::vector<long long> v) {
    std::vector<Q> out;
    out.reserve(v.size());
    for (long long x : v) out.emplace_back(x);
    return QPoly(std::move(out));
}

QPoly operator+(const QPoly& a, const QPoly& b) {
    std::vector<Q> r(std::max(a.c.size(), b.c.size()), Q(0));
    for (size_t i = 0; i < r.size(); ++i) r[i] = a.at(i) + b.at(i);
    return QPoly(std::move(r));
}

QPoly operator-(const QPoly& a, const QPoly& b) {
    std::vector<Q> r(std::max(a.c.size(), b.c.size()), Q(0));
    for (size_t i = 0; i < r.size(); ++i) r[i] = a.at(i) - b.at(i);
    return QPoly(std::move(r));
}

QPoly poly_neg(const QPoly& a) {
    QPoly r = a;
    for (auto& x : r.c) x = -x;
    return r;
}

QPoly operator*(const QPoly& a, const QPoly& b) {
    if (a.is_zero() || b.is_zero()) return QPoly::zero();
    std::vector<Q> r(a.c.size() + b.c.size() - 1, Q(0));
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return QPoly(std::move(r));
}

QPoly operator*(const Q& s, const QPoly& a) {
    if (s == 0) return QPoly::zero();
    QPoly r = a;
    for (auto& x : r.c) x *= s;
    return r;
}

std::pair<QPoly, QPoly> poly_divmod(const QPoly& a, const QPoly& b) {
    if (b.is_zero()) fail("DivisionByZero", "polynomial division by zero");
    QPoly rem = a;
    if (a.degree() < b.degree()) return {QPoly::zero(), rem};
    std::vector<Q> q(a.degree() - b.degree() + 1, Q(0));
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
        int k = rem.degree() - b.degree();
        Q f = rem.lead() / b.lead();
        q[k] = f;
        for (size_t i = 0; i < b.c.size(); ++i) rem.c[k + i] -= f * b.c[i];
        rem.trim();
    }
    return {QPoly(std::move(q)), rem};
}

QPoly poly_mod(const QPoly& a, const QPoly& b) { return poly_divmod(a, b).second; }

Q poly_eval(const QPoly& f, const Q& x) {
    Q r(0);
    for (auto it = f.c.rbegin(); it != f.c.rend(); ++it) r = r * x + *it;
    return r;
}

QPoly poly_compose_mod(const QPoly& f, const QPoly& g, const QPoly& m) {
    QPoly r = QPoly::zero();
    for (auto it = f.c.rbegin(); it != f.c.rend(); ++it) {
        r = poly_mod(r * g + QPoly::constant(*it), m);
    }
    return r;
}

QPoly poly_derivative(const QPoly& f) {
    if (f.degree() <= 0) return QPoly::zero();
    std::vector<Q> r(f.c.size() - 1);
    for (size_t i = 1; i < f.c.size(); ++i) r[i - 1] = Q(i) * f.c[i];
    return QPoly(std::move(r));
}

QPoly poly_gcd(const QPoly& a, const QPoly& b) {
    QPoly u = a, v = b;
    while (!v.is_zero()) {
        QPoly r = poly_mod(u, v);
        u = v;
        v = r;
    }
    if (u.is_zero()) return u;
    return (Q(1) / u.lead()) * u;
}

// Fraction-free Gaussian elimination (Bareiss) determinant over Z after
// clearing denominators; exact for desk-scale Sylvester matrices.
static Q det_exact(std::vector<std::vector<Q>> m) {
    size_t n = m.size();
    if (n == 0) return Q(1);
    // clear denominators row by row, tracking the factor pulled out
    Q scale(1);
    std::vector<std::vector<Z>> a(n, std::vector<Z>(n));
    for (size_t i = 0; i < n; ++i) {
        Z lcm = 1;
        for (size_t j = 0; j < n; ++j) {
            Z d = q_den(m[i][j]);
            lcm = lcm / z_gcd(lcm, d) * d;
        }
        scale /= Q(lcm);
        for (size_t j = 0; j < n; ++j) {
            Q v = m[i][j] * Q(lcm);
            a[i][j] = q_num(v);
        }
    }
    Z prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            size_t piv = k + 1;
            while (piv < n && a[piv][k] == 0) ++piv;
            if (piv == n) return Q(0);
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return scale * Q(sign * a[n - 1][n - 1]);
}

Q poly_resultant(const QPoly& a, const QPoly& b) {
    if (a.is_zero() || b.is_zero()) return Q(0);
    int n = a.degree(), m = b.degree();
    if (n == 0) return q_pow(a.c[0], m);
    if (m == 0) return q_pow(b.c[0], n);
    size_t dim = n + m;
    std::vector<std::vector<Q>> s(dim, std::vector<Q>(dim, Q(0)));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) s[i][i + j] = a.c[n - j];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) s[m + i][i + j] = b.c[m - j];
    return det_exact(std::move(s));
}

Q poly_discriminant(const QPoly& f) {
    int n = f.degree();
    if (n <= 0) fail("DegreeTooSmall", "discriminant needs degree >= 1");
    if (n == 1) return Q(1);
    Q res = poly_resultant(f, poly_derivative(f));
    Q d = res / f.lead();
    int e = (n * (n - 1) / 2) % 2;
    return e ? -d : d;
}

bool poly_is_monic(const QPoly& f) { return !f.is_zero() && f.lead() == 1; }

bool poly_is_integral(const QPoly& f) {
    for (const auto& x : f.c)
        if (q_den(x) != 1) return false;
    return true;
}

int poly_real_root_count(const QPoly& f) {
    if (f.degree() <= 0) return 0;
    QPoly g = f;
    QPoly sq = poly_gcd(g, poly_derivative(g));
    if (sq.degree() > 0) g = poly_divmod(g, sq).first;
    // Sturm chain
    std::vector<QPoly> chain;
    chain.push_back(g);
    chain.push_back(poly_derivative(g));
    while (!chain.back().is_zero()) {
        QPoly r = poly_neg(poly_mod(chain[chain.size() - 2], chain.back()));
        chain.push_back(r);
    }
    chain.pop_back();
    auto signs_at_inf = [&](int dir) {
        int changes = 0, last = 0;
        for (const auto& p : chain) {
            if (p.is_zero()) continue;
            int s = p.lead() > 0 ? 1 : -1;
            if (dir < 0 && (p.degree() % 2) == 1) s = -s;
            if (last != 0 && s != last) ++changes;
            last = s;
        }
        return changes;
    };
    return signs_at_inf(-1) - signs_at_inf(+1);
}

// Landau-Mignotte bound on coefficients of a monic factor of degree k.
static Z mignotte_bound(const QPoly& f, int k) {
    Q norm2(0);
    for (const auto& c : f.c) norm2 += c * c;
    Z n2 = q_num(norm2) / q_den(norm2) + 1;
    Z root = 1;
    while (root * root < n2) ++root;  // ceil sqrt, desk scale
    // conservative: 2^k * ||f||_2
    return (Z(1) << k) * root + 1;
}

// ---- integral polynomial arithmetic modulo p^K, for the lift-and-recombine
// irreducibility test ------------------------------------------------------

namespace {

using ZVec = std::vector<Z>;

ZVec zp_trim(ZVec a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

ZVec zp_reduce(const ZVec& a, const Z& m) {
    ZVec r = a;
    for (auto& x : r) x = ((x % m) + m) % m;
    return zp_trim(std::move(r));
}

ZVec zp_mul(const ZVec& a, const ZVec& b, const Z& m) {
    if (a.empty() || b.empty()) return {};
    ZVec r(a.size() + b.size() - 1, Z(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % m;
    return zp_reduce(r, m);
}

ZVec zp_sub(const ZVec& a, const ZVec& b, const Z& m) {
    ZVec r(std::max(a.size(), b.size()), Z(0));
    for (size_t i = 0; i < r.size(); ++i) {
        Z x = i < a.size() ? a[i] : Z(0), y = i < b.size() ? b[i] : Z(0);
        r[i] = ((x - y) % m + m) % m;
    }
    return zp_trim(std::move(r));
}

// remainder by a monic divisor
ZVec zp_rem(ZVec a, const ZVec& g, const Z& m) {
    while (a.size() >= g.size() && !g.empty()) {
        Z lead = a.back();
        size_t k = a.size() - g.size();
        for (size_t i = 0; i < g.size(); ++i) a[k + i] = ((a[k + i] - lead * g[i]) % m + m) % m;
        a = zp_trim(std::move(a));
        if (!a.empty() && a.size() >= g.size() && a.back() == 0) a = zp_trim(std::move(a));
    }
    return zp_reduce(a, m);
}

ZVec from_fp(const FpPoly& g) {
    ZVec r;
    for (uint64_t c : g.c) r.emplace_back(c);
    return r;
}

// One linear Hensel step: a factorization target = g h mod p^k becomes one
// mod p^{k+1}. Both factors stay monic; t is the inverse of h mod (g, p).
void hensel_step(const ZVec& target, ZVec& g, ZVec& h, const FpPoly& t, uint64_t p, const Z& pk) {
    Z pk1 = pk * Z(p);
    ZVec e = zp_sub(zp_reduce(target, pk1), zp_mul(g, h, pk1), pk1);
    std::vector<uint64_t> dc;
    for (const auto& x : e) {
        if (x % pk != 0) fail("Internal", "Hensel invariant broken");
        dc.push_back(static_cast<uint64_t>((x / pk) % Z(p)));
    }
    FpPoly d(p, std::move(dc));
    std::vector<uint64_t> gc, hc;
    for (const auto& x : g) gc.push_back(static_cast<uint64_t>(x % Z(p)));
    for (const auto& x : h) hc.push_back(static_cast<uint64_t>(x % Z(p)));
    FpPoly gbar(p, std::move(gc)), hbar(p, std::move(hc));
    // solve u hbar + v gbar = d with deg u < deg g: u = t d mod g, v by division
    FpPoly u = fp_mod(fp_mul(t, d), gbar);
    auto [v, rem] = fp_divmod(fp_sub(d, fp_mul(u, hbar)), gbar);
    if (!rem.is_zero()) fail("Internal", "Hensel correction not divisible");
    auto add_scaled = [&](ZVec& poly, const FpPoly& corr) {
        if (poly.size() < corr.c.size()) poly.resize(corr.c.size(), Z(0));
        for (size_t i = 0; i < corr.c.size(); ++i) poly[i] = (poly[i] + pk * Z(corr.c[i])) % pk1;
        for (auto& x : poly) x = ((x % pk1) + pk1) % pk1;
    };
    add_scaled(g, u);
    add_scaled(h, v);
}

// lift the full modular factorization of a monic squarefree-mod-p f to p^K
std::vector<ZVec> hensel_lift_factors(const QPoly& f, const std::vector<FpPoly>& factors,
                                      uint64_t p, int K) {
    std::vector<ZVec> out;
    Z pK = z_pow(Z(p), static_cast<uint64_t>(K));
    ZVec fz;
    for (const auto& c : f.c) fz.push_back(q_num(c));
    std::function<void(ZVec, size_t)> rec = [&](ZVec target, size_t idx) {
        if (idx + 1 == factors.size()) {
            out.push_back(zp_reduce(target, pK));
            return;
        }
        FpPoly g0 = factors[idx];
        FpPoly h0 = FpPoly::one(p);
        for (size_t i = idx + 1; i < factors.size(); ++i) h0 = fp_mul(h0, factors[i]);
        FpPoly t = fp_invmod(h0, g0);
        ZVec g = from_fp(g0), h = from_fp(h0);
        Z pk = Z(p);
        for (int k = 1; k < K; ++k) {
            hensel_step(target, g, h, t, p, pk);
            pk *= Z(p);
        }
        out.push_back(zp_reduce(g, pK));
        rec(std::move(h), idx + 1);
    };
    rec(std::move(fz), 0);
    return out;
}

}  // namespace

// Zassenhaus-style recombination: any true monic integral factor reduces mod p
// to a sub-product of the lifted factors, and with p^K beyond twice the
// Mignotte bound the balanced lift pins its coefficients exactly.
static bool has_nontrivial_factor(const QPoly& f, uint64_t p,
                                  const std::vector<FpPoly>& factors) {
    int n = f.degree();
    Z B = mignotte_bound(f, n / 2);
    int K = 1;
    Z pK(p);
    while (pK <= 2 * B) {
        pK *= Z(p);
        ++K;
    }
    std::vector<ZVec> lifted = hensel_lift_factors(f, factors, p, K);
    int r = static_cast<int>(lifted.size());
    for (unsigned mask = 1; mask + 1 < (1u << r); ++mask) {
        ZVec prod = {Z(1)};
        int deg = 0;
        for (int i = 0; i < r; ++i) {
            if (mask & (1u << i)) {
                prod = zp_mul(prod, lifted[i], pK);
                deg += static_cast<int>(lifted[i].size()) - 1;
            }
        }
        if (deg == 0 || deg > n / 2) continue;
        // balanced representative; reject on the coefficient bound, else divide
        std::vector<Q> cand(deg + 1, Q(0));
        bool within = true;
        for (int i = 0; i <= deg; ++i) {
            Z c = i < static_cast<int>(prod.size()) ? prod[i] : Z(0);
            if (2 * c > pK) c -= pK;
            if (z_abs(c) > B) {
                within = false;
                break;
            }
            cand[i] = Q(c);
        }
        if (!within) continue;
        QPoly g(cand);
        if (g.degree() == deg && poly_mod(f, g).is_zero()) return true;
    }
    return false;
}

bool poly_irreducible_over_Q(const QPoly& f) {
    if (!poly_is_monic(f) || !poly_is_integral(f))
        fail("NotMonicIntegral", "irreducibility test expects a monic integral polynomial");
    int n = f.degree();
    if (n == 1) return true;
    Q disc = poly_discriminant(f);
    if (disc == 0) return false;  // repeated root over Q-bar: reducible or non-squarefree
    // possible proper factor degrees, narrowed by factorization patterns mod p
    std::vector<bool> possible(n, true);  // index = degree 1..n-1
    possible[0] = true;
    int used = 0;
    uint64_t best_p = 0;
    std::vector<FpPoly> best_factors;
    for (uint64_t p = 2; p < 300 && used < 12; ++p) {
        if (!is_prime_u64(p)) continue;
        Z d = q_num(disc);
        if (d % Z(p) == 0) continue;
        FpPoly fp = fp_reduce(f, p);
        if (fp.degree() != n) continue;
        auto factors = fp_factor(fp);  // squarefree here: p does not divide the discriminant
        std::vector<int> degs;
        std::vector<FpPoly> irr;
        for (auto& [g, e] : factors) {
            degs.push_back(g.degree());
            irr.push_back(g);
            (void)e;
        }
        if (best_p == 0 || irr.size() < best_factors.size()) {
            best_p = p;
            best_factors = irr;
        }
        std::vector<bool> reach(n + 1, false);
        reach[0] = true;
        for (int dgg : degs)
            for (int s = n; s >= dgg; --s)
                if (reach[s - dgg]) reach[s] = true;
        for (int k = 1; k < n; ++k)
            if (!reach[k]) possible[k] = false;
        ++used;
    }
    if (best_p == 0) fail("Internal", "no usable prime for the irreducibility test");
    bool open = false;
    for (int k = 1; k <= n / 2; ++k)
        if (possible[k] && possible[n - k]) open = true;
    if (!open) return true;
    // patterns were inconclusive (x^4 + 1 style): decide by lift-and-recombine
    return !has_nontrivial_factor(f, best_p, best_factors);
}

std::string poly_to_string(const QPoly& f, const std::string& var) {
    if (f.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = f.degree(); i >= 0; --i) {
        Q c = f.at(i);
        if (c == 0) continue;
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        Q a = c > 0 ? c : Q(-c);
        if (i == 0 || a != 1) os << a.str();
        if (i > 0) {
            if (a != 1) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

}  // namespace wt1
