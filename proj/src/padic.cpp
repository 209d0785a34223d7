#include "wt1/padic.hpp"

#include <algorithm>
#include <climits>
#include <numeric>

namespace wt1 {

PadicContext::PadicContext(uint64_t prime, int N, int f)
    : p(prime), precision_N(N), inertia_f(f), h(fp_find_irreducible(prime, f)),
      pN(z_pow(Z(prime), static_cast<uint64_t>(N))), residue(prime, h) {
    if (N < 10) fail("BadPrecision", "precision must be >= 10");
}

PadicContext::PadicContext(uint64_t prime, int N, FpPoly modulus)
    : p(prime), precision_N(N), inertia_f(modulus.degree()), h(modulus),
      pN(z_pow(Z(prime), static_cast<uint64_t>(N))), residue(prime, h) {
    if (N < 10) fail("BadPrecision", "precision must be >= 10");
}

RingElem ring_zero(const PadicContext& c) { return RingElem(c.inertia_f, Z(0)); }

RingElem ring_one(const PadicContext& c) {
    RingElem r(c.inertia_f, Z(0));
    r[0] = 1;
    return r;
}

RingElem ring_from_z(const PadicContext& c, const Z& a) {
    RingElem r(c.inertia_f, Z(0));
    r[0] = ((a % c.pN) + c.pN) % c.pN;
    return r;
}

RingElem ring_add(const PadicContext& c, const RingElem& a, const RingElem& b) {
    RingElem r(c.inertia_f);
    for (int i = 0; i < c.inertia_f; ++i) r[i] = (a[i] + b[i]) % c.pN;
    return r;
}

RingElem ring_sub(const PadicContext& c, const RingElem& a, const RingElem& b) {
    RingElem r(c.inertia_f);
    for (int i = 0; i < c.inertia_f; ++i) r[i] = ((a[i] - b[i]) % c.pN + c.pN) % c.pN;
    return r;
}

RingElem ring_mul(const PadicContext& c, const RingElem& a, const RingElem& b) {
    int f = c.inertia_f;
    std::vector<Z> prod(2 * f - 1, Z(0));
    for (int i = 0; i < f; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < f; ++j) prod[i + j] += a[i] * b[j];
    }
    // reduce by h (monic over F_p lifted; h coefficients are small ints)
    for (int k = 2 * f - 2; k >= f; --k) {
        Z top = prod[k] % c.pN;
        if (top == 0) {
            prod[k] = 0;
            continue;
        }
        for (int j = 0; j < f; ++j) prod[k - f + j] -= top * Z(c.h.c[j]);
        prod[k] = 0;
    }
    RingElem r(f);
    for (int i = 0; i < f; ++i) r[i] = ((prod[i] % c.pN) + c.pN) % c.pN;
    return r;
}

RingElem ring_pow(const PadicContext& c, const RingElem& a, const Z& e) {
    if (e < 0) return ring_pow(c, ring_inv(c, a), -e);
    RingElem r = ring_one(c);
    RingElem base = a;
    Z k = e;
    while (k > 0) {
        if ((k & 1) != 0) r = ring_mul(c, r, base);
        base = ring_mul(c, base, base);
        k >>= 1;
    }
    return r;
}

bool ring_is_zero(const RingElem& a) {
    for (const auto& x : a)
        if (x != 0) return false;
    return true;
}

FqElem ring_residue(const PadicContext& c, const RingElem& a) {
    std::vector<uint64_t> r(c.inertia_f, 0);
    for (int i = 0; i < c.inertia_f; ++i) r[i] = static_cast<uint64_t>(a[i] % Z(c.p));
    return FpPoly(c.p, std::move(r));
}

RingElem ring_lift_residue(const PadicContext& c, const FqElem& a) {
    RingElem r(c.inertia_f, Z(0));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] = Z(a.c[i]);
    return r;
}

int ring_valuation(const PadicContext& c, const RingElem& a) {
    if (ring_is_zero(a)) return c.precision_N;
    int best = c.precision_N;
    for (const auto& x : a) {
        if (x == 0) continue;
        best = std::min(best, z_val(x, Z(c.p)));
        if (best == 0) break;
    }
    return best;
}

RingElem ring_shift_down(const PadicContext& c, const RingElem& a, int k) {
    Z pk = z_pow(Z(c.p), static_cast<uint64_t>(k));
    RingElem r(c.inertia_f);
    for (int i = 0; i < c.inertia_f; ++i) {
        if (a[i] % pk != 0) fail("Internal", "shift below valuation");
        r[i] = a[i] / pk;
    }
    return r;
}

RingElem ring_truncate(const PadicContext& c, const RingElem& a, int k) {
    Z pk = z_pow(Z(c.p), static_cast<uint64_t>(std::min(k, c.precision_N)));
    RingElem r(c.inertia_f);
    for (int i = 0; i < c.inertia_f; ++i) r[i] = ((a[i] % pk) + pk) % pk;
    return r;
}

RingElem ring_inv(const PadicContext& c, const RingElem& a) {
    FqElem res = ring_residue(c, a);
    if (res.is_zero()) fail("NotInvertible", "inverse of a non-unit in Z_p[y]/(h)");
    // Newton lift of the residue inverse: i <- i(2 - a i)
    RingElem inv = ring_lift_residue(c, fq_inv(c.residue, res));
    int known = 1;
    while (known < c.precision_N) {
        RingElem t = ring_mul(c, a, inv);
        RingElem two = ring_from_z(c, 2);
        inv = ring_mul(c, inv, ring_sub(c, two, t));
        known *= 2;
    }
    return inv;
}

// ---- PadicNumber -----------------------------------------------------------

PadicNumber PadicNumber::zero(const PadicContext& c) {
    PadicNumber r;
    r.ctx = &c;
    r.kind = ExactZero;
    return r;
}

PadicNumber PadicNumber::approx_zero(const PadicContext& c, int abs_prec) {
    PadicNumber r;
    r.ctx = &c;
    r.kind = ApproxZero;
    r.prec = abs_prec;
    return r;
}

PadicNumber PadicNumber::from_ring(const PadicContext& c, const RingElem& v, int abs_prec) {
    int cap = std::min(abs_prec, c.precision_N);
    if (cap <= 0) return approx_zero(c, 0);
    RingElem t = ring_truncate(c, v, cap);
    if (ring_is_zero(t)) return approx_zero(c, cap);
    int w = ring_valuation(c, t);
    PadicNumber r;
    r.ctx = &c;
    r.kind = Regular;
    r.valuation = w;
    r.unit = ring_shift_down(c, t, w);
    r.prec = cap - w;
    return r;
}

PadicNumber PadicNumber::from_q(const PadicContext& c, const Q& a) {
    if (a == 0) return zero(c);
    Z num = q_num(a), den = q_den(a);
    int vn = num % Z(c.p) == 0 ? z_val(num, Z(c.p)) : 0;
    int vd = den % Z(c.p) == 0 ? z_val(den, Z(c.p)) : 0;
    num /= z_pow(Z(c.p), static_cast<uint64_t>(vn));
    den /= z_pow(Z(c.p), static_cast<uint64_t>(vd));
    RingElem u = ring_mul(c, ring_from_z(c, num), ring_inv(c, ring_from_z(c, den)));
    PadicNumber r;
    r.ctx = &c;
    r.kind = Regular;
    r.valuation = vn - vd;
    r.unit = u;
    r.prec = c.precision_N;
    return r;
}

int PadicNumber::abs_prec() const {
    switch (kind) {
        case ExactZero: return INT_MAX;
        case ApproxZero: return prec;
        default: return valuation + prec;
    }
}

static const PadicContext& common_ctx(const PadicNumber& a, const PadicNumber& b) {
    if (a.ctx != b.ctx) fail("ContextMismatch", "mixed p-adic contexts");
    return *a.ctx;
}

PadicNumber padic_neg(const PadicNumber& a) {
    if (a.kind != PadicNumber::Regular) return a;
    PadicNumber r = a;
    r.unit = ring_sub(*a.ctx, ring_zero(*a.ctx), a.unit);
    return r;
}

PadicNumber padic_add(const PadicNumber& a, const PadicNumber& b) {
    const PadicContext& c = common_ctx(a, b);
    if (a.kind == PadicNumber::ExactZero) return b;
    if (b.kind == PadicNumber::ExactZero) return a;
    if (a.kind == PadicNumber::ApproxZero && b.kind == PadicNumber::ApproxZero)
        return PadicNumber::approx_zero(c, std::min(a.prec, b.prec));
    if (a.kind == PadicNumber::ApproxZero || b.kind == PadicNumber::ApproxZero) {
        const PadicNumber& z = a.kind == PadicNumber::ApproxZero ? a : b;
        const PadicNumber& x = a.kind == PadicNumber::ApproxZero ? b : a;
        // x known to abs prec min(x.abs, z.prec); the zeroish part may perturb digits >= z.prec
        if (x.valuation >= z.prec) return PadicNumber::approx_zero(c, z.prec);
        PadicNumber r = x;
        r.prec = std::min(x.prec, z.prec - x.valuation);
        return r;
    }
    int v = std::min(a.valuation, b.valuation);
    int absP = std::min(a.abs_prec(), b.abs_prec());
    auto shift_up = [&](const PadicNumber& x) {
        int d = x.valuation - v;
        if (d >= c.precision_N) return ring_zero(c);
        RingElem s = x.unit;
        Z pd = z_pow(Z(c.p), static_cast<uint64_t>(d));
        for (auto& t : s) t = (t * pd) % c.pN;
        return s;
    };
    RingElem s = ring_add(c, shift_up(a), shift_up(b));
    PadicNumber r = PadicNumber::from_ring(c, s, std::min(absP - v, c.precision_N));
    if (r.kind == PadicNumber::Regular) r.valuation += v;
    else if (r.kind == PadicNumber::ApproxZero) r.prec = std::min(r.prec + v, absP);
    return r;
}

PadicNumber padic_sub(const PadicNumber& a, const PadicNumber& b) { return padic_add(a, padic_neg(b)); }

PadicNumber padic_mul(const PadicNumber& a, const PadicNumber& b) {
    const PadicContext& c = common_ctx(a, b);
    if (a.kind == PadicNumber::ExactZero || b.kind == PadicNumber::ExactZero)
        return PadicNumber::zero(c);
    if (a.kind == PadicNumber::ApproxZero || b.kind == PadicNumber::ApproxZero) {
        // v(xy) >= z.prec + other.valuation (other regular), or sum of zero precs
        int bound = 0;
        if (a.kind == PadicNumber::ApproxZero) bound += a.prec; else bound += a.valuation;
        if (b.kind == PadicNumber::ApproxZero) bound += b.prec; else bound += b.valuation;
        return PadicNumber::approx_zero(c, std::min(bound, c.precision_N));
    }
    PadicNumber r;
    r.ctx = &c;
    r.kind = PadicNumber::Regular;
    r.valuation = a.valuation + b.valuation;
    r.unit = ring_mul(c, a.unit, b.unit);
    r.prec = std::min(a.prec, b.prec);
    return r;
}

PadicNumber padic_div(const PadicNumber& a, const PadicNumber& b) {
    const PadicContext& c = common_ctx(a, b);
    if (b.kind != PadicNumber::Regular) fail("ZeroInput", "division by (approximate) zero");
    if (a.kind == PadicNumber::ExactZero) return a;
    if (a.kind == PadicNumber::ApproxZero)
        return PadicNumber::approx_zero(c, std::max(0, a.prec - b.valuation));
    PadicNumber r;
    r.ctx = &c;
    r.kind = PadicNumber::Regular;
    r.valuation = a.valuation - b.valuation;
    r.unit = ring_mul(c, a.unit, ring_inv(c, b.unit));
    r.prec = std::min(a.prec, b.prec);
    return r;
}

PadicNumber padic_scale_q(const PadicNumber& a, const Q& s) {
    if (a.ctx == nullptr) fail("ContextMismatch", "unbound p-adic number");
    return padic_mul(a, PadicNumber::from_q(*a.ctx, s));
}

PadicNumber padic_pow(const PadicNumber& a, const Z& e) {
    if (a.ctx == nullptr) fail("ContextMismatch", "unbound p-adic number");
    if (e < 0) return padic_pow(padic_div(PadicNumber::from_q(*a.ctx, 1), a), -e);
    PadicNumber r = PadicNumber::from_q(*a.ctx, 1);
    PadicNumber base = a;
    Z k = e;
    while (k > 0) {
        if ((k & 1) != 0) r = padic_mul(r, base);
        base = padic_mul(base, base);
        k >>= 1;
    }
    return r;
}

int padic_agree_prec(const PadicNumber& a, const PadicNumber& b) {
    PadicNumber d = padic_sub(a, b);
    return d.abs_prec() == INT_MAX ? INT_MAX
         : d.kind == PadicNumber::Regular ? d.valuation
                                          : d.prec;
}

int padic_agree_prec_cross(const PadicNumber& a, const PadicNumber& b) {
    if (a.ctx == b.ctx) return padic_agree_prec(a, b);
    if (a.ctx == nullptr || b.ctx == nullptr) fail("ContextMismatch", "unbound p-adic number");
    if (a.ctx->p != b.ctx->p || a.ctx->inertia_f != b.ctx->inertia_f)
        fail("ContextMismatch", "cross comparison needs the same p and inertia degree");
    int cap = std::min(a.abs_prec(), b.abs_prec());
    if (a.kind != PadicNumber::Regular && b.kind != PadicNumber::Regular) return cap;
    if (a.kind != PadicNumber::Regular || b.kind != PadicNumber::Regular) {
        const PadicNumber& r = a.kind == PadicNumber::Regular ? a : b;
        return std::min(cap, r.valuation);
    }
    if (a.valuation != b.valuation) return std::min({cap, a.valuation, b.valuation});
    int m = std::min({cap - a.valuation, a.ctx->precision_N, b.ctx->precision_N});
    Z pm = z_pow(Z(a.ctx->p), static_cast<uint64_t>(std::max(m, 0)));
    int w = m;
    for (int i = 0; i < a.ctx->inertia_f; ++i) {
        Z d = ((a.unit[i] - b.unit[i]) % pm + pm) % pm;
        if (d != 0) w = std::min(w, z_val(d, Z(a.ctx->p)));
    }
    return a.valuation + w;
}

// ---- Hensel / Teichmuller / log -------------------------------------------

static RingElem eval_qpoly_ring(const PadicContext& c, const QPoly& f, const RingElem& x) {
    RingElem r = ring_zero(c);
    for (auto it = f.c.rbegin(); it != f.c.rend(); ++it) {
        Z num = q_num(*it), den = q_den(*it);
        RingElem coef = ring_from_z(c, num);
        if (den != 1) coef = ring_mul(c, coef, ring_inv(c, ring_from_z(c, den)));
        r = ring_add(c, ring_mul(c, r, x), coef);
    }
    return r;
}

RingElem hensel_lift_ring(const QPoly& f, const FqElem& r0, const PadicContext& ctx) {
    FqElem f_at = fq_eval_poly(ctx.residue, fp_reduce(f, ctx.p), r0);
    if (!f_at.is_zero()) fail("NoRoot", "r0 is not a residue root");
    FqElem df_at = fq_eval_poly(ctx.residue, fp_reduce(poly_derivative(f), ctx.p), r0);
    if (df_at.is_zero()) fail("NotSimpleRoot", "derivative vanishes at r0");
    QPoly df = poly_derivative(f);
    RingElem r = ring_lift_residue(ctx, r0);
    // Newton iteration, quadratic convergence to precision N
    int known = 1;
    while (known < ctx.precision_N) {
        RingElem fr = eval_qpoly_ring(ctx, f, r);
        RingElem dfr = eval_qpoly_ring(ctx, df, r);
        r = ring_sub(ctx, r, ring_mul(ctx, fr, ring_inv(ctx, dfr)));
        known *= 2;
    }
    RingElem check = eval_qpoly_ring(ctx, f, r);
    if (!ring_is_zero(check)) fail("Internal", "Hensel iteration did not converge");
    return r;
}

PadicNumber hensel_lift(const QPoly& f, const FqElem& r0, const PadicContext& ctx) {
    return PadicNumber::from_ring(ctx, hensel_lift_ring(f, r0, ctx), ctx.precision_N);
}

PadicNumber teichmuller(const FqElem& a, const PadicContext& ctx) {
    if (a.is_zero()) fail("ZeroResidue", "Teichmuller lift of zero");
    RingElem x = ring_lift_residue(ctx, a);
    Z q = ctx.residue.order();
    for (int i = 0; i < ctx.precision_N + 1; ++i) x = ring_pow(ctx, x, q);
    PadicNumber r;
    r.ctx = &ctx;
    r.kind = PadicNumber::Regular;
    r.valuation = 0;
    r.unit = x;
    r.prec = ctx.precision_N;
    return r;
}

PadicNumber plog(const PadicNumber& x) {
    if (x.ctx == nullptr) fail("ContextMismatch", "unbound p-adic number");
    const PadicContext& c = *x.ctx;
    if (x.kind != PadicNumber::Regular) fail("ZeroInput", "log of (approximate) zero");
    // strip valuation (Iwasawa branch: log p = 0) and the Teichmuller part
    PadicNumber om = teichmuller(ring_residue(c, x.unit), c);
    PadicNumber u1 = padic_div(PadicNumber::from_ring(c, x.unit, c.precision_N), om);
    u1.prec = std::min(u1.prec, x.prec);
    PadicNumber z = padic_sub(u1, PadicNumber::from_q(c, 1));
    if (z.kind != PadicNumber::Regular) {
        // unit congruent to its Teichmuller rep to full precision: log is 0 to that precision
        return z.kind == PadicNumber::ExactZero ? PadicNumber::zero(c)
                                                : PadicNumber::approx_zero(c, z.prec);
    }
    int vz = z.valuation;
    if (vz < 1) fail("Internal", "1-unit part has valuation 0");
    int N = c.precision_N;
    // series length: smallest K with (K+1) vz - floor(log_p(K+1)) >= N
    int K = 1;
    while (true) {
        int lp = 0;
        Z pk = Z(c.p);
        while (pk <= K + 1) {
            pk *= Z(c.p);
            ++lp;
        }
        if ((K + 1) * vz - lp >= N) break;
        ++K;
    }
    PadicNumber sum = PadicNumber::zero(c);
    PadicNumber zk = z;
    for (int k = 1; k <= K; ++k) {
        Q coef = Q(k % 2 == 1 ? 1 : -1) / Q(k);
        sum = padic_add(sum, padic_scale_q(zk, coef));
        if (k < K) zk = padic_mul(zk, z);
    }
    // precision loss = the largest p-valuation of a series denominator,
    // i.e. floor(log_p K); matches the partial-sum oracle digit count
    int loss = 0;
    {
        Z pk = Z(c.p);
        while (pk <= K) {
            pk *= Z(c.p);
            ++loss;
        }
    }
    int rep = std::min(x.prec, c.precision_N) - loss;
    if (sum.kind == PadicNumber::Regular) {
        if (rep <= sum.valuation) return PadicNumber::approx_zero(c, std::max(rep, 0));
        sum.prec = std::min(sum.prec, rep - sum.valuation);
    } else if (sum.kind == PadicNumber::ApproxZero) {
        sum.prec = std::max(std::min(sum.prec, rep), 0);
    }
    return sum;
}

// ---- embeddings ------------------------------------------------------------

EmbeddingSet padic_embeddings(const NumberField& K, const Z& p, int N, const Z& extra_root_order) {
    if (p <= 1 || !is_prime_u64(static_cast<uint64_t>(p)))
        fail("CompositeModulus", p.str() + " is not prime");
    uint64_t pp = static_cast<uint64_t>(p);
    FpPoly fbar = fp_reduce(K.f, pp);
    if (fbar.degree() != K.degree) fail("BadReduction", "degree drop mod p");
    auto factors = fp_factor(fbar);
    int f_work = 1;
    for (auto& [g, e] : factors) {
        if (e > 1) fail("RamifiedPrime", p.str() + " ramifies in the field");
        f_work = std::lcm(f_work, g.degree());
    }
    if (extra_root_order > 1) {
        if (extra_root_order % p == 0)
            fail("WildRoot", "root order divisible by p is not supported");
        // multiplicative order of p mod m
        Z m = extra_root_order;
        int ord = 1;
        Z pk = p % m;
        while (pk != 1) {
            pk = (pk * p) % m;
            ++ord;
            if (ord > 10000) fail("Internal", "order loop");
        }
        f_work = std::lcm(f_work, ord);
    }
    auto ctx = std::make_shared<PadicContext>(pp, N, f_work);
    EmbeddingSet out;
    out.ctx = ctx;
    for (size_t t = 0; t < factors.size(); ++t) {
        auto roots = fq_roots(ctx->residue, factors[t].first);
        if (static_cast<int>(roots.size()) != factors[t].first.degree())
            fail("Internal", "missing residue roots in the working field");
        for (auto& r0 : roots) {
            out.embs.push_back(PadicEmbedding{static_cast<int>(t), hensel_lift_ring(K.f, r0, *ctx)});
        }
    }
    if (static_cast<int>(out.embs.size()) != K.degree) fail("Internal", "embedding count mismatch");
    return out;
}

RingElem embed_nf_ring(const NumberField& K, const NfElement& x, const PadicContext& ctx,
                       const PadicEmbedding& emb) {
    (void)K;
    return eval_qpoly_ring(ctx, nf_to_poly(x), emb.root);
}

PadicNumber embed_nf(const NumberField& K, const NfElement& x, const PadicContext& ctx,
                     const PadicEmbedding& emb) {
    if (x.is_zero()) return PadicNumber::zero(ctx);
    return PadicNumber::from_ring(ctx, embed_nf_ring(K, x, ctx, emb), ctx.precision_N);
}

PadicNumber padic_root_of_unity(const PadicContext& ctx, const Z& m) {
    Z q1 = ctx.residue.order() - 1;
    if (m <= 0 || q1 % m != 0)
        fail("NoSuchRoot", "no " + m.str() + "-th roots of unity in the working field");
    if (m == 1) return PadicNumber::from_q(ctx, 1);
    FqElem a = fq_element_of_order(ctx.residue, m);
    return teichmuller(a, ctx);
}

std::vector<std::vector<int>> padic_unit_digits(const PadicNumber& x) {
    std::vector<std::vector<int>> out;
    if (x.kind != PadicNumber::Regular) return out;
    for (const auto& coef : x.unit) {
        std::vector<int> digits;
        Z v = coef;
        for (int i = 0; i < x.ctx->precision_N; ++i) {
            digits.push_back(static_cast<int>(v % Z(x.ctx->p)));
            v /= Z(x.ctx->p);
        }
        out.push_back(std::move(digits));
    }
    return out;
}

}  // namespace wt1
