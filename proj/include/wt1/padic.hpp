#pragma once

#include "wt1/fq.hpp"
#include "wt1/numberfield.hpp"
#include "wt1/poly.hpp"

#include <memory>
#include <vector>

namespace wt1 {

// Capped-precision arithmetic in the unramified extension Q_{p^f},
// realized as Z_p[y]/(h) with h irreducible mod p; unit parts mod p^N.
struct PadicContext {
    uint64_t p;
    int precision_N;
    int inertia_f;
    FpPoly h;
    Z pN;
    FqContext residue;

    PadicContext(uint64_t prime, int N, int f);
    PadicContext(uint64_t prime, int N, FpPoly modulus);
};

// Raw element of Z_p[y]/(h) known modulo p^N: coefficient vector length f.
using RingElem = std::vector<Z>;

RingElem ring_zero(const PadicContext& c);
RingElem ring_one(const PadicContext& c);
RingElem ring_from_z(const PadicContext& c, const Z& a);
RingElem ring_add(const PadicContext& c, const RingElem& a, const RingElem& b);
RingElem ring_sub(const PadicContext& c, const RingElem& a, const RingElem& b);
RingElem ring_mul(const PadicContext& c, const RingElem& a, const RingElem& b);
RingElem ring_pow(const PadicContext& c, const RingElem& a, const Z& e);
// inverse of a unit (nonzero mod p)
RingElem ring_inv(const PadicContext& c, const RingElem& a);
bool ring_is_zero(const RingElem& a);
// largest k <= N with a == 0 mod p^k
int ring_valuation(const PadicContext& c, const RingElem& a);
RingElem ring_shift_down(const PadicContext& c, const RingElem& a, int k);  // divide by p^k
FqElem ring_residue(const PadicContext& c, const RingElem& a);
RingElem ring_lift_residue(const PadicContext& c, const FqElem& a);
// truncate to p^k (k <= N)
RingElem ring_truncate(const PadicContext& c, const RingElem& a, int k);

// A capped-precision p-adic number. Exact zero is distinguished from
// "zero to precision m" (an element only known to vanish mod p^m).
struct PadicNumber {
    enum Kind { ExactZero, ApproxZero, Regular };
    const PadicContext* ctx = nullptr;
    Kind kind = ExactZero;
    int valuation = 0;   // Regular only
    RingElem unit;       // Regular only; nonzero mod p
    int prec = 0;        // Regular: trusted relative digits; ApproxZero: abs digits

    static PadicNumber zero(const PadicContext& c);
    static PadicNumber approx_zero(const PadicContext& c, int abs_prec);
    static PadicNumber from_ring(const PadicContext& c, const RingElem& v, int abs_prec);
    static PadicNumber from_q(const PadicContext& c, const Q& a);

    bool is_exact_zero() const { return kind == ExactZero; }
    bool is_zeroish() const { return kind != Regular; }
    // absolute precision: digits to which the value is pinned
    int abs_prec() const;
};

PadicNumber padic_add(const PadicNumber& a, const PadicNumber& b);
PadicNumber padic_sub(const PadicNumber& a, const PadicNumber& b);
PadicNumber padic_neg(const PadicNumber& a);
PadicNumber padic_mul(const PadicNumber& a, const PadicNumber& b);
PadicNumber padic_div(const PadicNumber& a, const PadicNumber& b);
PadicNumber padic_scale_q(const PadicNumber& a, const Q& s);
PadicNumber padic_pow(const PadicNumber& a, const Z& e);

// number of absolute digits to which a and b agree (INT_MAX when both exact zero)
int padic_agree_prec(const PadicNumber& a, const PadicNumber& b);

// same, but across contexts with different precision caps (same p and f);
// used to check that recomputing at higher precision reproduces the digits
int padic_agree_prec_cross(const PadicNumber& a, const PadicNumber& b);

// Hensel lift of a simple residue root of f.
// Errors: NoRoot if f(r0) != 0, NotSimpleRoot if f'(r0) == 0 in the residue field.
PadicNumber hensel_lift(const QPoly& f, const FqElem& r0, const PadicContext& ctx);
RingElem hensel_lift_ring(const QPoly& f, const FqElem& r0, const PadicContext& ctx);

// Teichmuller lift: the (p^f - 1)-th root of unity congruent to a != 0.
PadicNumber teichmuller(const FqElem& a, const PadicContext& ctx);

// Iwasawa-branch p-adic logarithm: log p = 0, roots of unity killed.
// Reported precision is degraded by ceil(log_p(series length)).
PadicNumber plog(const PadicNumber& x);

// p-adic embeddings of a number field, grouped by place.
struct PadicEmbedding {
    int place_id;
    RingElem root;  // image of theta, a root of the defining polynomial mod p^N
};

struct EmbeddingSet {
    std::shared_ptr<PadicContext> ctx;
    std::vector<PadicEmbedding> embs;  // sorted by (place_id, root)
};

// Errors: RamifiedPrime when p ramifies in K (defining polynomial not
// squarefree mod p). extra_root_order m > 1 forces zeta_m into the working
// field by enlarging the inertia degree (requires gcd(m, p) = 1).
EmbeddingSet padic_embeddings(const NumberField& K, const Z& p, int N, const Z& extra_root_order = 1);

// evaluate an element of K at an embedding (denominators must be prime to p)
PadicNumber embed_nf(const NumberField& K, const NfElement& x, const PadicContext& ctx,
                     const PadicEmbedding& emb);
RingElem embed_nf_ring(const NumberField& K, const NfElement& x, const PadicContext& ctx,
                       const PadicEmbedding& emb);

// exact m-th root of unity in the context (m | p^f - 1), deterministic choice
PadicNumber padic_root_of_unity(const PadicContext& ctx, const Z& m);

// serialization helper: base-p digits of each unit coefficient
std::vector<std::vector<int>> padic_unit_digits(const PadicNumber& x);

}  // namespace wt1
