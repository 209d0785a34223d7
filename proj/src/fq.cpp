#include "wt1/fq.hpp"

#include <algorithm>

namespace wt1 {

FqElem fq_reduce(const FqContext& k, const FpPoly& a) { return fp_mod(a, k.h); }

FqElem fq_add(const FqContext& k, const FqElem& a, const FqElem& b) {
    (void)k;
    return fp_add(a, b);
}

FqElem fq_sub(const FqContext& k, const FqElem& a, const FqElem& b) {
    (void)k;
    return fp_sub(a, b);
}

FqElem fq_mul(const FqContext& k, const FqElem& a, const FqElem& b) {
    return fp_mod(fp_mul(a, b), k.h);
}

FqElem fq_inv(const FqContext& k, const FqElem& a) {
    if (a.is_zero()) fail("DivisionByZero", "inverse of zero in F_q");
    return fp_invmod(a, k.h);
}

FqElem fq_pow(const FqContext& k, const FqElem& a, const Z& e) {
    if (e < 0) return fq_pow(k, fq_inv(k, a), -e);
    return fp_powmod(a, e, k.h);
}

FqElem fq_from_u64(const FqContext& k, uint64_t a) {
    return FpPoly(k.p, {a % k.p});
}

std::vector<FqElem> fq_all(const FqContext& k) {
    std::vector<FqElem> out;
    std::vector<uint64_t> c(k.f, 0);
    Z total = k.order();
    for (Z i = 0; i < total; ++i) {
        out.emplace_back(k.p, c);
        int j = 0;
        while (j < k.f) {
            if (++c[j] < k.p) break;
            c[j] = 0;
            ++j;
        }
    }
    return out;
}

FqElem fq_eval_poly(const FqContext& k, const FpPoly& f, const FqElem& x) {
    FqElem r = FpPoly::zero(k.p);
    for (auto it = f.c.rbegin(); it != f.c.rend(); ++it) {
        r = fq_add(k, fq_mul(k, r, x), FpPoly(k.p, {*it}));
    }
    return r;
}

std::vector<FqElem> fq_roots(const FqContext& k, const FpPoly& f) {
    std::vector<FqElem> out;
    for (const auto& x : fq_all(k)) {
        if (fq_eval_poly(k, f, x).is_zero()) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Z fq_order(const FqContext& k, const FqElem& a) {
    if (a.is_zero()) fail("ZeroResidue", "order of zero");
    Z n = k.order() - 1;
    Z ord = n;
    // strip each prime factor of n while the power stays 1
    Z m = n;
    for (Z d = 2; d * d <= m; ++d) {
        if (m % d != 0) continue;
        while (m % d == 0) m /= d;
        while (ord % d == 0 && fq_pow(k, a, ord / d).c == std::vector<uint64_t>{1}) ord /= d;
    }
    if (m > 1) {
        while (ord % m == 0 && fq_pow(k, a, ord / m).c == std::vector<uint64_t>{1}) ord /= m;
    }
    return ord;
}

FqElem fq_element_of_order(const FqContext& k, const Z& m) {
    Z n = k.order() - 1;
    if (m <= 0 || n % m != 0) fail("NoSuchRoot", "no element of order " + m.str() + " in F_" + k.order().str());
    for (const auto& x : fq_all(k)) {
        if (x.is_zero()) continue;
        if (fq_order(k, x) == m) return x;
    }
    fail("NoSuchRoot", "order search exhausted (impossible)");
}

}  // namespace wt1
