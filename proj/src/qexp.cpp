#include "wt1/qexp.hpp"

#include <algorithm>
#include <array>

#ifdef WT1_HAVE_OPENMP
#include <omp.h>
#endif

namespace wt1 {

// ---- norm machinery for the search loop ------------------------------------

namespace {

struct NormEvaluator {
    int n;
    bool small_ok;                                  // int64/int128 fast path valid
    std::vector<std::vector<int64_t>> theta_pows;   // n matrices, row-major n*n
    std::vector<std::vector<Z>> theta_pows_big;

    explicit NormEvaluator(const NumberField& K) {
        n = K.degree;
        // multiplication-by-theta companion matrix, column convention:
        // (theta * theta^j) in the power basis
        std::vector<std::vector<Z>> comp(n, std::vector<Z>(n, Z(0)));
        for (int j = 0; j + 1 < n; ++j) comp[j + 1][j] = 1;
        for (int i = 0; i < n; ++i) comp[i][n - 1] = -q_num(K.f.c[i]);
        std::vector<std::vector<Z>> cur(n, std::vector<Z>(n, Z(0)));
        for (int i = 0; i < n; ++i) cur[i][i] = 1;
        Z maxabs = 0;
        for (int k = 0; k < n; ++k) {
            theta_pows_big.push_back([&] {
                std::vector<Z> flat;
                for (auto& row : cur)
                    for (auto& v : row) {
                        flat.push_back(v);
                        maxabs = std::max(maxabs, z_abs(v));
                    }
                return flat;
            }());
            // cur = comp * cur
            std::vector<std::vector<Z>> nxt(n, std::vector<Z>(n, Z(0)));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Z s = 0;
                    for (int t = 0; t < n; ++t) s += comp[i][t] * cur[t][j];
                    nxt[i][j] = s;
                }
            cur = std::move(nxt);
        }
        small_ok = n <= 8 && maxabs < Z(1) << 18;
        if (small_ok) {
            for (auto& m : theta_pows_big) {
                std::vector<int64_t> f;
                for (auto& v : m) f.push_back(static_cast<int64_t>(v));
                theta_pows.push_back(std::move(f));
            }
        }
    }

    // |det(sum a_k Theta^k)|; returns false into ok on int128 overflow risk
    Z norm_abs(const std::vector<int>& a) const {
        if (small_ok) {
            std::array<__int128, 64> m{};
            for (int k = 0; k < n; ++k) {
                if (a[k] == 0) continue;
                const auto& tp = theta_pows[k];
                for (int t = 0; t < n * n; ++t) m[t] += static_cast<__int128>(a[k]) * tp[t];
            }
            // Bareiss; desk-scale entries keep this within int128 for n <= 5
            __int128 prev = 1;
            int sign = 1;
            bool overflow = false;
            auto at = [&](int i, int j) -> __int128& { return m[i * n + j]; };
            for (int k = 0; k + 1 < n && !overflow; ++k) {
                if (at(k, k) == 0) {
                    int piv = -1;
                    for (int i = k + 1; i < n; ++i)
                        if (at(i, k) != 0) {
                            piv = i;
                            break;
                        }
                    if (piv < 0) return Z(0);
                    for (int j = 0; j < n; ++j) std::swap(at(k, j), at(piv, j));
                    sign = -sign;
                }
                for (int i = k + 1; i < n; ++i) {
                    for (int j = k + 1; j < n; ++j) {
                        __int128 v = at(k, k) * at(i, j) - at(i, k) * at(k, j);
                        // crude overflow guard
                        if (v > (__int128(1) << 120) || v < -(__int128(1) << 120)) {
                            overflow = true;
                            break;
                        }
                        at(i, j) = v / prev;
                    }
                    at(i, k) = 0;
                    if (overflow) break;
                }
                prev = at(k, k);
            }
            if (!overflow) {
                __int128 d = at(n - 1, n - 1);
                (void)sign;
                if (d < 0) d = -d;
                // convert to Z
                Z out = 0;
                __int128 v = d;
                bool neg = false;
                (void)neg;
                std::vector<uint32_t> limbs;
                while (v > 0) {
                    limbs.push_back(static_cast<uint32_t>(v & 0xffffffff));
                    v >>= 32;
                }
                for (auto it = limbs.rbegin(); it != limbs.rend(); ++it) out = (out << 32) + Z(*it);
                return out;
            }
        }
        // exact fallback
        std::vector<Z> m(n * n, Z(0));
        for (int k = 0; k < n; ++k) {
            if (a[k] == 0) continue;
            for (int t = 0; t < n * n; ++t) m[t] += Z(a[k]) * theta_pows_big[k][t];
        }
        Z prev = 1;
        auto at = [&](int i, int j) -> Z& { return m[i * n + j]; };
        for (int k = 0; k + 1 < n; ++k) {
            if (at(k, k) == 0) {
                int piv = -1;
                for (int i = k + 1; i < n; ++i)
                    if (at(i, k) != 0) {
                        piv = i;
                        break;
                    }
                if (piv < 0) return Z(0);
                for (int j = 0; j < n; ++j) std::swap(at(k, j), at(piv, j));
            }
            for (int i = k + 1; i < n; ++i) {
                for (int j = k + 1; j < n; ++j)
                    at(i, j) = (at(k, k) * at(i, j) - at(i, k) * at(k, j)) / prev;
                at(i, k) = 0;
            }
            prev = at(k, k);
        }
        return z_abs(at(n - 1, n - 1));
    }
};

struct ResidueTester {
    // per prime factor: theta image powers in F_{ell^f}, for fast evaluation
    std::vector<ResidueField> fields;
    std::vector<std::vector<FqElem>> theta_pows;

    ResidueTester(const NumberField& H, const std::vector<PrimeFactor>& factors) {
        for (const auto& P : factors) {
            fields.push_back(prime_residue_field(H, P));
            auto& R = fields.back();
            std::vector<FqElem> pows;
            FqElem cur = fq_from_u64(R.k, 1);
            for (int k = 0; k < H.degree; ++k) {
                pows.push_back(cur);
                cur = fq_mul(R.k, cur, R.theta);
            }
            theta_pows.push_back(std::move(pows));
        }
    }

    bool vanishes_at(size_t t, const std::vector<int>& a) const {
        const auto& R = fields[t];
        FqElem acc = FpPoly::zero(R.k.p);
        for (size_t k = 0; k < a.size(); ++k) {
            if (a[k] == 0) continue;
            uint64_t c = static_cast<uint64_t>(((a[k] % static_cast<long long>(R.k.p)) +
                                                static_cast<long long>(R.k.p)) %
                                               static_cast<long long>(R.k.p));
            acc = fq_add(R.k, acc, fp_scale(c, theta_pows[t][k]));
        }
        return acc.is_zero();
    }
};

bool is_torsion_associate(const NumberField& H, const std::vector<int>& a,
                          const NfElement& base, const std::vector<NfElement>& torsion) {
    std::vector<Q> coords(a.begin(), a.end());
    NfElement cand(coords);
    for (const auto& z : torsion) {
        if (nf_mul(H, base, z) == cand) return true;
    }
    return false;
}

// odometer over the box [-s, s]^n, visiting only max-norm == s points
struct Shell {
    int n, s;
    long long total;
    Shell(int n_, int s_) : n(n_), s(s_) {
        total = 1;
        for (int i = 0; i < n; ++i) total *= (2 * s + 1);
    }
    bool decode(long long idx, std::vector<int>& out) const {
        int maxabs = 0;
        for (int i = 0; i < n; ++i) {
            int d = static_cast<int>(idx % (2 * s + 1)) - s;
            out[i] = d;
            maxabs = std::max(maxabs, std::abs(d));
            idx /= (2 * s + 1);
        }
        return maxabs == s;
    }
};

struct Candidate {
    bool found = false;
    std::vector<int> a;
    bool better_than(const Candidate& o) const {
        if (!found) return false;
        if (!o.found) return true;
        return a < o.a;
    }
};

LambdaUnit search_impl(const NumberField& H, const std::vector<PrimeFactor>& factors,
                       int lambda_index, const UnitSearchParams& prm,
                       const NfElement* avoid, const std::vector<NfElement>* torsion,
                       bool parallel) {
    if (lambda_index < 0 || lambda_index >= static_cast<int>(factors.size()))
        fail("BadIndex", "lambda index out of range");
    const PrimeFactor& lambda = factors[lambda_index];
    for (const auto& P : factors)
        if (P.f != lambda.f || P.e != 1)
            fail("PreconditionSplit",
                 "splitting shape above " + lambda.ell.str() + " is not the expected one");
    if (prm.h_max < 1) fail("BoundExceeded", "h range is empty (h_max = " + std::to_string(prm.h_max) + ")");
    long long cap = prm.height_cap > 0
                        ? prm.height_cap
                        : 10 * static_cast<long long>(lambda.ell);
    NormEvaluator NE(H);
    ResidueTester RT(H, factors);
    int n = H.degree;

    for (int h = 1; h <= prm.h_max; ++h) {
        Z target = z_pow(lambda.ell, static_cast<uint64_t>(lambda.f * h));
        for (int s = 1; s <= cap; ++s) {
            Shell shell(n, s);
            Candidate best;
            auto consider = [&](const std::vector<int>& a, Candidate& slot) {
                if (NE.norm_abs(a) != target) return;
                if (!RT.vanishes_at(static_cast<size_t>(lambda_index), a)) return;
                for (size_t t = 0; t < factors.size(); ++t) {
                    if (static_cast<int>(t) == lambda_index) continue;
                    if (RT.vanishes_at(t, a)) return;
                }
                if (avoid && torsion && is_torsion_associate(H, a, *avoid, *torsion)) return;
                Candidate c;
                c.found = true;
                c.a = a;
                if (c.better_than(slot)) slot = c;
            };
#ifdef WT1_HAVE_OPENMP
            if (parallel && shell.total > 4096) {
                int nt = omp_get_max_threads();
                std::vector<Candidate> slots(nt);
#pragma omp parallel
                {
                    int tid = omp_get_thread_num();
                    std::vector<int> a(n);
#pragma omp for schedule(static)
                    for (long long idx = 0; idx < shell.total; ++idx) {
                        if (shell.decode(idx, a)) consider(a, slots[tid]);
                    }
                }
                for (auto& s2 : slots)
                    if (s2.better_than(best)) best = s2;
            } else
#endif
            {
                (void)parallel;
                std::vector<int> a(n);
                for (long long idx = 0; idx < shell.total; ++idx) {
                    if (shell.decode(idx, a)) consider(a, best);
                }
            }
            if (best.found) {
                std::vector<Q> coords(best.a.begin(), best.a.end());
                LambdaUnit U{lambda_index, NfElement(coords), h};
                return U;
            }
        }
    }
    fail("BoundExceeded", "no generator of lambda^h found for h <= " + std::to_string(prm.h_max) +
                              " within height " + std::to_string(cap));
}

}  // namespace

LambdaUnit find_lambda_unit(const NumberField& H, const std::vector<PrimeFactor>& factors,
                            int lambda_index, const UnitSearchParams& prm,
                            const NfElement* avoid, const std::vector<NfElement>* torsion) {
    return search_impl(H, factors, lambda_index, prm, avoid, torsion, prm.parallel);
}

LambdaUnit find_lambda_unit_serial(const NumberField& H, const std::vector<PrimeFactor>& factors,
                                   int lambda_index, const UnitSearchParams& prm,
                                   const NfElement* avoid, const std::vector<NfElement>* torsion) {
    return search_impl(H, factors, lambda_index, prm, avoid, torsion, false);
}

std::vector<NfElement> torsion_units(const NumberField& H) {
    // roots of unity have order k with phi(k) | degree; their coordinates in a
    // monogenic basis at desk scale sit in a tiny box
    int n = H.degree;
    long long kmax = 1;
    for (long long k = 1; k <= 4 * static_cast<long long>(n) + 2; ++k) {
        // phi(k)
        long long m = k, phi = k;
        for (long long d = 2; d * d <= m; ++d) {
            if (m % d == 0) {
                phi -= phi / d;
                while (m % d == 0) m /= d;
            }
        }
        if (m > 1) phi -= phi / m;
        if (phi <= n) kmax = std::max(kmax, k);
    }
    std::vector<NfElement> out;
    std::vector<int> a(n, -1);
    NormEvaluator NE(H);
    NfElement one = NfElement::from_rational(H, 1);
    while (true) {
        if (NE.norm_abs(a) == 1) {
            std::vector<Q> coords(a.begin(), a.end());
            NfElement u(coords);
            NfElement pw = u;
            for (long long k = 1; k <= kmax; ++k) {
                if (pw == one) {
                    out.push_back(u);
                    break;
                }
                pw = nf_mul(H, pw, u);
            }
        }
        int i = 0;
        while (i < n) {
            if (++a[i] <= 1) break;
            a[i] = -1;
            ++i;
        }
        if (i == n) break;
    }
    return out;
}

PadicNumber EigenTables::heart_value(int g) const {
    return heart_values[g];
}

EigenTables make_eigen_tables(const DihedralData& D, const EmbeddingSet& E, const Character& heart) {
    EigenTables T;
    T.D = &D;
    T.E = &E;
    T.eact = embedding_action(D, E);
    T.heart = &heart;
    const PadicContext& c = *E.ctx;
    T.zeta = padic_root_of_unity(c, heart.m);
    T.heart_values.assign(D.S.T.n, PadicNumber::zero(c));
    for (int g : D.S.gm) T.heart_values[g] = padic_pow(T.zeta, heart.value_exp(g));
    return T;
}

PadicNumber eigen_unit_log(const EigenTables& T, int i0, const LambdaUnit& U) {
    const DihedralData& D = *T.D;
    const PadicContext& c = *T.E->ctx;
    if (D.S.gm.size() > 1 && T.heart->is_trivial(D.S))
        fail("DegenerateCharacter", "psi-heart is trivial");
    PadicNumber acc = PadicNumber::zero(c);
    for (int g : D.S.gm) {
        int j = T.eact[g][i0];
        PadicNumber lg = plog(embed_nf(D.H, U.alpha, c, T.E->embs[j]));
        acc = padic_add(acc, padic_mul(T.heart_value(g), lg));
    }
    return padic_scale_q(acc, Q(1) / Q(U.h));
}

PadicNumber psi_prime(const EigenTables& T, const std::vector<PadicNumber>& weights,
                      const std::vector<int>& rep_embeddings, const NfElement& u) {
    const DihedralData& D = *T.D;
    const PadicContext& c = *T.E->ctx;
    if (weights.size() != rep_embeddings.size())
        fail("BadIndex", "one weight per representative embedding required");
    int nemb = static_cast<int>(T.E->embs.size());
    // unit check at every place above p
    std::vector<PadicNumber> values;
    values.reserve(nemb);
    for (int j = 0; j < nemb; ++j) {
        PadicNumber ev = embed_nf(D.H, u, c, T.E->embs[j]);
        if (ev.is_zeroish() || ev.valuation != 0)
            fail("NonUnitInput", "sample is not a unit at every place above p");
        values.push_back(std::move(ev));
    }
    // per-embedding coefficient assembly
    std::vector<PadicNumber> coef(nemb, PadicNumber::zero(c));
    for (size_t i = 0; i < rep_embeddings.size(); ++i) {
        for (int g : D.S.gm) {
            int j = T.eact[g][rep_embeddings[i]];
            coef[j] = padic_add(coef[j], padic_mul(weights[i], T.heart_value(g)));
        }
    }
    PadicNumber acc = PadicNumber::zero(c);
    for (int j = 0; j < nemb; ++j) {
        if (coef[j].is_exact_zero()) continue;
        acc = padic_add(acc, padic_mul(coef[j], plog(values[j])));
    }
    return acc;
}

}  // namespace wt1
