#include "wt1/pipeline.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <sstream>

#ifdef WT1_HAVE_OPENMP
#include <omp.h>
#endif

namespace wt1 {

namespace {

NfElement elem_from_coords(const NumberField& K, const std::vector<Q>& coords,
                           const std::string& what) {
    if (static_cast<int>(coords.size()) != K.degree)
        fail("ConfigError", what + ": expected " + std::to_string(K.degree) + " coordinates");
    return NfElement(coords);
}

int locate_group_element(const DihedralData& D, const NfElement& image, const std::string& what) {
    QPoly target = poly_mod(nf_to_poly(image), D.H.f);
    for (int g = 0; g < D.S.T.n; ++g)
        if (D.elem[g] == target) return g;
    fail("ConfigError", what + ": not an element of the constructed Galois group");
    return -1;
}

// does the embedded F-prime generator vanish at the given prime of K?
bool lies_above(const NumberField& K, const FieldEmbedding& f_in_K, const NumberField& F,
                const PrimeFactor& f_prime, const PrimeFactor& k_prime) {
    QPoly gf(std::vector<Q>(f_prime.gen.c.begin(), f_prime.gen.c.end()));
    NfElement img = embed_element(K, f_in_K, nf_from_poly(F, gf));
    if (img.is_zero()) return true;
    ResidueField R = prime_residue_field(K, k_prime);
    return nf_mod_prime(K, img, R).is_zero();
}

}  // namespace

Tower build_tower(const RunConfig& cfg, bool with_padics) {
    NumberField F0(cfg.F_poly), M0(cfg.M_poly), H0(cfg.H_poly);
    if (M0.degree != 2 * F0.degree)
        fail("ConfigError", "fields.M.poly: M must be a quadratic extension of F");
    if (H0.degree % M0.degree != 0)
        fail("ConfigError", "fields.H.poly: degree of H must be a multiple of the degree of M");

    NfElement mgen = elem_from_coords(H0, cfg.M_gen_in_H, "fields.M.gen_in_H");
    FieldEmbedding m_in_h = make_embedding(M0, H0, mgen);
    NfElement fgen_m = elem_from_coords(M0, cfg.F_gen_in_M, "fields.F.gen_in_M");
    FieldEmbedding f_in_m = make_embedding(F0, M0, fgen_m);
    FieldEmbedding f_in_h = make_embedding(F0, H0, embed_element(H0, m_in_h, fgen_m));

    std::vector<QPoly> gen_maps;
    for (const auto& g : cfg.galois_generators)
        gen_maps.push_back(nf_to_poly(elem_from_coords(H0, g, "galois.generators[]")));
    QPoly sigma_map = nf_to_poly(elem_from_coords(H0, cfg.sigma_map, "galois.sigma"));
    std::optional<QPoly> conj_map;
    if (cfg.conj_map)
        conj_map = nf_to_poly(elem_from_coords(H0, *cfg.conj_map, "galois.complex_conj"));
    DihedralData D0 = build_dihedral_data(H0, F0.degree, gen_maps, mgen, sigma_map, conj_map);

    Tower T{std::move(F0), std::move(M0), std::move(H0),
            std::move(m_in_h), std::move(f_in_m), std::move(f_in_h), std::move(D0)};
    T.p = cfg.p;
    T.N = cfg.precision;
    T.tame_primes = cfg.tame_primes;

    int r0 = locate_group_element(T.D, elem_from_coords(T.H, cfg.char_generator, "character.generator"),
                                  "character.generator");
    if (!T.D.S.in_gm[r0]) fail("ConfigError", "character.generator: element does not fix M");
    T.psi = make_character(T.D.S, r0, cfg.char_order, cfg.psi_exponent);
    if (cfg.psi_heart_exponent) {
        T.heart = make_character(T.D.S, r0, cfg.char_order, *cfg.psi_heart_exponent);
        T.heart_overridden = true;
        T.assumptions.push_back(
            {"psi-heart supplied directly in the character section", "asserted"});
    } else {
        HeartCharacter hc = heart_character(T.psi, T.D.S);
        T.heart = hc.chi;
        if (hc.degenerate) T.assumptions.push_back({"psi/psi^sigma nontrivial", "failed"});
    }
    if (T.D.S.conj >= 0) {
        Z e = T.heart.value_exp(T.D.S.conj);
        T.heart_odd_at_conj = (2 * e) % T.heart.m == 0 && e % T.heart.m != 0;
        T.assumptions.push_back({"psi-heart(c) = -1 (kills the global-unit eigenspace)",
                                 T.heart_odd_at_conj ? "computed" : "failed"});
    }

    // splitting of p across the tower
    T.p_in_F = factor_rational_prime(T.F, T.p);
    T.p_in_M = factor_rational_prime(T.M, T.p);
    int r_M = (T.M.degree - poly_real_root_count(T.M.f)) / 2;
    T.profile.n = T.F.degree;
    T.profile.r = r_M;
    T.profile.leopoldt_assumed = cfg.leopoldt_M;
    T.profile.p_regular = cfg.p_regular;
    T.assumptions.push_back({"Leopoldt conjecture for M", cfg.leopoldt_M ? "asserted" : "failed"});
    T.assumptions.push_back(
        {"p-regularity of the weight-one point", cfg.p_regular ? "asserted" : "failed"});
    T.assumptions.push_back({"M totally real", r_M == 0 ? "computed" : "failed"});

    std::vector<int> m_to_f(T.p_in_M.size(), -1);
    for (size_t mi = 0; mi < T.p_in_M.size(); ++mi) {
        for (size_t fi = 0; fi < T.p_in_F.size(); ++fi) {
            if (lies_above(T.M, T.f_in_m, T.F, T.p_in_F[fi], T.p_in_M[mi])) {
                if (m_to_f[mi] != -1) fail("Internal", "M-prime above two F-primes");
                m_to_f[mi] = static_cast<int>(fi);
            }
        }
        if (m_to_f[mi] == -1) fail("Internal", "M-prime not matched to an F-prime");
    }

    size_t stab_cursor = 0;
    for (size_t fi = 0; fi < T.p_in_F.size(); ++fi) {
        std::vector<int> above;
        for (size_t mi = 0; mi < T.p_in_M.size(); ++mi)
            if (m_to_f[mi] == static_cast<int>(fi)) above.push_back(static_cast<int>(mi));
        PrimeSplitting ps;
        ps.e = T.p_in_F[fi].e;
        ps.f = T.p_in_F[fi].f;
        if (above.size() == 2) {
            ps.splits_in_M = true;
            std::string cls = "I";
            if (cfg.stabilization.size() == 1) cls = cfg.stabilization[0];
            else if (!cfg.stabilization.empty()) cls = cfg.stabilization.at(stab_cursor);
            ++stab_cursor;
            ps.stab = cls == "I" ? StabClass::I : StabClass::Iprime;
            T.split_places.push_back(SplitPlaceData{static_cast<int>(fi), above[0], above[1], ps.stab});
        } else {
            ps.splits_in_M = false;
            ps.stab = StabClass::None;
        }
        T.profile.primes.push_back(ps);
    }
    T.profile.validate();
    T.assumptions.push_back(
        {"p-stabilization choice (class I: psi^sigma(Frob) is the U_p eigenvalue)", "asserted"});

    T.search.h_max = cfg.search_h_max;
    T.search.height_cap = cfg.search_height_cap;

    if (!with_padics) return T;

    for (const auto& P : T.p_in_M)
        if (P.e > 1)
            fail("RamifiedPrime", "p ramifies in M; the coefficient pipeline requires p unramified");
    // hypotheses of the coefficient formula, each named; verdicts do not need these
    if (T.profile.r != 0) fail("HypothesisFailure", "M is not totally real");
    if (!cfg.leopoldt_M) fail("HypothesisFailure", "Leopoldt for M not asserted");
    if (!cfg.p_regular) fail("HypothesisFailure", "p-regularity not asserted");
    if (T.profile.sum_ef_split() == 0) fail("HypothesisFailure", "S_p is empty");
    if (T.D.S.gm.size() > 1 && T.heart.is_trivial(T.D.S))
        fail("HypothesisFailure", "psi/psi^sigma is trivial (theta series not cuspidal-irreducible)");
    if (T.D.S.conj < 0)
        fail("HypothesisFailure", "complex conjugation not identified; required when M is totally real");
    if (!T.heart_odd_at_conj)
        fail("HypothesisFailure",
             "psi-heart(c) != -1: the lambda-unit logs would depend on the representative");
    Z root_order = T.heart.m;
    {
        Z g = z_gcd(root_order, T.psi.m);
        root_order = root_order / g * T.psi.m;
    }
    if (root_order % T.p == 0) fail("WildRoot", "character order divisible by p is not supported");
    T.p_in_H = factor_rational_prime(T.H, T.p);
    T.E = padic_embeddings(T.H, T.p, T.N, root_order);
    T.tables = std::make_unique<EigenTables>(make_eigen_tables(T.D, T.E, T.heart));
    T.zeta_psi = padic_root_of_unity(*T.E.ctx, T.psi.m);

    const PadicContext& c = *T.E.ctx;
    int nemb = static_cast<int>(T.E.embs.size());
    std::vector<RingElem> fvals(nemb), mvals(nemb);
    for (int j = 0; j < nemb; ++j) {
        fvals[j] = embed_nf_ring(T.H, T.f_in_h.gen_image, c, T.E.embs[j]);
        mvals[j] = embed_nf_ring(T.H, T.m_in_h.gen_image, c, T.E.embs[j]);
    }
    auto match_factor = [&](const FqElem& res, const std::vector<PrimeFactor>& factors,
                            const char* what) {
        int hit = -1;
        for (size_t t = 0; t < factors.size(); ++t) {
            if (fq_eval_poly(c.residue, factors[t].gen, res).is_zero()) {
                if (hit >= 0) fail("Internal", std::string("embedding matches two ") + what);
                hit = static_cast<int>(t);
            }
        }
        if (hit < 0) fail("Internal", std::string("embedding matches no ") + what);
        return hit;
    };

    std::vector<int> emb_m_factor(nemb), emb_f_prime(nemb);
    for (int j = 0; j < nemb; ++j) {
        emb_m_factor[j] = match_factor(ring_residue(c, mvals[j]), T.p_in_M, "M-factor");
        emb_f_prime[j] = match_factor(ring_residue(c, fvals[j]), T.p_in_F, "F-factor");
    }
    // F-embedding classes: distinct values of the embedded F-generator
    std::vector<int> f_class(nemb, -1);
    std::vector<RingElem> class_reps;
    std::vector<int> class_f_prime;
    for (int j = 0; j < nemb; ++j) {
        for (size_t k = 0; k < class_reps.size(); ++k)
            if (class_reps[k] == fvals[j]) f_class[j] = static_cast<int>(k);
        if (f_class[j] < 0) {
            class_reps.push_back(fvals[j]);
            class_f_prime.push_back(emb_f_prime[j]);
            f_class[j] = static_cast<int>(class_reps.size()) - 1;
        }
    }

    for (const auto& sp : T.split_places) {
        int want_m = sp.stab == StabClass::I ? sp.m_factor_conjugate : sp.m_factor_canonical;
        for (size_t k = 0; k < class_reps.size(); ++k) {
            if (class_f_prime[k] != sp.f_prime_index) continue;
            int rep = -1;
            for (int j = 0; j < nemb; ++j) {
                if (f_class[j] == static_cast<int>(k) && emb_m_factor[j] == want_m) {
                    rep = j;
                    break;
                }
            }
            if (rep < 0) fail("Internal", "no embedding over the selected place");
            T.rep_embeddings.push_back(rep);
        }
    }
    {
        int expected = 0;
        for (const auto& ps : T.profile.primes)
            if (ps.splits_in_M) expected += ps.e * ps.f;
        if (static_cast<int>(T.rep_embeddings.size()) != expected)
            fail("Internal", "|I'_F| != sum e_i f_i over S_p");
    }

    if (!cfg.alpha_weights.empty() && cfg.alpha_weights.size() != T.rep_embeddings.size())
        fail("ConfigError", "arithmetic.alpha_weights: expected " +
                                std::to_string(T.rep_embeddings.size()) +
                                " weights (one per I'_F embedding)");
    for (size_t i = 0; i < T.rep_embeddings.size(); ++i) {
        Q w = cfg.alpha_weights.empty() ? Q(1) : cfg.alpha_weights[i];
        T.weights.push_back(PadicNumber::from_q(c, w));
    }

    T.torsion = torsion_units(T.H);
    return T;
}

VerdictOutcome run_verdicts(const Tower& T, const RunConfig& cfg) {
    return VerdictOutcome{evaluate_verdict(T.profile, cfg.etale_case, cfg.ramification_case), T.profile};
}

// ---- per-ell coefficients ---------------------------------------------------

std::vector<CoefficientRow> generalized_coefficient(const Tower& T, const Z& ell) {
    if (!T.tables) fail("Internal", "tower built without the p-adic side");
    const PadicContext& c = *T.E.ctx;
    std::vector<CoefficientRow> rows;

    auto excluded_row = [&](const std::string& why) {
        CoefficientRow r;
        r.ell = ell;
        r.classification = "excluded";
        r.detail = why;
        r.value = PadicNumber::zero(c);
        return r;
    };
    if (ell == T.p) {
        rows.push_back(excluded_row("ell = p"));
        return rows;
    }
    for (const auto& t : T.tame_primes) {
        if (ell == t) {
            rows.push_back(excluded_row("ell divides the tame level"));
            return rows;
        }
    }

    std::vector<PrimeFactor> ell_in_F, ell_in_M;
    try {
        ell_in_F = factor_rational_prime(T.F, ell);
        ell_in_M = factor_rational_prime(T.M, ell);
    } catch (const error& e) {
        CoefficientRow r;
        r.ell = ell;
        r.classification = "failed";
        r.failed = true;
        r.fail_code = e.code;
        r.detail = e.what();
        r.value = PadicNumber::zero(c);
        rows.push_back(r);
        return rows;
    }

    for (size_t fi = 0; fi < ell_in_F.size(); ++fi) {
        CoefficientRow row;
        row.ell = ell;
        row.f_prime_index = static_cast<int>(fi);
        try {
            std::vector<int> m_above;
            bool m_ramified = false;
            for (size_t mi = 0; mi < ell_in_M.size(); ++mi) {
                if (lies_above(T.M, T.f_in_m, T.F, ell_in_F[fi], ell_in_M[mi])) {
                    m_above.push_back(static_cast<int>(mi));
                    if (ell_in_M[mi].e > 1) m_ramified = true;
                }
            }
            if (m_above.empty()) fail("Internal", "no M-prime above the F-prime");
            if (m_ramified) {
                row.classification = "excluded";
                row.detail = "ramified in M (prime divides the relative discriminant)";
                row.value = PadicNumber::zero(c);
                rows.push_back(row);
                continue;
            }
            if (m_above.size() == 2) {
                // split row: exact zero, no p-adic work at all
                row.classification = "split";
                row.value = PadicNumber::zero(c);
                row.precision = INT_MAX;
                row.invariance_delta_prec = INT_MAX;
                rows.push_back(row);
                continue;
            }

            row.classification = "inert";
            std::vector<PrimeFactor> ell_in_H = factor_rational_prime(T.H, ell);
            // primes of H above this F-prime
            std::vector<int> lam;
            for (size_t t = 0; t < ell_in_H.size(); ++t)
                if (lies_above(T.H, T.f_in_h, T.F, ell_in_F[fi], ell_in_H[t]))
                    lam.push_back(static_cast<int>(t));
            int fF = ell_in_F[fi].f;
            for (int t : lam) {
                if (ell_in_H[t].e != 1 || ell_in_H[t].f != 2 * fF)
                    fail("PreconditionSplit",
                         "the prime of M below lambda does not split completely in H");
            }
            if (lam.size() != T.D.S.gm.size())
                fail("PreconditionSplit", "wrong number of primes of H above ell");

            Z q = z_pow(ell, static_cast<uint64_t>(fF));
            int lam0 = lam[0];
            int frob = frobenius_at(T.D, q, ell_in_H[lam0], ell_in_H);
            if (T.D.S.in_gm[frob])
                fail("Internal", "Frobenius of an inert prime acts trivially on M");
            int s0 = T.D.S.T.mul[T.D.S.sigma][frob];
            if (!T.D.S.in_gm[s0]) fail("Internal", "sigma * Frobenius not in Gal(H/M)");
            Z eta_psi_exp = T.psi.value_exp(s0);
            PadicNumber eta0 = padic_pow(T.zeta_psi, eta_psi_exp);

            for (int t : lam) {
                // transporter g with g(lambda_0) = lambda_t
                int transporter = -1;
                for (int g : T.D.S.gm) {
                    if (prime_image(T.D, g, ell_in_H, lam0) == t) {
                        transporter = g;
                        break;
                    }
                }
                if (transporter < 0) fail("Internal", "G'' does not act transitively on Sigma_ell");
                LambdaUnit U = find_lambda_unit(T.H, ell_in_H, t, T.search);
                PadicNumber unit_side = PadicNumber::zero(c);
                for (size_t i = 0; i < T.rep_embeddings.size(); ++i) {
                    PadicNumber v = eigen_unit_log(*T.tables, T.rep_embeddings[i], U);
                    unit_side = padic_add(unit_side, padic_mul(T.weights[i], v));
                }
                PadicNumber eta = padic_mul(eta0, T.tables->heart_value(transporter));
                LambdaValue lv;
                lv.lambda_index = t;
                {
                    std::ostringstream os;
                    os << "(" << ell << ", " << poly_to_string(QPoly(std::vector<Q>(
                                                   ell_in_H[t].gen.c.begin(), ell_in_H[t].gen.c.end())))
                       << ")";
                    lv.lambda_gen = os.str();
                }
                lv.frobenius = frobenius_at(T.D, q, ell_in_H[t], ell_in_H);
                lv.transporter = transporter;
                lv.eta_psi_exp = eta_psi_exp;
                lv.eta_heart_exp = T.heart.value_exp(transporter);
                lv.alpha = U.alpha;
                lv.h = U.h;
                lv.value = padic_mul(eta, unit_side);
                row.per_lambda.push_back(std::move(lv));
            }
            row.value = row.per_lambda.front().value;
            row.precision = std::min(row.value.abs_prec(), T.N);
            int delta = INT_MAX;
            for (size_t a = 0; a < row.per_lambda.size(); ++a)
                for (size_t b = a + 1; b < row.per_lambda.size(); ++b)
                    delta = std::min(delta,
                                     padic_agree_prec(row.per_lambda[a].value, row.per_lambda[b].value));
            row.invariance_delta_prec = delta;
            rows.push_back(std::move(row));
        } catch (const error& e) {
            row.classification = "failed";
            row.failed = true;
            row.fail_code = e.code;
            row.detail = e.what();
            row.value = PadicNumber::zero(c);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

BatchResult run_coefficients(const Tower& T, const RunConfig& cfg, int threads) {
    BatchResult out;
    std::vector<Z> ells;
    if (!cfg.ell_list.empty()) {
        ells = cfg.ell_list;
        std::sort(ells.begin(), ells.end());
        ells.erase(std::unique(ells.begin(), ells.end()), ells.end());
    } else {
        if (cfg.ell_max < cfg.ell_min) fail("ConfigError", "task.ell_max: empty ell range");
        for (Z q = cfg.ell_min; q <= cfg.ell_max; ++q)
            if (q >= 2 && is_prime_u64(static_cast<uint64_t>(q))) ells.push_back(q);
    }
    std::vector<std::vector<CoefficientRow>> buckets(ells.size());
#ifdef WT1_HAVE_OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < static_cast<long long>(ells.size()); ++i) {
        buckets[i] = generalized_coefficient(T, ells[i]);
    }
#else
    (void)threads;
    for (size_t i = 0; i < ells.size(); ++i) buckets[i] = generalized_coefficient(T, ells[i]);
#endif
    for (auto& b : buckets)
        for (auto& r : b) {
            if (r.failed) out.partial_failure = true;
            out.rows.push_back(std::move(r));
        }
    return out;
}

}  // namespace wt1
