#pragma once

#include "wt1/config.hpp"
#include "wt1/deformation.hpp"
#include "wt1/qexp.hpp"

#include <memory>
#include <string>
#include <vector>

namespace wt1 {

// One p-adic place of M sitting over an F-prime above p.
struct SplitPlaceData {
    int f_prime_index;        // index of the F-prime above p
    int m_factor_canonical;   // v_i: canonical M-factor above p
    int m_factor_conjugate;   // v_i^sigma
    StabClass stab;
};

// The assembled arithmetic setting shared by verdicts and coefficients.
struct Tower {
    NumberField F, M, H;
    FieldEmbedding m_in_h;
    FieldEmbedding f_in_m;
    FieldEmbedding f_in_h;
    DihedralData D;

    Tower(NumberField F0, NumberField M0, NumberField H0, FieldEmbedding mh, FieldEmbedding fm,
          FieldEmbedding fh, DihedralData D0)
        : F(std::move(F0)), M(std::move(M0)), H(std::move(H0)), m_in_h(std::move(mh)),
          f_in_m(std::move(fm)), f_in_h(std::move(fh)), D(std::move(D0)) {}
    Character psi;
    Character heart;
    bool heart_overridden = false;
    bool heart_odd_at_conj = false;

    Z p;
    int N;
    std::vector<Z> tame_primes;
    std::vector<PrimeFactor> p_in_F, p_in_M, p_in_H;
    SplittingProfile profile;
    std::vector<SplitPlaceData> split_places;

    // p-adic side (present when coefficients are requested)
    EmbeddingSet E;
    std::unique_ptr<EigenTables> tables;
    std::vector<int> rep_embeddings;      // one per embedding in I'_F
    std::vector<PadicNumber> weights;     // alpha_i, parallel to rep_embeddings
    PadicNumber zeta_psi;                 // zeta_{m_psi} for the eta multiplier

    std::vector<Assumption> assumptions;
    UnitSearchParams search;
    std::vector<NfElement> torsion;       // roots of unity of O_H
};

// Build and validate everything that does not depend on ell.
// with_padics controls whether the p-adic tables are constructed.
Tower build_tower(const RunConfig& cfg, bool with_padics);

struct LambdaValue {
    int lambda_index;
    std::string lambda_gen;   // printable two-element generator
    int frobenius;            // group index of sigma_lambda
    int transporter;          // g with g(lambda_0) = lambda
    Z eta_psi_exp, eta_heart_exp;
    NfElement alpha;
    int h;
    PadicNumber value;
};

struct CoefficientRow {
    Z ell;
    int f_prime_index = 0;
    std::string classification;  // split | inert | excluded | ramified_in_M | failed
    std::string detail;
    std::vector<LambdaValue> per_lambda;
    PadicNumber value;
    int invariance_delta_prec = 0;  // min pairwise agreement in absolute digits
    int precision = 0;
    bool failed = false;
    std::string fail_code;
};

// The a_ell(f-dagger) pipeline for one rational prime (all F-primes above it).
std::vector<CoefficientRow> generalized_coefficient(const Tower& T, const Z& ell);

struct VerdictOutcome {
    GeometryVerdict verdict;
    SplittingProfile profile;
};

VerdictOutcome run_verdicts(const Tower& T, const RunConfig& cfg);

struct BatchResult {
    std::vector<CoefficientRow> rows;
    bool partial_failure = false;
};

// Batch over the requested ell range; per-ell failures are recorded, not fatal.
BatchResult run_coefficients(const Tower& T, const RunConfig& cfg, int threads);

}  // namespace wt1
