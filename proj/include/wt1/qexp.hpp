#pragma once

#include "wt1/galois.hpp"

#include <optional>
#include <vector>

namespace wt1 {

// u_lambda = alpha^{1/h}: a generator of lambda^h, logarithms divided by h.
struct LambdaUnit {
    int lambda_index;  // into the factor list of ell in H
    NfElement alpha;
    int h;
};

struct UnitSearchParams {
    int h_max = 6;
    long long height_cap = 0;  // 0: derive 10*ell from the prime
    bool parallel = true;
};

// Exhaustive shell search for a generator of lambda^h in Z[theta], minimal h
// first, then minimal height, then lexicographically smallest coordinates.
// skip_torsion_associates_of: reject candidates equal to zeta * given alpha
// (zeta running over the supplied torsion units) so a second, genuinely
// different representative can be requested.
// Errors: BoundExceeded when the search space is exhausted.
LambdaUnit find_lambda_unit(const NumberField& H, const std::vector<PrimeFactor>& factors,
                            int lambda_index, const UnitSearchParams& prm,
                            const NfElement* skip_torsion_associates_of = nullptr,
                            const std::vector<NfElement>* torsion_units = nullptr);

// Serial reference of the same search, kept for tests and benchmarks.
LambdaUnit find_lambda_unit_serial(const NumberField& H, const std::vector<PrimeFactor>& factors,
                                   int lambda_index, const UnitSearchParams& prm,
                                   const NfElement* skip_torsion_associates_of = nullptr,
                                   const std::vector<NfElement>* torsion_units = nullptr);

// torsion units of O_H (roots of unity), found by bounded search
std::vector<NfElement> torsion_units(const NumberField& H);

// Shared p-adic evaluation tables for the eigenprojected sums.
struct EigenTables {
    const DihedralData* D;
    const EmbeddingSet* E;
    std::vector<std::vector<int>> eact;     // embedding_action(D, E)
    const Character* heart;
    PadicNumber zeta;                       // zeta_m in the working context
    std::vector<PadicNumber> heart_values;  // per group index (G'' only)

    PadicNumber heart_value(int g) const;
};

EigenTables make_eigen_tables(const DihedralData& D, const EmbeddingSet& E, const Character& heart);

// (1/h) * sum_{g in G''} heart(g) * log_p(iota_{i0 . g}(alpha)).
// Errors: DegenerateCharacter when heart is trivial on a nontrivial G''.
PadicNumber eigen_unit_log(const EigenTables& T, int i0, const LambdaUnit& U);

// Psi'(u) = sum_i alpha_i sum_{g in G''} heart(g) log_p(iota_{i0_i . g}(u)),
// assembled through per-embedding coefficients (independent of the
// eigen_unit_log summation path). Errors: NonUnitInput when u is not a unit
// at every place above p.
PadicNumber psi_prime(const EigenTables& T, const std::vector<PadicNumber>& weights,
                      const std::vector<int>& rep_embeddings, const NfElement& u);

}  // namespace wt1
