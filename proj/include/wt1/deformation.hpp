#pragma once

#include "wt1/bigint.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wt1 {

enum class StabClass { None, I, Iprime };

struct PrimeSplitting {
    int e = 1;
    int f = 1;
    bool splits_in_M = false;
    StabClass stab = StabClass::None;
};

struct SplittingProfile {
    std::vector<PrimeSplitting> primes;  // primes of F above p
    int r = 0;                           // M has 2r complex embeddings
    int n = 1;                           // [F:Q]
    bool leopoldt_assumed = false;
    bool p_regular = false;

    void validate() const;  // invariants from the type contract
    int sum_ef_split() const;
    int sum_ef_nonsplit() const;
    int count_nonsplit() const;
};

struct Assumption {
    std::string name;
    std::string status;  // computed | asserted | failed
};

struct EtaleCaseFlags {
    bool p_split_in_K = false;
    bool xi_heart_even_order = false;
    bool psi_heart_square_nontrivial = false;
    bool regular_at_all_places = false;
};

struct RamificationCaseFlags {
    bool conductor_split_condition = false;
    bool absolutely_irreducible_restriction = false;
    bool p_distinguished = false;
    bool heart_not_quadratic = false;
    bool p_unramified_in_M = false;
};

struct GeometryVerdict {
    int fiber_tangent_dim = -1;        // dim of the fiber tangent space at x
    int ord_tangent_dim = -1;          // dim t_{D^ord}
    int total_tangent_dim = -1;        // n + 1
    bool smooth = false;
    enum class Tri { True, False, Inapplicable, Inconclusive };
    Tri etale = Tri::Inapplicable;
    Tri ramified = Tri::Inapplicable;
    int margin = 0;                    // n - r - |S^p| - sum_{S^p} e f
    int t0_lower_bound = 0;
    std::vector<std::pair<std::string, int>> local_contributions;  // per split prime e_i f_i
    std::vector<Assumption> assumptions;
};

// Fiber dimension: sum of e_i f_i over split primes; requires Leopoldt for M,
// p-regularity and M totally real (r = 0). Error Inapplicable otherwise.
int fiber_tangent_dim(const SplittingProfile& P);

// Ordinary dimension: max(1, same sum)
int ord_tangent_dim(const SplittingProfile& P);

// Etale criterion (biquadratic CM case)
GeometryVerdict::Tri etale_verdict(const EtaleCaseFlags& flags, std::vector<Assumption>* ledger);

struct RamifiedResult {
    GeometryVerdict::Tri verdict;
    int margin;
    int t0_lower_bound;
};

// Ramification criterion: margin = n - r - |S^p| - sum_{S^p} f_i e_i; ramified when
// the margin is positive and all asserted hypotheses hold.
RamifiedResult ramified_verdict(const SplittingProfile& P, const RamificationCaseFlags& flags,
                                std::vector<Assumption>* ledger);

// Full verdict record for the totally-real case (plus the ramification margin).
GeometryVerdict evaluate_verdict(const SplittingProfile& P,
                                 const std::optional<EtaleCaseFlags>& t3,
                                 const std::optional<RamificationCaseFlags>& t4);

}  // namespace wt1
