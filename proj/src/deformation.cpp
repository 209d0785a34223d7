#include "wt1/deformation.hpp"

namespace wt1 {

void SplittingProfile::validate() const {
    int sum = 0;
    for (const auto& P : primes) {
        if (P.e < 1 || P.f < 1) fail("BadProfile", "e and f must be positive");
        if (P.splits_in_M != (P.stab != StabClass::None))
            fail("BadProfile", "stabilization class must be set exactly for split primes");
        sum += P.e * P.f;
    }
    if (!primes.empty() && sum != n)
        fail("BadProfile", "sum e_i f_i = " + std::to_string(sum) + " != [F:Q] = " + std::to_string(n));
    if (r < 0 || r > n) fail("BadProfile", "r out of range");
}

int SplittingProfile::sum_ef_split() const {
    int s = 0;
    for (const auto& P : primes)
        if (P.splits_in_M) s += P.e * P.f;
    return s;
}

int SplittingProfile::sum_ef_nonsplit() const {
    int s = 0;
    for (const auto& P : primes)
        if (!P.splits_in_M) s += P.e * P.f;
    return s;
}

int SplittingProfile::count_nonsplit() const {
    int s = 0;
    for (const auto& P : primes)
        if (!P.splits_in_M) ++s;
    return s;
}

static void require_totally_real_hyps(const SplittingProfile& P) {
    if (!P.leopoldt_assumed) fail("Inapplicable", "Leopoldt for M not asserted");
    if (!P.p_regular) fail("Inapplicable", "p-regularity not asserted");
    if (P.r != 0) fail("Inapplicable", "M is not totally real (r > 0)");
}

int fiber_tangent_dim(const SplittingProfile& P) {
    P.validate();
    require_totally_real_hyps(P);
    return P.sum_ef_split();
}

int ord_tangent_dim(const SplittingProfile& P) {
    P.validate();
    require_totally_real_hyps(P);
    return std::max(1, P.sum_ef_split());
}

static void push(std::vector<Assumption>* ledger, const std::string& name, bool ok) {
    if (ledger) ledger->push_back(Assumption{name, ok ? "asserted" : "failed"});
}

GeometryVerdict::Tri etale_verdict(const EtaleCaseFlags& f, std::vector<Assumption>* ledger) {
    push(ledger, "p splits in the imaginary quadratic K", f.p_split_in_K);
    push(ledger, "xi/xi^sigma has even order", f.xi_heart_even_order);
    push(ledger, "(psi/psi^sigma)^2 nontrivial", f.psi_heart_square_nontrivial);
    push(ledger, "psi != psi^sigma at every place above p", f.regular_at_all_places);
    bool all = f.p_split_in_K && f.xi_heart_even_order && f.psi_heart_square_nontrivial &&
               f.regular_at_all_places;
    // failed hypotheses never yield "false", only inapplicable
    return all ? GeometryVerdict::Tri::True : GeometryVerdict::Tri::Inapplicable;
}

RamifiedResult ramified_verdict(const SplittingProfile& P, const RamificationCaseFlags& f,
                                std::vector<Assumption>* ledger) {
    P.validate();
    push(ledger, "conductor primes split with one-sided ramification", f.conductor_split_condition);
    push(ledger, "residual representation absolutely irreducible over F(sqrt((-1)^{(p-1)/2} p))",
         f.absolutely_irreducible_restriction);
    push(ledger, "residual representation p-distinguished", f.p_distinguished);
    push(ledger, "residual psi-heart not quadratic", f.heart_not_quadratic);
    push(ledger, "p unramified in M", f.p_unramified_in_M);
    int margin = P.n - P.r - P.count_nonsplit() - P.sum_ef_nonsplit();
    bool flags_ok = f.conductor_split_condition && f.absolutely_irreducible_restriction &&
                    f.p_distinguished && f.heart_not_quadratic && f.p_unramified_in_M;
    RamifiedResult out;
    out.margin = margin;
    out.t0_lower_bound = std::max(0, margin);
    if (margin > 0 && flags_ok) out.verdict = GeometryVerdict::Tri::True;
    else if (margin <= 0) out.verdict = GeometryVerdict::Tri::Inconclusive;
    else out.verdict = GeometryVerdict::Tri::Inapplicable;
    return out;
}

GeometryVerdict evaluate_verdict(const SplittingProfile& P,
                                 const std::optional<EtaleCaseFlags>& t3,
                                 const std::optional<RamificationCaseFlags>& t4) {
    P.validate();
    GeometryVerdict v;
    v.total_tangent_dim = P.n + 1;
    v.assumptions.push_back(Assumption{"Leopoldt conjecture for M", P.leopoldt_assumed ? "asserted" : "failed"});
    v.assumptions.push_back(Assumption{"p-regularity of the weight-one point", P.p_regular ? "asserted" : "failed"});
    v.assumptions.push_back(Assumption{"M totally real", P.r == 0 ? "computed" : "failed"});
    if (P.leopoldt_assumed && P.p_regular && P.r == 0) {
        v.fiber_tangent_dim = fiber_tangent_dim(P);
        v.ord_tangent_dim = ord_tangent_dim(P);
        v.smooth = true;
        v.etale = v.fiber_tangent_dim == 0 ? GeometryVerdict::Tri::True : GeometryVerdict::Tri::False;
        int idx = 0;
        for (const auto& pr : P.primes) {
            if (pr.splits_in_M)
                v.local_contributions.push_back({"p_" + std::to_string(idx), pr.e * pr.f});
            ++idx;
        }
        int check = 0;
        for (auto& [k, d] : v.local_contributions) check += d;
        if (check != v.fiber_tangent_dim) fail("Internal", "local contribution table out of sync");
    } else if (t3) {
        v.etale = etale_verdict(*t3, &v.assumptions);
        if (v.etale == GeometryVerdict::Tri::True) {
            v.fiber_tangent_dim = 0;
            v.smooth = true;
        }
    }
    if (t4) {
        RamifiedResult r = ramified_verdict(P, *t4, &v.assumptions);
        v.ramified = r.verdict;
        v.margin = r.margin;
        v.t0_lower_bound = r.t0_lower_bound;
    }
    return v;
}

}  // namespace wt1
