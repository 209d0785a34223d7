#include "doctest.h"

#include "wt1/numberfield.hpp"

#include <map>

using namespace wt1;

namespace {

// test-side oracle: Kronecker symbol (d / ell)
int kronecker(Z d, Z n) {
    if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
    int sign = 1;
    if (n < 0) {
        n = -n;
        if (d < 0) sign = -sign;
    }
    int result = 1;
    while (n % 2 == 0) {
        n /= 2;
        if (d % 2 == 0) return 0;
        Z m8 = ((d % 8) + 8) % 8;
        if (m8 == 3 || m8 == 5) result = -result;
    }
    d = ((d % n) + n) % n;
    while (d != 0) {
        while (d % 2 == 0) {
            d /= 2;
            Z m8 = n % 8;
            if (m8 == 3 || m8 == 5) result = -result;
        }
        std::swap(d, n);
        if (d % 4 == 3 && n % 4 == 3) result = -result;
        d %= n;
    }
    return n == 1 ? sign * result : 0;
}

std::map<Z, int> trial_factor(Z n) {
    std::map<Z, int> out;
    if (n < 0) n = -n;
    for (Z d = 2; d * d <= n; ++d)
        while (n % d == 0) {
            out[d]++;
            n /= d;
        }
    if (n > 1) out[n]++;
    return out;
}

}  // namespace

TEST_CASE("number field construction guards") {
    CHECK_THROWS_AS(NumberField(QPoly::from_int({-1, 0, 1})), error);     // reducible
    CHECK_THROWS_AS(NumberField(QPoly::from_int({1, 0, 2})), error);      // not monic
    CHECK_THROWS_AS(NumberField(QPoly(std::vector<Q>{Q(1) / 2, Q(1)})), error);  // not integral
    NumberField rationals(QPoly::x());
    CHECK(rationals.degree == 1);
}

TEST_CASE("factor_rational_prime examples") {
    NumberField K(QPoly::from_int({-1, -1, 1}));  // x^2 - x - 1
    auto f11 = factor_rational_prime(K, Z(11));
    REQUIRE(f11.size() == 2);
    CHECK(f11[0].e == 1);
    CHECK(f11[0].f == 1);
    CHECK(f11[1].e == 1);
    CHECK(f11[1].f == 1);

    NumberField G(QPoly::from_int({1, 0, 1}));  // x^2 + 1
    auto f2 = factor_rational_prime(G, Z(2));   // Dedekind criterion passes: Z[i] is maximal
    REQUIRE(f2.size() == 1);
    CHECK(f2[0].e == 2);
    CHECK(f2[0].f == 1);

    auto f7 = factor_rational_prime(K, Z(7));
    REQUIRE(f7.size() == 1);
    CHECK(f7[0].e == 1);
    CHECK(f7[0].f == 2);
}

TEST_CASE("index divisor is rejected") {
    // Dedekind's field: 2 divides the index of Z[theta]
    NumberField K(QPoly::from_int({-8, -2, -1, 1}));
    CHECK_THROWS_AS(factor_rational_prime(K, Z(2)), error);
    try {
        factor_rational_prime(K, Z(2));
        FAIL("unreachable");
    } catch (const error& e) {
        CHECK(e.code == "IndexDivisor");
    }
    // the override attests maximality (it does not hold here; exercising the flag only)
    auto fs = factor_rational_prime(K, Z(2), true);
    CHECK(!fs.empty());
    // other primes are fine
    auto f3 = factor_rational_prime(K, Z(3));
    int sum = 0;
    for (auto& P : f3) sum += P.e * P.f;
    CHECK(sum == 3);
}

TEST_CASE("norm examples") {
    NumberField K(QPoly::from_int({-1, -1, 1}));
    CHECK(nf_norm(K, NfElement::from_rational(K, Q(5))) == Q(25));  // c^n
    CHECK(nf_norm(K, NfElement::gen(K)) == Q(-1));

    NumberField G(QPoly::from_int({1, 0, 1}));
    NfElement one_plus_i(std::vector<Q>{Q(1), Q(1)});
    CHECK(nf_norm(G, one_plus_i) == Q(2));

    NumberField deg5(QPoly::from_int({-1, -1, 0, 0, 0, 1}));  // x^5 - x - 1
    CHECK(nf_norm(deg5, NfElement::from_rational(deg5, Q(3))) == Q(243));
}

TEST_CASE("field inversion") {
    NumberField G(QPoly::from_int({1, 0, 1}));
    NfElement x(std::vector<Q>{Q(1), Q(1)});
    CHECK(nf_mul(G, x, nf_inv(G, x)) == NfElement::from_rational(G, Q(1)));
    CHECK_THROWS_AS(nf_inv(G, NfElement::zero(G)), error);
    NumberField H(QPoly::from_int({1, 0, 0, 0, 1}));
    NfElement y(std::vector<Q>{Q(2), Q(-1), Q(0), Q(3)});
    CHECK(nf_mul(H, nf_pow(H, y, Z(-3)), nf_pow(H, y, Z(3))) == NfElement::from_rational(H, Q(1)));
}

TEST_CASE("element valuation examples") {
    NumberField K(QPoly::from_int({-1, -1, 1}));
    auto f11 = factor_rational_prime(K, Z(11));
    NfElement ell = NfElement::from_rational(K, Q(11));
    CHECK(element_valuation(K, ell, f11[0]) == 1);  // v_P(ell) = e = 1
    CHECK(element_valuation(K, ell, f11[1]) == 1);

    NumberField G(QPoly::from_int({1, 0, 1}));
    auto f2 = factor_rational_prime(G, Z(2));
    NfElement two = NfElement::from_rational(G, Q(2));
    CHECK(element_valuation(G, two, f2[0]) == 2);  // ramified: v_P(2) = e = 2
    NfElement one_plus_i(std::vector<Q>{Q(1), Q(1)});
    CHECK(element_valuation(G, one_plus_i, f2[0]) == 1);

    CHECK_THROWS_AS(element_valuation(G, NfElement::zero(G), f2[0]), error);

    // denominators: v(1/2) = -2 at the ramified prime above 2
    NfElement half = NfElement::from_rational(G, Q(1) / 2);
    CHECK(element_valuation(G, half, f2[0]) == -2);
}

TEST_CASE("valuation is additive") {
    NumberField K(QPoly::from_int({1, 0, 1}));
    auto f5 = factor_rational_prime(K, Z(5));
    auto f2 = factor_rational_prime(K, Z(2));  // ramified, e = 2
    SplitMix64 rng(31);
    for (int t = 0; t < 40; ++t) {
        NfElement x(std::vector<Q>{Q(static_cast<long long>(rng.below(19)) - 9),
                                   Q(static_cast<long long>(rng.below(19)) - 9)});
        NfElement y(std::vector<Q>{Q(static_cast<long long>(rng.below(19)) - 9),
                                   Q(static_cast<long long>(rng.below(19)) - 9)});
        if (x.is_zero() || y.is_zero()) continue;
        for (const auto& P : f5) {
            CHECK(element_valuation(K, nf_mul(K, x, y), P) ==
                  element_valuation(K, x, P) + element_valuation(K, y, P));
        }
        CHECK(element_valuation(K, nf_mul(K, x, y), f2[0]) ==
              element_valuation(K, x, f2[0]) + element_valuation(K, y, f2[0]));
    }
}

TEST_CASE("norm-valuation compatibility") {
    std::vector<QPoly> polys = {QPoly::from_int({-2, 0, 1}), QPoly::from_int({1, 0, 1}),
                                QPoly::from_int({5, 0, 1}), QPoly::from_int({-2, 0, 0, 1})};
    SplitMix64 rng(77);
    for (const auto& fpoly : polys) {
        NumberField K(fpoly);
        for (int t = 0; t < 10; ++t) {
            std::vector<Q> c(K.degree);
            for (auto& x : c) x = Q(static_cast<long long>(rng.below(9)) - 4);
            NfElement x(c);
            if (x.is_zero()) continue;
            Z n = z_abs(q_num(nf_norm(K, x)));
            if (n == 0) continue;
            bool skip = false;
            auto fac = trial_factor(n);
            Z reconstructed = 1;
            for (auto& [ell, v] : fac) {
                std::vector<PrimeFactor> Ps;
                try {
                    Ps = factor_rational_prime(K, ell);
                } catch (const error&) {
                    skip = true;  // index divisor: identity not applicable in Z[theta]
                    break;
                }
                int s = 0;
                for (const auto& P : Ps) s += P.f * element_valuation(K, x, P);
                CHECK(s == v);
                reconstructed *= z_pow(ell, static_cast<uint64_t>(v));
            }
            if (!skip) CHECK(reconstructed == n);
        }
    }
}

TEST_CASE("quadratic classification agrees with the Kronecker oracle") {
    std::vector<std::pair<QPoly, Z>> fields = {
        {QPoly::from_int({-2, 0, 1}), Z(8)},    // disc 8
        {QPoly::from_int({-1, -1, 1}), Z(5)},   // disc 5
        {QPoly::from_int({1, 0, 1}), Z(-4)},    // disc -4
        {QPoly::from_int({5, 0, 1}), Z(-20)},   // disc -20
    };
    for (auto& [fpoly, disc] : fields) {
        NumberField K(fpoly);
        for (uint64_t ell = 2; ell < 100; ++ell) {
            if (!is_prime_u64(ell)) continue;
            std::vector<PrimeFactor> Ps;
            try {
                Ps = factor_rational_prime(K, Z(ell));
            } catch (const error&) {
                continue;
            }
            int k = kronecker(disc, Z(ell));
            if (k == 1) CHECK(Ps.size() == 2);
            if (k == -1) {
                REQUIRE(Ps.size() == 1);
                CHECK(Ps[0].f == 2);
            }
            if (k == 0) {
                REQUIRE(Ps.size() == 1);
                CHECK(Ps[0].e == 2);
            }
        }
    }
}

TEST_CASE("embeddings verify the generator image") {
    NumberField M(QPoly::from_int({-2, 0, 1}));
    NumberField H(QPoly::from_int({1, 0, 0, 0, 1}));
    NfElement sqrt2(std::vector<Q>{Q(0), Q(1), Q(0), Q(-1)});
    FieldEmbedding emb = make_embedding(M, H, sqrt2);
    NfElement img = embed_element(H, emb, NfElement::gen(M));
    CHECK(img == sqrt2);
    // 3 + sqrt2 maps consistently
    NfElement x(std::vector<Q>{Q(3), Q(1)});
    NfElement y = embed_element(H, emb, x);
    CHECK(nf_norm(H, y) == Q(49));  // N_{H/Q} = (N_{M/Q})^2 = 7^2

    NfElement wrong(std::vector<Q>{Q(0), Q(1), Q(0), Q(1)});
    CHECK_THROWS_AS(make_embedding(M, H, wrong), error);
}

TEST_CASE("sum of e*f equals the degree across a corpus") {
    std::vector<QPoly> corpus = {
        QPoly::x(),
        QPoly::from_int({-2, 0, 1}),
        QPoly::from_int({-1, -1, 1}),
        QPoly::from_int({1, 0, 1}),
        QPoly::from_int({-2, 0, 0, 1}),
        QPoly::from_int({1, 0, 0, 0, 1}),
        QPoly::from_int({-1, -1, 0, 0, 0, 1}),
    };
    for (const auto& fpoly : corpus) {
        NumberField K(fpoly);
        for (uint64_t ell = 2; ell < 100; ++ell) {
            if (!is_prime_u64(ell)) continue;
            try {
                auto Ps = factor_rational_prime(K, Z(ell));
                int sum = 0;
                for (auto& P : Ps) sum += P.e * P.f;
                CHECK(sum == K.degree);
            } catch (const error& e) {
                CHECK(e.code == "IndexDivisor");
            }
        }
    }
}
