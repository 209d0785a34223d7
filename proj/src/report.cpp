#include "wt1/report.hpp"

#include "wt1/version.hpp"

#include "json.hpp"

#include <array>
#include <climits>
#include <cstring>

namespace wt1 {

// ---- SHA-256 (FIPS 180-4), standalone ---------------------------------------

namespace {

struct Sha256 {
    uint32_t h[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                     0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    uint64_t length = 0;
    std::array<uint8_t, 64> buf{};
    size_t fill = 0;

    static uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void block(const uint8_t* p) {
        static const uint32_t K[64] = {
            0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
            0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
            0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
            0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
            0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
            0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
            0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
            0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
            0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
            0xc67178f2};
        uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = (uint32_t(p[4 * i]) << 24) | (uint32_t(p[4 * i + 1]) << 16) |
                   (uint32_t(p[4 * i + 2]) << 8) | uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4], f = h[5], g = h[6], hh = h[7];
        for (int i = 0; i < 64; ++i) {
            uint32_t S1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            uint32_t ch = (e & f) ^ (~e & g);
            uint32_t t1 = hh + S1 + ch + K[i] + w[i];
            uint32_t S0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            uint32_t mj = (a & b) ^ (a & c) ^ (b & c);
            uint32_t t2 = S0 + mj;
            hh = g; g = f; f = e; e = d + t1;
            d = c; c = b; b = a; a = t1 + t2;
        }
        h[0] += a; h[1] += b; h[2] += c; h[3] += d;
        h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
    }

    void update(const uint8_t* p, size_t n) {
        length += n;
        while (n) {
            size_t take = std::min(n, buf.size() - fill);
            std::memcpy(buf.data() + fill, p, take);
            fill += take;
            p += take;
            n -= take;
            if (fill == 64) {
                block(buf.data());
                fill = 0;
            }
        }
    }

    std::string hex() {
        uint64_t bits = length * 8;
        uint8_t pad = 0x80;
        update(&pad, 1);
        uint8_t zero = 0;
        while (fill != 56) update(&zero, 1);
        uint8_t lenb[8];
        for (int i = 0; i < 8; ++i) lenb[i] = static_cast<uint8_t>(bits >> (56 - 8 * i));
        update(lenb, 8);
        static const char* digits = "0123456789abcdef";
        std::string out;
        for (uint32_t v : h)
            for (int i = 28; i >= 0; i -= 4) out.push_back(digits[(v >> i) & 0xf]);
        return out;
    }
};

}  // namespace

std::string sha256_hex(const std::string& data) {
    Sha256 s;
    s.update(reinterpret_cast<const uint8_t*>(data.data()), data.size());
    return s.hex();
}

// ---- JSON rendering ---------------------------------------------------------

namespace {

using ojson = nlohmann::ordered_json;

ojson serialize_padic(const PadicNumber& x, int cap_N) {
    ojson j;
    if (x.kind == PadicNumber::ExactZero) {
        j["exact_zero"] = true;
        return j;
    }
    if (x.kind == PadicNumber::ApproxZero) {
        j["zero_to_precision"] = x.prec;
        return j;
    }
    j["p"] = x.ctx->p;
    j["f"] = x.ctx->inertia_f;
    j["valuation"] = x.valuation;
    j["unit_digits"] = padic_unit_digits(x);
    j["precision"] = std::min(x.prec, cap_N);
    return j;
}

std::string tri_str(GeometryVerdict::Tri t) {
    switch (t) {
        case GeometryVerdict::Tri::True: return "true";
        case GeometryVerdict::Tri::False: return "false";
        case GeometryVerdict::Tri::Inconclusive: return "inconclusive";
        default: return "inapplicable";
    }
}

}  // namespace

std::string render_report(const RunConfig& cfg, const std::string& raw_config, const Tower& T,
                          const VerdictOutcome* verdicts, const BatchResult* coefficients) {
    ojson j;
    j["tool"] = "wt1";
    j["version"] = kVersion;
    j["config_sha256"] = sha256_hex(raw_config);
    j["p"] = T.p.str();
    j["precision"] = T.N;
    j["fields"] = {{"F", poly_to_string(T.F.f)}, {"M", poly_to_string(T.M.f)}, {"H", poly_to_string(T.H.f)}};
    j["sigma"] = poly_to_string(T.D.elem[T.D.S.sigma]);
    if (T.D.S.conj >= 0) j["complex_conj"] = poly_to_string(T.D.elem[T.D.S.conj]);
    j["character"] = {{"order", T.psi.m.str()},
                      {"psi_heart_overridden", T.heart_overridden},
                      {"conductor_tag", cfg.conductor_tag},
                      {"nebentypus_tag", cfg.nebentypus_tag}};
    j["conventions"] = {
        {"log_branch", "Iwasawa: log_p(p) = 0 and roots of unity are killed"},
        {"eigenvector", "right translation: Psi'(h0(u)) = psi_heart(h0)^{-1} Psi'(u)"},
        {"hecke_relation", "T_q f-dagger = a_q(f) f-dagger + a_q(f-dagger) f (interpretation of the output)"},
    };

    if (verdicts) {
        const GeometryVerdict& v = verdicts->verdict;
        ojson pv;
        pv["n"] = verdicts->profile.n;
        pv["r"] = verdicts->profile.r;
        ojson primes = ojson::array();
        for (const auto& ps : verdicts->profile.primes) {
            primes.push_back({{"e", ps.e},
                              {"f", ps.f},
                              {"splits_in_M", ps.splits_in_M},
                              {"stabilization", ps.stab == StabClass::None ? "none"
                                                : ps.stab == StabClass::I ? "I"
                                                                          : "I'"}});
        }
        pv["primes_above_p"] = primes;
        ojson vv;
        vv["profile"] = pv;
        vv["fiber_tangent_dim"] = v.fiber_tangent_dim;
        vv["ord_tangent_dim"] = v.ord_tangent_dim;
        vv["total_tangent_dim"] = v.total_tangent_dim;
        vv["smooth"] = v.smooth;
        vv["etale"] = tri_str(v.etale);
        vv["ramified"] = tri_str(v.ramified);
        vv["margin"] = v.margin;
        vv["t0_lower_bound"] = v.t0_lower_bound;
        ojson contrib = ojson::array();
        for (const auto& [k, d] : v.local_contributions) contrib.push_back({{"prime", k}, {"dim", d}});
        vv["local_contributions"] = contrib;
        j["verdicts"] = vv;
    }

    if (coefficients) {
        ojson arr = ojson::array();
        for (const auto& row : coefficients->rows) {
            ojson r;
            r["ell"] = row.ell.str();
            r["f_prime_index"] = row.f_prime_index;
            r["classification"] = row.classification;
            if (!row.detail.empty()) r["detail"] = row.detail;
            if (row.failed) r["error"] = row.fail_code;
            r["value"] = serialize_padic(row.value, T.N);
            if (!row.per_lambda.empty()) {
                ojson pl = ojson::array();
                for (const auto& lv : row.per_lambda) {
                    ojson e;
                    e["lambda"] = lv.lambda_gen;
                    e["frobenius"] = poly_to_string(T.D.elem[lv.frobenius]);
                    e["transporter"] = poly_to_string(T.D.elem[lv.transporter]);
                    e["eta_psi_exponent"] = lv.eta_psi_exp.str();
                    e["eta_heart_exponent"] = lv.eta_heart_exp.str();
                    e["alpha"] = poly_to_string(nf_to_poly(lv.alpha), "t");
                    e["h"] = lv.h;
                    e["value"] = serialize_padic(lv.value, T.N);
                    pl.push_back(e);
                }
                r["per_lambda"] = pl;
                r["invariance_delta_prec"] =
                    row.invariance_delta_prec == INT_MAX ? T.N : row.invariance_delta_prec;
                r["precision"] = row.precision == INT_MAX ? T.N : row.precision;
            }
            arr.push_back(r);
        }
        ojson weights = ojson::array();
        for (const auto& w : T.weights) weights.push_back(serialize_padic(w, T.N));
        j["alpha_weights"] = weights;
        j["coefficients"] = arr;
    }

    ojson diag_prec;
    diag_prec["working_precision"] = T.N;
    if (coefficients) {
        int worst = INT_MAX;
        for (const auto& row : coefficients->rows)
            if (row.classification == "inert") worst = std::min(worst, row.precision);
        diag_prec["min_reported_coefficient_precision"] = worst == INT_MAX ? T.N : worst;
        diag_prec["note"] = "losses come from the log series denominators, floor(log_p K) digits";
    }

    ojson as = ojson::array();
    {
        // each assumption exactly once, first status wins
        std::vector<std::string> seen;
        for (const auto& a : T.assumptions) {
            bool dup = false;
            for (const auto& s : seen)
                if (s == a.name) dup = true;
            if (dup) continue;
            seen.push_back(a.name);
            as.push_back({{"assumption", a.name}, {"status", a.status}});
        }
        if (verdicts) {
            for (const auto& a : verdicts->verdict.assumptions) {
                bool dup = false;
                for (const auto& s : seen)
                    if (s == a.name) dup = true;
                if (dup) continue;
                seen.push_back(a.name);
                as.push_back({{"assumption", a.name}, {"status", a.status}});
            }
        }
    }
    j["diagnostics"] = {{"assumptions", as}, {"precision", diag_prec}};

    return j.dump(2) + "\n";
}

}  // namespace wt1
