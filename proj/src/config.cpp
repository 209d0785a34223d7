#include "wt1/config.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace wt1 {

using nlohmann::json;

namespace {

[[noreturn]] void cfg_fail(const std::string& path, const std::string& msg) {
    fail("ConfigError", path + ": " + msg);
}

const json& get_member(const json& j, const std::string& path, const std::string& key) {
    if (!j.is_object()) cfg_fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) cfg_fail(path + "." + key, "missing required field");
    return *it;
}

const json* get_optional(const json& j, const std::string& key) {
    if (!j.is_object()) return nullptr;
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

Q parse_q(const json& j, const std::string& path) {
    if (j.is_number_integer()) return Q(static_cast<long long>(j.get<int64_t>()));
    if (!j.is_string()) cfg_fail(path, "expected an exact number encoded as a string");
    std::string s = j.get<std::string>();
    try {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Q(Z(s));
        Z num(s.substr(0, slash));
        Z den(s.substr(slash + 1));
        if (den == 0) cfg_fail(path, "zero denominator");
        return Q(num) / Q(den);
    } catch (const std::exception&) {
        cfg_fail(path, "cannot parse exact number from '" + s + "'");
    }
}

Z parse_z(const json& j, const std::string& path) {
    Q q = parse_q(j, path);
    if (q_den(q) != 1) cfg_fail(path, "expected an integer");
    return q_num(q);
}

std::vector<Q> parse_qvec(const json& j, const std::string& path) {
    if (!j.is_array()) cfg_fail(path, "expected an array of exact numbers");
    std::vector<Q> out;
    for (size_t i = 0; i < j.size(); ++i) out.push_back(parse_q(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

QPoly parse_poly(const json& j, const std::string& path) {
    QPoly f(parse_qvec(j, path));
    if (f.degree() < 1) cfg_fail(path, "polynomial must have degree >= 1");
    if (!poly_is_monic(f)) cfg_fail(path, "polynomial must be monic");
    if (!poly_is_integral(f)) cfg_fail(path, "polynomial must have integer coefficients");
    return f;
}

bool parse_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) cfg_fail(path, "expected a boolean");
    return j.get<bool>();
}

}  // namespace

RunConfig parse_config_text(const std::string& text, std::string* raw_out) {
    if (raw_out) *raw_out = text;
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        cfg_fail("$", std::string("invalid JSON: ") + e.what());
    }
    RunConfig cfg;

    const json& fields = get_member(j, "$", "fields");
    const json& F = get_member(fields, "fields", "F");
    const json& M = get_member(fields, "fields", "M");
    const json& H = get_member(fields, "fields", "H");
    cfg.F_poly = parse_poly(get_member(F, "fields.F", "poly"), "fields.F.poly");
    cfg.M_poly = parse_poly(get_member(M, "fields.M", "poly"), "fields.M.poly");
    cfg.H_poly = parse_poly(get_member(H, "fields.H", "poly"), "fields.H.poly");
    cfg.M_gen_in_H = parse_qvec(get_member(M, "fields.M", "gen_in_H"), "fields.M.gen_in_H");
    cfg.F_gen_in_M = parse_qvec(get_member(F, "fields.F", "gen_in_M"), "fields.F.gen_in_M");

    const json& gal = get_member(j, "$", "galois");
    const json& gens = get_member(gal, "galois", "generators");
    if (!gens.is_array() || gens.empty()) cfg_fail("galois.generators", "expected a non-empty array");
    for (size_t i = 0; i < gens.size(); ++i)
        cfg.galois_generators.push_back(parse_qvec(gens[i], "galois.generators[" + std::to_string(i) + "]"));
    cfg.sigma_map = parse_qvec(get_member(gal, "galois", "sigma"), "galois.sigma");
    if (const json* c = get_optional(gal, "complex_conj"))
        cfg.conj_map = parse_qvec(*c, "galois.complex_conj");

    const json& ch = get_member(j, "$", "character");
    cfg.char_order = parse_z(get_member(ch, "character", "order"), "character.order");
    if (cfg.char_order < 1) cfg_fail("character.order", "order must be positive");
    cfg.char_generator = parse_qvec(get_member(ch, "character", "generator"), "character.generator");
    cfg.psi_exponent = parse_z(get_member(ch, "character", "psi_exponent"), "character.psi_exponent");
    if (const json* e = get_optional(ch, "psi_heart_exponent"))
        cfg.psi_heart_exponent = parse_z(*e, "character.psi_heart_exponent");
    if (const json* t = get_optional(ch, "conductor_tag")) cfg.conductor_tag = t->get<std::string>();
    if (const json* t = get_optional(ch, "nebentypus_tag")) cfg.nebentypus_tag = t->get<std::string>();

    const json& ar = get_member(j, "$", "arithmetic");
    cfg.p = parse_z(get_member(ar, "arithmetic", "p"), "arithmetic.p");
    if (cfg.p < 2 || !is_prime_u64(static_cast<uint64_t>(cfg.p)))
        cfg_fail("arithmetic.p", "p must be prime");
    if (const json* n = get_optional(ar, "precision")) {
        if (!n->is_number_integer()) cfg_fail("arithmetic.precision", "expected an integer");
        cfg.precision = n->get<int>();
    }
    if (cfg.precision < 10) cfg_fail("arithmetic.precision", "precision must be >= 10");
    if (const json* w = get_optional(ar, "alpha_weights"))
        cfg.alpha_weights = parse_qvec(*w, "arithmetic.alpha_weights");
    if (const json* t = get_optional(ar, "tame_level_primes")) {
        if (!t->is_array()) cfg_fail("arithmetic.tame_level_primes", "expected an array");
        for (size_t i = 0; i < t->size(); ++i)
            cfg.tame_primes.push_back(
                parse_z((*t)[i], "arithmetic.tame_level_primes[" + std::to_string(i) + "]"));
    }
    if (const json* s = get_optional(ar, "unit_search")) {
        if (const json* h = get_optional(*s, "h_max")) cfg.search_h_max = h->get<int>();
        if (const json* c = get_optional(*s, "height_cap")) cfg.search_height_cap = c->get<long long>();
    }

    const json& as = get_member(j, "$", "assertions");
    cfg.leopoldt_M = parse_bool(get_member(as, "assertions", "leopoldt_M"), "assertions.leopoldt_M");
    cfg.p_regular = parse_bool(get_member(as, "assertions", "p_regular"), "assertions.p_regular");
    if (const json* st = get_optional(as, "stabilization")) {
        if (!st->is_array()) cfg_fail("assertions.stabilization", "expected an array of \"I\" / \"I'\"");
        for (size_t i = 0; i < st->size(); ++i) {
            std::string v = (*st)[i].get<std::string>();
            if (v != "I" && v != "I'")
                cfg_fail("assertions.stabilization[" + std::to_string(i) + "]", "expected \"I\" or \"I'\"");
            cfg.stabilization.push_back(v);
        }
    }
    if (const json* t3 = get_optional(as, "etale_case")) {
        EtaleCaseFlags f;
        f.p_split_in_K = parse_bool(get_member(*t3, "assertions.etale_case", "p_split_in_K"),
                                    "assertions.etale_case.p_split_in_K");
        f.xi_heart_even_order = parse_bool(get_member(*t3, "assertions.etale_case", "xi_heart_even_order"),
                                           "assertions.etale_case.xi_heart_even_order");
        f.psi_heart_square_nontrivial =
            parse_bool(get_member(*t3, "assertions.etale_case", "psi_heart_square_nontrivial"),
                       "assertions.etale_case.psi_heart_square_nontrivial");
        f.regular_at_all_places =
            parse_bool(get_member(*t3, "assertions.etale_case", "regular_at_all_places"),
                       "assertions.etale_case.regular_at_all_places");
        cfg.etale_case = f;
    }
    if (const json* t4 = get_optional(as, "ramification_case")) {
        RamificationCaseFlags f;
        f.conductor_split_condition =
            parse_bool(get_member(*t4, "assertions.ramification_case", "conductor_split_condition"),
                       "assertions.ramification_case.conductor_split_condition");
        f.absolutely_irreducible_restriction =
            parse_bool(get_member(*t4, "assertions.ramification_case", "absolutely_irreducible_restriction"),
                       "assertions.ramification_case.absolutely_irreducible_restriction");
        f.p_distinguished = parse_bool(get_member(*t4, "assertions.ramification_case", "p_distinguished"),
                                       "assertions.ramification_case.p_distinguished");
        f.heart_not_quadratic = parse_bool(get_member(*t4, "assertions.ramification_case", "heart_not_quadratic"),
                                           "assertions.ramification_case.heart_not_quadratic");
        f.p_unramified_in_M = parse_bool(get_member(*t4, "assertions.ramification_case", "p_unramified_in_M"),
                                         "assertions.ramification_case.p_unramified_in_M");
        cfg.ramification_case = f;
    }

    const json& task = get_member(j, "$", "task");
    cfg.mode = get_member(task, "task", "mode").get<std::string>();
    if (cfg.mode != "verdicts" && cfg.mode != "coefficients" && cfg.mode != "all")
        cfg_fail("task.mode", "expected verdicts | coefficients | all");
    if (const json* e = get_optional(task, "ell_min")) cfg.ell_min = parse_z(*e, "task.ell_min");
    if (const json* e = get_optional(task, "ell_max")) cfg.ell_max = parse_z(*e, "task.ell_max");
    if (const json* e = get_optional(task, "ells")) {
        if (!e->is_array()) cfg_fail("task.ells", "expected an array");
        for (size_t i = 0; i < e->size(); ++i)
            cfg.ell_list.push_back(parse_z((*e)[i], "task.ells[" + std::to_string(i) + "]"));
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("ConfigError", "$: cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace wt1
