#pragma once

#include "wt1/bigint.hpp"
#include "wt1/deformation.hpp"
#include "wt1/poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wt1 {

// Parsed run configuration. Parsing errors carry the JSON path of the
// offending field in error("ConfigError", "<path>: ...").
struct RunConfig {
    QPoly F_poly, M_poly, H_poly;
    std::vector<Q> M_gen_in_H;
    std::vector<Q> F_gen_in_M;

    std::vector<std::vector<Q>> galois_generators;  // images of theta_H
    std::vector<Q> sigma_map;
    std::optional<std::vector<Q>> conj_map;

    Z char_order = 1;
    std::vector<Q> char_generator;  // group element r0 as coords of r0(theta)
    Z psi_exponent = 0;
    std::optional<Z> psi_heart_exponent;
    std::string conductor_tag;   // opaque
    std::string nebentypus_tag;  // opaque

    Z p = 0;
    int precision = 30;
    std::vector<Q> alpha_weights;  // empty: default to all ones
    std::vector<Z> tame_primes;    // support of the tame level n
    int search_h_max = 6;
    long long search_height_cap = 0;

    bool leopoldt_M = false;
    bool p_regular = false;
    std::vector<std::string> stabilization;  // "I" / "I'" per split prime (or single default)
    std::optional<EtaleCaseFlags> etale_case;
    std::optional<RamificationCaseFlags> ramification_case;

    std::string mode = "all";  // verdicts | coefficients | all
    Z ell_min = 2, ell_max = 0;
    std::vector<Z> ell_list;  // explicit list overrides the range
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, std::string* raw_out = nullptr);

}  // namespace wt1
