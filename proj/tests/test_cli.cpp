#include "doctest.h"

#include "wt1/config.hpp"
#include "wt1/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace wt1;

namespace {

std::string fixture_path() { return std::string(WT1_SOURCE_DIR) + "/tests/fixtures/zeta8.json"; }

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << s;
}

int run_cli(const std::string& args, const std::string& stderr_to = "/dev/null") {
    std::string cmd = std::string(WT1_CLI_PATH) + " " + args + " 2>" + stderr_to;
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("config parser reports field paths") {
    // missing fields.M
    std::string text = slurp(fixture_path());
    auto pos = text.find("\"M\":");
    REQUIRE(pos != std::string::npos);
    std::string broken = text.substr(0, pos) + "\"M_gone\":" + text.substr(pos + 4);
    try {
        parse_config_text(broken);
        FAIL("unreachable");
    } catch (const error& e) {
        CHECK(e.code == "ConfigError");
        CHECK(std::string(e.what()).find("fields.M") != std::string::npos);
    }
}

TEST_CASE("cli exit codes") {
    std::string tmp = "cli_tmp_config.json";
    std::string out = "cli_tmp_report.json";

    SUBCASE("valid config exits 0 and writes the report") {
        CHECK(run_cli("verdicts --config " + fixture_path() + " --out " + out) == 0);
        std::string body = slurp(out);
        CHECK(body.find("\"verdicts\"") != std::string::npos);
        std::remove(out.c_str());
    }

    SUBCASE("missing field exits 2 naming the path") {
        std::string text = slurp(fixture_path());
        auto pos = text.find("\"M\":");
        spit(tmp, text.substr(0, pos) + "\"M_gone\":" + text.substr(pos + 4));
        std::string errfile = "cli_tmp_err.txt";
        CHECK(run_cli("verdicts --config " + tmp + " --out " + out, errfile) == 2);
        CHECK(slurp(errfile).find("fields.M") != std::string::npos);
        std::remove(tmp.c_str());
        std::remove(errfile.c_str());
    }

    SUBCASE("non-monic polynomial exits 2 with a named violation") {
        std::string text = slurp(fixture_path());
        // fields.H.poly: make the leading coefficient 2
        auto pos = text.find("[\"1\", \"0\", \"0\", \"0\", \"1\"]");
        REQUIRE(pos != std::string::npos);
        spit(tmp, text.substr(0, pos) + "[\"1\", \"0\", \"0\", \"0\", \"2\"]" +
                      text.substr(pos + std::string("[\"1\", \"0\", \"0\", \"0\", \"1\"]").size()));
        std::string errfile = "cli_tmp_err2.txt";
        CHECK(run_cli("verdicts --config " + tmp + " --out " + out, errfile) == 2);
        CHECK(slurp(errfile).find("monic") != std::string::npos);
        std::remove(tmp.c_str());
        std::remove(errfile.c_str());
    }

    SUBCASE("per-ell failure yields partial success exit 1") {
        // height cap 1 cannot reach any generator of norm 19^2 = 361 in Z[zeta_8]
        std::string text = slurp(fixture_path());
        std::string needle = "{ \"h_max\": 6, \"height_cap\": 0 }";
        auto pos = text.find(needle);
        REQUIRE(pos != std::string::npos);
        spit(tmp, text.substr(0, pos) + "{ \"h_max\": 1, \"height_cap\": 1 }" +
                      text.substr(pos + needle.size()));
        CHECK(run_cli("coefficients --config " + tmp + " --ell-min 17 --ell-max 19 --out " + out) == 1);
        std::string body = slurp(out);
        CHECK(body.find("BoundExceeded") != std::string::npos);
        // the split prime 17 is still computed: partial failure does not abort the batch
        CHECK(body.find("\"classification\": \"split\"") != std::string::npos);
        std::remove(tmp.c_str());
        std::remove(out.c_str());
    }
}

TEST_CASE("precision flag propagates into the report") {
    std::string out = "cli_tmp_prec.json";
    REQUIRE(run_cli("coefficients --config " + fixture_path() +
                    " --ell-min 3 --ell-max 3 --precision 20 --out " + out) == 0);
    std::string body = slurp(out);
    CHECK(body.find("\"precision\": 20") != std::string::npos);
    std::remove(out.c_str());
}

TEST_CASE("criterion flag blocks parse and reach the verdict") {
    std::string text = slurp(fixture_path());
    std::string needle = "\"stabilization\": [\"I\"]";
    auto pos = text.find(needle);
    REQUIRE(pos != std::string::npos);
    std::string extra = needle +
        ",\n    \"etale_case\": { \"p_split_in_K\": true, \"xi_heart_even_order\": true, "
        "\"psi_heart_square_nontrivial\": true, \"regular_at_all_places\": true },\n"
        "    \"ramification_case\": { \"conductor_split_condition\": true, "
        "\"absolutely_irreducible_restriction\": true, \"p_distinguished\": true, "
        "\"heart_not_quadratic\": true, \"p_unramified_in_M\": true }";
    std::string tmp = "cli_tmp_flags.json";
    spit(tmp, text.substr(0, pos) + extra + text.substr(pos + needle.size()));
    std::string out = "cli_tmp_flags_report.json";
    REQUIRE(run_cli("verdicts --config " + tmp + " --out " + out) == 0);
    std::string body = slurp(out);
    // n = 1, r = 0, S^p empty: margin 1, so the ramification criterion fires
    CHECK(body.find("\"margin\": 1") != std::string::npos);
    CHECK(body.find("\"ramified\": \"true\"") != std::string::npos);
    CHECK(body.find("p-distinguished") != std::string::npos);
    std::remove(tmp.c_str());
    std::remove(out.c_str());
}

TEST_CASE("arithmetic precondition failures exit 3") {
    // p = 2 ramifies in M = Q(sqrt2): the coefficient pipeline must refuse
    std::string text = slurp(fixture_path());
    auto pos = text.find("\"p\": \"7\"");
    REQUIRE(pos != std::string::npos);
    std::string tmp = "cli_tmp_p2.json";
    spit(tmp, text.substr(0, pos) + "\"p\": \"2\"" + text.substr(pos + std::string("\"p\": \"7\"").size()));
    std::string errfile = "cli_tmp_err3.txt";
    CHECK(run_cli("coefficients --config " + tmp + " --out /dev/null", errfile) == 3);
    CHECK(slurp(errfile).find("RamifiedPrime") != std::string::npos);
    // verdicts alone accept a ramified p: e_i > 1 is pure combinatorial input there
    CHECK(run_cli("verdicts --config " + tmp + " --out /dev/null") == 0);
    std::remove(tmp.c_str());
    std::remove(errfile.c_str());
}

TEST_CASE("empty S_p is a named hypothesis failure for coefficients only") {
    // p = 3 is inert in Q(sqrt2): S_p empty; verdicts still apply, coefficients do not
    std::string text = slurp(fixture_path());
    auto pos = text.find("\"p\": \"7\"");
    REQUIRE(pos != std::string::npos);
    std::string tmp = "cli_tmp_p3.json";
    spit(tmp, text.substr(0, pos) + "\"p\": \"3\"" + text.substr(pos + std::string("\"p\": \"7\"").size()));
    std::string errfile = "cli_tmp_err4.txt";
    CHECK(run_cli("coefficients --config " + tmp + " --out /dev/null", errfile) == 3);
    CHECK(slurp(errfile).find("S_p is empty") != std::string::npos);
    std::string out = "cli_tmp_v3.json";
    CHECK(run_cli("verdicts --config " + tmp + " --out " + out) == 0);
    std::string body = slurp(out);
    CHECK(body.find("\"fiber_tangent_dim\": 0") != std::string::npos);
    CHECK(body.find("\"ord_tangent_dim\": 1") != std::string::npos);
    CHECK(body.find("\"etale\": \"true\"") != std::string::npos);
    std::remove(tmp.c_str());
    std::remove(errfile.c_str());
    std::remove(out.c_str());
}

TEST_CASE("assumption ledger lists every assumption exactly once") {
    std::string out = "cli_tmp_ledger.json";
    REQUIRE(run_cli("all --config " + fixture_path() + " --ell-max 5 --out " + out) == 0);
    std::string body = slurp(out);
    auto count = [&](const std::string& needle) {
        size_t n = 0, pos = 0;
        while ((pos = body.find(needle, pos)) != std::string::npos) {
            ++n;
            pos += needle.size();
        }
        return n;
    };
    CHECK(count("Leopoldt conjecture for M") == 1);
    CHECK(count("p-regularity") == 1);
    CHECK(count("M totally real") == 1);
    CHECK(count("\"status\": \"failed\"") == 0);
    CHECK(count("\"status\": \"computed\"") >= 1);
    CHECK(count("\"status\": \"asserted\"") >= 2);
    std::remove(out.c_str());
}

TEST_CASE("octic fixture runs deterministically through the cli") {
    std::string f = std::string(WT1_SOURCE_DIR) + "/tests/fixtures/zeta24.json";
    CHECK(run_cli("all --config " + f + " --threads 1 --out cli_tmp_o1.json") == 0);
    CHECK(run_cli("all --config " + f + " --threads 8 --out cli_tmp_o2.json") == 0);
    std::string a = slurp("cli_tmp_o1.json");
    CHECK(a == slurp("cli_tmp_o2.json"));
    CHECK(a.find("\"n\": 2") != std::string::npos);
    std::remove("cli_tmp_o1.json");
    std::remove("cli_tmp_o2.json");
}

TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
