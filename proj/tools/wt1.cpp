#include "wt1/report.hpp"
#include "wt1/version.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

namespace {

int classify_exit(const wt1::error& e) {
    // 2: configuration/schema problems; 3: arithmetic precondition failures
    static const char* config_codes[] = {"ConfigError",       "NotMonicIntegral", "ReduciblePolynomial",
                                         "DegreeTooSmall",    "BadEmbedding",     "BadGroup",
                                         "BadCharacter",      "BadAutomorphism",  "SingularPolynomial",
                                         "CoordLength"};
    for (const char* c : config_codes)
        if (e.code == c) return 2;
    return 3;
}

struct Options {
    std::string config_path;
    std::string out_path;
    std::string timings_path;
    long long ell_min = -1, ell_max = -1;
    int precision = 0;
    int threads = 0;
};

int run(const std::string& mode, const Options& opt) {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();

    std::ifstream in(opt.config_path, std::ios::binary);
    if (!in) {
        std::cerr << "wt1: config error at $: cannot open " << opt.config_path << "\n";
        return 2;
    }
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    wt1::RunConfig cfg = wt1::parse_config_text(raw);
    if (opt.ell_min >= 0) cfg.ell_min = opt.ell_min;
    if (opt.ell_max >= 0) cfg.ell_max = opt.ell_max;
    if (opt.precision > 0) cfg.precision = opt.precision;

    bool want_verdicts = mode == "verdicts" || mode == "all";
    bool want_coeffs = mode == "coefficients" || mode == "all";
    if (mode == "all" && cfg.mode != "all") {
        want_verdicts = cfg.mode == "verdicts" || cfg.mode == "all";
        want_coeffs = cfg.mode == "coefficients" || cfg.mode == "all";
    }

    wt1::Tower T = wt1::build_tower(cfg, want_coeffs);
    auto t1 = clock::now();

    std::optional<wt1::VerdictOutcome> verdicts;
    if (want_verdicts) verdicts = wt1::run_verdicts(T, cfg);
    std::optional<wt1::BatchResult> coeffs;
    if (want_coeffs) coeffs = wt1::run_coefficients(T, cfg, opt.threads);
    auto t2 = clock::now();

    std::string body = wt1::render_report(cfg, raw, T, verdicts ? &*verdicts : nullptr,
                                          coeffs ? &*coeffs : nullptr);
    if (opt.out_path.empty() || opt.out_path == "-") {
        std::cout << body;
    } else {
        std::ofstream out(opt.out_path, std::ios::binary | std::ios::trunc);
        if (!out) {
            std::cerr << "wt1: cannot write " << opt.out_path << "\n";
            return 3;
        }
        out << body;
    }
    // timings never enter the report body (byte-determinism); trailer file on request
    auto ms = [](auto d) { return std::chrono::duration_cast<std::chrono::milliseconds>(d).count(); };
    if (!opt.timings_path.empty()) {
        std::ofstream tr(opt.timings_path, std::ios::trunc);
        tr << "setup_ms " << ms(t1 - t0) << "\ncompute_ms " << ms(t2 - t1) << "\n";
    }
    std::cerr << "wt1: setup " << ms(t1 - t0) << " ms, compute " << ms(t2 - t1) << " ms\n";

    if (coeffs && coeffs->partial_failure) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weight-one dihedral points: eigenvariety geometry verdicts and "
                 "generalized eigenform coefficients"};
    app.set_version_flag("--version", std::string("wt1 ") + wt1::kVersion);
    app.require_subcommand(1);

    Options opt;
    std::string mode;
    for (const char* name : {"verdicts", "coefficients", "all"}) {
        CLI::App* sub = app.add_subcommand(
            name, name == std::string("verdicts")
                      ? "local geometry verdicts at the weight-one point"
                      : name == std::string("coefficients")
                            ? "a_ell(f-dagger) coefficient batch"
                            : "verdicts and coefficients");
        sub->add_option("--config", opt.config_path, "run configuration (JSON)")->required();
        sub->add_option("--out", opt.out_path, "report path (default: stdout)");
        sub->add_option("--timings", opt.timings_path, "write timings to a separate trailer file");
        sub->add_option("--ell-min", opt.ell_min, "lower end of the ell range");
        sub->add_option("--ell-max", opt.ell_max, "upper end of the ell range");
        sub->add_option("--precision", opt.precision, "p-adic working precision N");
        sub->add_option("--threads", opt.threads, "worker threads for the ell batch");
        sub->callback([&mode, name] { mode = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        return run(mode, opt);
    } catch (const wt1::error& e) {
        int code = classify_exit(e);
        std::cerr << (code == 2 ? "wt1: config error: " : "wt1: arithmetic precondition: ")
                  << e.what() << "\n";
        return code;
    } catch (const std::exception& e) {
        std::cerr << "wt1: error: " << e.what() << "\n";
        return 3;
    }
}
