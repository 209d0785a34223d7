// Compares the serial reference lambda-unit search against the OpenMP one
// on a few inert primes of the zeta_8 setting.
#include "wt1/qexp.hpp"

#include <chrono>
#include <cstring>
#include <iostream>

using namespace wt1;

int main(int argc, char** argv) {
    bool smoke = argc > 1 && std::strcmp(argv[1], "--smoke") == 0;
    NumberField H(QPoly::from_int({1, 0, 0, 0, 1}));
    std::vector<long long> ells = smoke ? std::vector<long long>{3, 5}
                                        : std::vector<long long>{11, 19, 29, 37, 53, 61, 67, 83, 101, 131, 139, 149, 163, 173, 181, 197};
    UnitSearchParams prm;
    auto bench = [&](const char* name, auto&& fn) {
        auto t0 = std::chrono::steady_clock::now();
        for (long long ell : ells) {
            auto factors = factor_rational_prime(H, Z(ell));
            if (factors.size() != 2) continue;  // inert-in-M primes only
            fn(factors);
        }
        auto t1 = std::chrono::steady_clock::now();
        double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        std::cout << name << ": " << ms << " ms\n";
        return ms;
    };
    std::vector<NfElement> serial_alphas, parallel_alphas;
    bench("serial  ", [&](const std::vector<PrimeFactor>& f) {
        serial_alphas.push_back(find_lambda_unit_serial(H, f, 0, prm).alpha);
    });
    bench("parallel", [&](const std::vector<PrimeFactor>& f) {
        parallel_alphas.push_back(find_lambda_unit(H, f, 0, prm).alpha);
    });
    if (serial_alphas.size() != parallel_alphas.size()) {
        std::cerr << "result count mismatch\n";
        return 1;
    }
    for (size_t i = 0; i < serial_alphas.size(); ++i) {
        if (!(serial_alphas[i] == parallel_alphas[i])) {
            std::cerr << "serial and parallel searches disagree at index " << i << "\n";
            return 1;
        }
    }
    std::cout << "results identical (" << serial_alphas.size() << " primes)\n";
    return 0;
}
