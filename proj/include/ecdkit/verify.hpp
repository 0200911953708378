#pragma once

#include <cstdint>
#include <string>

namespace ecdkit {

struct VerifyOptions {
    std::string suite = "all";  // matcore|energy|enorm|channel|distance|truncate|all
    std::uint64_t seed = 7;
    int trials = 50;
};

struct VerifyResult {
    int passed = 0;
    int failed = 0;
    std::string summary;  // one PASS/FAIL line per check, fixed order
};

/// Runs the property suites. Deterministic for a fixed (suite, seed, trials).
VerifyResult run_verify(const VerifyOptions& opt);

}  // namespace ecdkit
