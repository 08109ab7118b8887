#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace arqsec::harness {

struct ValidationConfig {
    std::uint64_t seed = 1;
    std::uint64_t trials = 200000;  // Monte-Carlo trials per point
    unsigned workers = 1;
    /// "" or "bounded_sum_limit" (shifts the bounded-Eve sum limit by one).
    std::string mutation;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool passed() const;
    std::vector<std::string> failures() const;
    nlohmann::json to_json() const;
};

/// Oracle agreement (closed form vs enumeration vs Monte-Carlo) and the
/// protocol property suites. Throws std::invalid_argument for trials == 0
/// or an unknown mutation.
ValidationReport validate(const ValidationConfig& cfg);

}  // namespace arqsec::harness
