#pragma once

#include <stdexcept>
#include <string>

namespace b1approx {

// Bad user input (files, words, presentation text). CLI maps this to exit 2.
struct malformed_input : std::runtime_error {
    explicit malformed_input(const std::string& what) : std::runtime_error(what) {}
};

// Precondition violated by the caller (wrong alphabet, non-p-power index, ...).
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// A configured budget (index, matrix size, search depth) was exceeded.
struct resource_limit : std::runtime_error {
    resource_limit(const std::string& what, long long required)
        : std::runtime_error(what), required_budget(required) {}
    long long required_budget;
};

// A theorem-guaranteed property failed to hold: implementation bug.
// CLI maps this to exit 3.
struct invariant_violation : std::logic_error {
    explicit invariant_violation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace b1approx
