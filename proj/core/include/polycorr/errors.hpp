#pragma once

#include <stdexcept>
#include <string>

namespace polycorr {

// Malformed or out-of-contract input data (bad JSON, invalid polygon, ...).
struct schema_error : std::runtime_error {
    explicit schema_error(const std::string& what) : std::runtime_error(what) {}
};

// A configured resource limit (order cap, truncation window, size bound) was hit.
struct cap_error : std::runtime_error {
    explicit cap_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace polycorr
