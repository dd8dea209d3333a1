#pragma once

#include <stdexcept>
#include <string>

namespace powmix {

// Invalid parameter values (violates a documented precondition).
struct domain_error : std::invalid_argument {
    explicit domain_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Evaluation outside a covered range (grid-backed transforms).
struct range_error : std::out_of_range {
    explicit range_error(const std::string& msg) : std::out_of_range(msg) {}
};

// Problem-level validation failure (conditions, grid misconfiguration).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested operation not supported for this object (e.g. non-sampleable law).
struct capability_error : std::runtime_error {
    explicit capability_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace powmix
