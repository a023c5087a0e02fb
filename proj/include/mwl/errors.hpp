#pragma once

#include <stdexcept>
#include <string>

namespace mwl {

// A function (or function difference) failed the nondegeneracy guard.
struct NotMorseError : std::runtime_error {
    explicit NotMorseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Transversality margin too small: the configuration cannot be counted
// reliably; caller should perturb the function sequence.
struct NonGenericError : std::runtime_error {
    explicit NonGenericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Outside the validated semiclassical regime (hbar too large, grid too
// coarse, or signal below the floating-point noise floor).
struct RegimeError : std::runtime_error {
    explicit RegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Small-subspace vectors could not be assigned one-per-critical-point.
struct LocalizationError : std::runtime_error {
    explicit LocalizationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Green operator construction hit a near-singular excluded eigenvalue.
struct ConditioningError : std::runtime_error {
    explicit ConditioningError(const std::string& msg) : std::runtime_error(msg) {}
};

// Operator assembly failed an internal consistency check.
struct AssemblyError : std::runtime_error {
    explicit AssemblyError(const std::string& msg) : std::runtime_error(msg) {}
};

// Decay-probe data has too few usable points above the noise floor.
struct InsufficientRangeError : std::runtime_error {
    explicit InsufficientRangeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Config schema violation; `key_path` names the offending key.
struct ConfigError : std::runtime_error {
    std::string key_path;
    ConfigError(const std::string& path, const std::string& msg)
        : std::runtime_error(msg + " (at key: " + path + ")"), key_path(path) {}
};

}  // namespace mwl
