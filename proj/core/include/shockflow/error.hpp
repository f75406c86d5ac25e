#pragma once

#include <stdexcept>
#include <string>

namespace shockflow {

// Malformed or inconsistent input data (files, records, series). Maps to CLI exit code 1.
class InputError : public std::runtime_error {
public:
    InputError(const std::string& module, const std::string& what)
        : std::runtime_error(module + ": " + what), module_(module) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

// Invalid configuration or parameters. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error("config: " + what) {}
};

} // namespace shockflow
