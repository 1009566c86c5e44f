#pragma once

#include <stdexcept>
#include <string>

namespace leafspace {

/// Structured error conditions surfaced by the numeric modules. The CLI maps
/// these to report entries instead of crashing; tests assert on the code.
enum class ErrorCode {
    point_outside_domain,
    step_too_large,
    nonfinite_field,
    junction_parameter,
    not_liftable_at_probe,
    ball_exits_domain,
    stencil_exits_domain,
    uncertified_family,
    orbit_escapes_domain,
    oracle_missing,
    unknown_scenario,
    invalid_parameter,
    invalid_config,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace leafspace
