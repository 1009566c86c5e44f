#include "leafspace/error.hpp"

namespace leafspace {

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::point_outside_domain: return "point-outside-domain";
        case ErrorCode::step_too_large: return "step-too-large";
        case ErrorCode::nonfinite_field: return "nonfinite-field";
        case ErrorCode::junction_parameter: return "junction-parameter";
        case ErrorCode::not_liftable_at_probe: return "not-liftable-at-probe";
        case ErrorCode::ball_exits_domain: return "ball-exits-domain";
        case ErrorCode::stencil_exits_domain: return "stencil-exits-domain";
        case ErrorCode::uncertified_family: return "uncertified-family";
        case ErrorCode::orbit_escapes_domain: return "orbit-escapes-domain";
        case ErrorCode::oracle_missing: return "oracle-missing";
        case ErrorCode::unknown_scenario: return "unknown-scenario";
        case ErrorCode::invalid_parameter: return "invalid-parameter";
        case ErrorCode::invalid_config: return "invalid-config";
    }
    return "unknown-error";
}

}  // namespace leafspace
