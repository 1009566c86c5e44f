#pragma once

#include <string>

#include <json.hpp>

#include "leafspace/catalog.hpp"

namespace leafspace {

/// Builds a scenario from a JSON description: either a catalog reference
/// {"example": "wedge", "n": 4, "group": "circle"} or an inline definition
/// with a domain (container + removed primitives), polynomial basis-field
/// tables, structure constants, and a group {k, lattice_generators}.
/// Throws invalid_config on malformed input.
Scenario scenario_from_json(const nlohmann::json& j);

/// Reads and parses a scenario file.
Scenario load_scenario(const std::string& path);

/// JSON echo of the catalog parameters or a note that the scenario was
/// inline; embedded in reports.
nlohmann::json scenario_summary(const Scenario& sc);

GroupKind parse_group_kind(const std::string& s);

}  // namespace leafspace
