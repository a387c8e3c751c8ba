#pragma once

#include <string>
#include <string_view>

#include "maestro/plant_sim.hpp"
#include "maestro/service_model.hpp"

namespace maestro {

// Line-oriented sectioned text format ("[service <id>]" headers followed by
// "key = value" pairs, '#' starts a comment). See the README for the full
// grammar. Throws ParseError with the offending line on any violation.
Catalog parse_catalog(std::string_view text);

// Canonical serialization; parse(serialize(c)) == c for every valid catalog.
std::string serialize_catalog(const Catalog& catalog);

// Scenario scripts: a [scenario] prologue (duration, timestep, seed, optional
// weights, reference profile), optional [plant] overrides, [service ...]
// definitions referenced by events, and [event] sections with strictly
// increasing times.
SimScenario parse_scenario(std::string_view text);

std::string read_file(const std::string& path);        // IoError on failure
void write_file(const std::string& path, std::string_view content);

}  // namespace maestro
