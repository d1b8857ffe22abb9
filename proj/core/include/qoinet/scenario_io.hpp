#pragma once

#include <iosfwd>
#include <string>

#include "qoinet/lp.hpp"
#include "qoinet/model.hpp"

namespace qoinet {

// Parses the scenario config format (schema in the README) and validates the
// result. Parse failures throw ConfigError with "name:line: message";
// structural failures throw ValidationError naming the rule.
Scenario parse_scenario(std::istream& in, const std::string& name);
Scenario load_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text,
                             const std::string& name = "<string>");

// The canonical two-device example; the same scenario ships as
// scenarios/two-device.cfg.
const char* two_device_scenario_text();

}  // namespace qoinet
