#ifndef MEMFV_CONFIG_HPP
#define MEMFV_CONFIG_HPP

#include <string>

#include "memfv/parabolic.hpp"

namespace memfv {

// Parses and validates a JSON run configuration. All SimConfig invariants are
// enforced here; errors name the offending key (or carry the parser's
// line/byte position for syntax errors).
SimConfig parse_config(const std::string& path);
SimConfig parse_config_text(const std::string& text,
                            const std::string& origin = "<inline>");

// The fully-resolved configuration with defaults applied, as stable JSON.
std::string echo_config(const SimConfig& config);

}  // namespace memfv

#endif
