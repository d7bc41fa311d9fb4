#pragma once

#include <map>
#include <string>

#include "osclab/verify.hpp"

namespace osclab {

/// Flat `key = value` file; `#` starts a comment, blank lines are ignored.
using KeyValues = std::map<std::string, std::string>;

/// Throws std::runtime_error when the file cannot be read, ParseError on malformed lines.
KeyValues read_config(const std::string& path);
KeyValues parse_config(const std::string& text);

/// Applies the recognised keys to base; unknown keys raise InvalidArgument.
SweepConfig apply_config(const KeyValues& kv, SweepConfig base = {});

}  // namespace osclab
