#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hurryup/types.hpp"

namespace hurryup {

struct ConfigIssue {
  int line = 0;  // 1-based; 0 when not tied to a line
  std::string message;
};

struct LoadedConfig {
  SimConfig config;
  std::vector<ConfigIssue> issues;  // parse-level problems; empty = clean parse
};

// Flat `key = value` text, one per line, `#` starts a comment. Keys are the
// SimConfig field names; unknown keys and unparsable values are reported as
// issues and the field keeps its previous value.
LoadedConfig parse_config_text(std::string_view text, SimConfig base = {});

// Throws Error when the file cannot be opened.
LoadedConfig load_config_file(const std::string& path, SimConfig base = {});

// The full key list, for --help and docs.
const std::vector<std::string>& config_keys();

std::string config_to_text(const SimConfig& cfg);

}  // namespace hurryup
