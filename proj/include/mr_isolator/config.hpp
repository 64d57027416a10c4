#pragma once

#include <filesystem>
#include <optional>

#include <json.hpp>

#include "mr_isolator/simulate.hpp"
#include "mr_isolator/tune.hpp"

namespace mr_isolator {

/// A parsed configuration file: sections plant, excitation, mode, pid,
/// integrator, run and an optional tune. Absent keys take their defaults;
/// unknown keys are rejected.
struct ConfigDocument {
  SimConfig sim;
  std::optional<TuneConfig> tune;
};

/// Throws ConfigError naming the offending key (dotted path).
ConfigDocument ParseConfig(const nlohmann::json& doc);

/// Reads and parses a JSON file. Throws ConfigError on I/O or syntax errors.
nlohmann::json ReadJsonFile(const std::filesystem::path& path);

/// Fully explicit document; ParseConfig(ToJson(c)) reproduces c.
nlohmann::json ToJson(const ConfigDocument& config);

}  // namespace mr_isolator
