#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "macexp/exponents.hpp"
#include "macexp/model.hpp"

namespace macexp {

/// A problem instance and the solver settings read from a JSON document.
/// The document layout is described in docs/config.md.
struct Config {
  Instance instance;
  SolverOptions solver;
};

/// Throws Error(ConfigParse) on malformed JSON or a missing/ill-typed field,
/// ValidationError when the numbers break an invariant, and Error with
/// ParameterOutOfRange for bad example-channel parameters.
Config parse_config(std::string_view text);
Config load_config(const std::filesystem::path& path);

/// Report as a JSON document. Infinite values are written as the strings
/// "inf" and "-inf".
std::string report_to_json(const ExponentReport& report, int indent = 2);

}  // namespace macexp
