#pragma once

#include <json.hpp>

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace metdich::app {

inline constexpr const char* kVersion = "metdich 1.0.0";

enum ExitCode : int { ok = 0, invalid_config = 2, budget_exhausted = 3, invariant_violation = 4 };

/// Raised for malformed or inconsistent configuration values.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a computed artifact fails its own re-validation.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Runs one experiment described by `config` and writes results.csv,
/// manifest.json and any plots into config["output_dir"] (default "out").
/// Errors are reported on `log`; the return value is an ExitCode.
int run(const nlohmann::json& config, std::ostream& log);

/// "kind" or "kind:key=value,key=value" to a space object, e.g.
/// "path:n=4" -> {"kind":"path","n":4}. "@file" gives {"file":"file"}.
nlohmann::json parse_space_spec(const std::string& text);

}  // namespace metdich::app
