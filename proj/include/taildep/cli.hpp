// Command implementations behind the taildep executable: config parsing and
// validation (unknown keys rejected, defaults materialized), CSV I/O with
// shortest round-trip doubles, and the five commands. JSON reports embed the
// fully resolved config so every run can be reproduced from its own output.

#ifndef TAILDEP_CLI_HPP
#define TAILDEP_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "taildep/errors.hpp"
#include "taildep/model_core.hpp"
#include "taildep/report.hpp"
#include "taildep/sampling.hpp"

namespace taildep::cli {

using Json = nlohmann::ordered_json;

// Config or input problems exit with code 2; numeric failures with 3.
class ConfigError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> kn;
};

// Parses "model" from a config (family, params, correlation).
EllipticalModel model_from_config(const Json& model_cfg);

// Validates a command's config against its key schema and materializes
// defaults; throws ConfigError on unknown or ill-typed keys.
Json resolve_config(const std::string& command, Json cfg, const Overrides& ov);

// CSV with header x1..xk; shortest round-trip doubles.
void write_csv(const SampleMatrix& data, const std::string& path);
SampleMatrix read_csv(const std::string& path);

Json report_to_json(const TailReport& report);
TailReport report_from_json(const Json& j);

// Structural check of a report object against the published schema shape.
void validate_report_json(const Json& j);

// Commands; each returns the process exit code and writes results to `out`
// (and to files named in the config). Diagnostics go to `err`.
int cmd_simulate(const Json& cfg, std::ostream& out, std::ostream& err);
int cmd_estimate(const Json& cfg, std::ostream& out, std::ostream& err);
int cmd_alpha(const Json& cfg, std::ostream& out, std::ostream& err);
int cmd_oracle(const Json& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const Json& cfg, std::ostream& out, std::ostream& err);

// Shared entry point used by main(); maps exceptions to exit codes.
int run_command(const std::string& command, const std::string& config_path,
                const Overrides& ov, std::ostream& out, std::ostream& err);

}  // namespace taildep::cli

#endif  // TAILDEP_CLI_HPP
