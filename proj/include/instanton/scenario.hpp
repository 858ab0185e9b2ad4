#pragma once

#include <optional>
#include <string>
#include <vector>

#include "instanton/json_io.hpp"

namespace instanton {

// Command-line overrides; unset fields defer to the config file / built-in default.
struct RunOverrides {
  std::optional<uint64_t> seed;
  std::optional<int64_t> budget;
  std::optional<double> tol;
};

struct RunOutcome {
  int exit_code = 0;  // 0 pass, 2 tolerance failure; input errors throw instead
  io::json document;
};

// The registered pipelines, in help order.
const std::vector<std::string>& scenario_commands();

// Executes one named pipeline on a parsed config.  The result document echoes the
// effective inputs (after overrides and defaults) under "inputs" and carries a
// top-level "pass"; identical config + seed give byte-identical documents.  Wall
// time is deliberately not part of the document.  Unknown command or malformed
// config throws ConfigInvalid.
RunOutcome run_scenario(const std::string& command, const io::json& config,
                        const RunOverrides& ov = {});

// Tidy CSV from the document's "series" entry (object {name, columns, rows} or an
// array of such with identical columns, which gains a leading "series" column).
// No rows -> header only; no "series" at all -> ConfigInvalid.
std::string emit_plotdata(const io::json& doc);

}  // namespace instanton
