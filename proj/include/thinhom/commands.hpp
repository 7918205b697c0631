#pragma once

#include "thinhom/config.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace thinhom {

struct CommandFlags {
  std::optional<std::string> out;     ///< overrides output.directory
  std::optional<std::string> format;  ///< "csv" or "gnuplot"; overrides output.formats
  int threads = 1;
};

/// Runs one of solve2d, solve1d, homogenize, cell, eigen, converge. Artifacts
/// go to the output directory; a short summary and the defaults that were
/// filled in are written to `log`. Returns the process exit status.
int dispatch(const std::string& command, const RunConfig& cfg, const CommandFlags& flags,
             std::ostream& log);

}  // namespace thinhom
