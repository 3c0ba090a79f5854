#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pnchanest/harness.hpp"

namespace pnchanest::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a:b:c" (stop included when aligned), a comma list, or a single value.
std::vector<double> parse_snr_spec(const std::string& spec);

/// Preset experiment of fig2..fig5. Throws ConfigError for other ids.
SweepConfig figure_config(const std::string& id);

}  // namespace pnchanest::cli
