#pragma once

#include <iosfwd>

#include "geotrack/verify.hpp"

namespace geotrack {

/// Exit codes shared by all subcommands: 0 ok, 1 hypothesis/threshold
/// failure, 2 config error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

/// `check`: run the algebraic hypotheses and print/serialize the verdicts.
int cmd_check(const RunConfig& cfg, std::ostream& out);

/// `reference`: synthesize the plan; write plan JSON and control CSV.
int cmd_reference(const RunConfig& cfg, std::ostream& out);

/// `track`: full pipeline; write trace CSV and report JSON; exit by
/// thresholds.
int cmd_track(const RunConfig& cfg, std::ostream& out);

/// `verify`: run the invariant suite for the configured system.
int cmd_verify(const RunConfig& cfg, std::ostream& out);

}  // namespace geotrack
