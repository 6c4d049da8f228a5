#pragma once

#include "geotrack/config.hpp"

namespace geotrack {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;  // measured
  double bound = 0.0;  // allowed
  std::string note;
};

/// The runtime invariant suite for one configured system: algebra and
/// adjoint identities, feedback identities, reference-construction
/// properties and integrator sanity, each as a named pass/fail row.
std::vector<CheckResult> invariant_suite(const RunConfig& cfg);

}  // namespace geotrack
