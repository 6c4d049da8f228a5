#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geotrack/analysis.hpp"

namespace geotrack {

/// A single-run configuration, parsed from one JSON document. Matrices are
/// row-major arrays of [re, im] pairs.
struct RunConfig {
  GroupSpec group;

  // Either a named preset or explicit generator matrices.
  std::string generator_preset;
  std::vector<Mat> generator_mats;

  double period = 1.0;

  // x_infty: identity (default), explicit matrix, or exp of algebra coords.
  std::optional<Mat> x_infty_mat;
  std::optional<RVec> x_infty_exp_coords;

  // Initial-state perturbation: x0 = exp(eps Z) x_infty.
  double perturb_eps = 0.0;
  std::optional<RVec> perturb_direction;  // coords in the system basis
  bool perturb_random = false;
  std::uint64_t seed = 0;

  IntegratorConfig integrator;
  Thresholds thresholds;

  std::string trace_csv;    // empty = do not write
  std::string report_json;  // empty = do not write
  std::string plan_json = "plan.json";
  std::string control_csv = "controls.csv";

  int verify_samples = 25;  // random probes per invariant in `verify`
};

RunConfig parse_config_json(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Everything `track` needs, resolved from a config: system, plan, feedback
/// context, and the initial w0 = x0 x_infty^{-1} = exp(eps Z).
struct ResolvedRun {
  ControlSystem sys;
  FeedbackContext ctx;
  GroupElement w0;
  GroupElement x_infty;
  std::uint64_t seed;

  ResolvedRun(ControlSystem s, FeedbackContext c, GroupElement w,
              GroupElement xi, std::uint64_t sd)
      : sys(std::move(s)),
        ctx(std::move(c)),
        w0(std::move(w)),
        x_infty(std::move(xi)),
        seed(sd) {}
};

ControlSystem build_system(const RunConfig& cfg);
GroupElement build_x_infty(const RunConfig& cfg, const ControlSystem& sys);
ResolvedRun resolve_run(const RunConfig& cfg);

}  // namespace geotrack
