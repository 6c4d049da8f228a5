#pragma once

#include <map>

#include "geotrack/integrate.hpp"

namespace geotrack {

/// Pass/fail thresholds for a tracking run. Defaults are the project's
/// acceptance contract.
struct Thresholds {
  double err_final = 1e-3;       // final tracking error
  double tail_a = 1e-4;          // sup |a_k| over the last period
  double dV_min = -1e-8;         // min per-step V increment
  double critical_probe = 1e-3;  // terminal critical probe
  double residual = 1e-5;        // max change-of-variables residual
};

struct MonitorReport {
  double min_step_dV = 0.0;
  double tail_sup_a = 0.0;
  double final_error = 0.0;
  double critical_probe_end = 0.0;
  double residual_max = 0.0;
  bool center_end = false;
  Thresholds thresholds;
  std::map<std::string, bool> verdicts;
  bool pass = false;
};

/// ||x xr^{-1} - I||_F; right-invariant.
double tracking_error(const GroupElement& x, const GroupElement& xr);

/// max_i |tr(Ad(x) ad(E_i))| over the basis: zero iff x is critical for V.
double critical_probe(const GroupElement& x, const AlgebraBasis& basis);

/// |V(x) - dim g| <= 1e-8: x lies in the center.
bool center_check(const GroupElement& x, const AlgebraBasis& basis);

/// Finite-difference Hessian of V in coordinates of the second kind
/// phi(s) = x exp(s_1 Y_1) ... exp(s_n Y_n) at s = 0 (step 1e-3).
/// Requires a Killing-orthonormal basis and a central x; the expected value
/// there is -I.
RMat hessian_at_center(const GroupElement& x, const AlgebraBasis& basis);

/// Max over interior grid points of ||x'_fd(t) - x(t) sum_k u_k X_k||_F with
/// 5-point central differences on a uniform grid.
double residual_original_system(std::span<const TrackedSample> tracked,
                                const ControlSystem& sys);

/// Digest of a run: V-monotonicity, tail a_k decay, final error, terminal
/// critical probe, change-of-variables residual, and verdicts against the
/// thresholds.
MonitorReport monitor_run(const RunTrace& trace, const FeedbackContext& ctx,
                          const Thresholds& thresholds = {});

std::string report_to_json(const MonitorReport& report);

}  // namespace geotrack
