#pragma once

#include <functional>

#include "geotrack/tracking.hpp"

namespace geotrack {

enum class Method { LieEuler, RKMK4 };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct IntegratorConfig {
  Method method = Method::RKMK4;
  double h = 5e-4;           // step size
  double t_end = 50.0;       // horizon (relative to t0)
  int project_every = 10;    // steps between drift repairs
};

/// Fixed-step trace of an integral curve of W, all samples on-manifold.
struct RunTrace {
  std::vector<TraceSample> samples;
  IntegratorConfig config;
  double t0 = 0.0;

  struct Summary {
    double final_error = 0.0;   // ||w(t_end) - I||_F
    double tail_sup_a = 0.0;    // sup of max_k |a_k| over the last period
    double min_step_dV = 0.0;   // min over steps of V_{i+1} - V_i
  } summary;
};

/// Body-frame right-hand side xi(t, w) of w' = w xi(t, w).
using BodyRhs = std::function<AlgebraElement(double, const GroupElement&)>;

/// One step of the chosen scheme.
///   LieEuler: w exp(h xi(t, w)).
///   RKMK4: classical 4-stage Munthe-Kaas scheme in the algebra, stages
///   corrected by the dexp-inverse series truncated for order 4
///   (k + 1/2 [u, k] + 1/12 [u, [u, k]]), final update w exp(u).
GroupElement lie_step(Method method, double t, const GroupElement& w, double h,
                      const BodyRhs& rhs);

/// Fixed-step march of the auxiliary field from (t0, w0) over cfg.t_end,
/// recording (t, w, a, V) each step and repairing drift every
/// cfg.project_every steps.
RunTrace integrate(const FeedbackContext& ctx, const GroupElement& w0,
                   double t0, const IntegratorConfig& cfg);

struct LambdaStack {
  std::vector<AlgebraElement> lambdas;  // Lambda^0 .. Lambda^N
  double t_used = 0.0;                  // shifted away from window edges
  bool shifted = false;
};

/// The derivative recursion Lambda^{n+1} = (Lambda^n)' + [X_r(t), Lambda^n],
/// Lambda^0 = X, with time derivatives taken by nested 5-point central
/// differences of the control waveforms (step 1e-4). N <= 4. Queries too
/// close to a window boundary are shifted inward (flagged in the result).
LambdaStack lambda_stack(const ReferencePlan& plan, const AlgebraElement& x,
                         double t, int order);

/// CSV trace with header t,V,err,a1..am,u1..um (17 significant digits) and,
/// when `sidecar` is set, a "<path>.json" summary next to it.
void write_trace_csv(const FeedbackContext& ctx, const RunTrace& trace,
                     const std::string& path, bool sidecar = true);

}  // namespace geotrack
