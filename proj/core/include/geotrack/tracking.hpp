#pragma once

#include "geotrack/reference.hpp"

namespace geotrack {

/// Everything the closed-loop field needs: the system, its reference plan
/// and the working basis (Killing-orthonormal when the algebra is
/// semisimple, the reference basis otherwise).
struct FeedbackContext {
  ControlSystem sys;
  ReferencePlan plan;
  AlgebraBasis basis;

  static FeedbackContext make(const ControlSystem& sys,
                              const ReferencePlan& plan);
};

/// V(x) = tr Ad(x). Bounded above by dim g, attained exactly on the center.
double lyapunov_V(const GroupElement& x, const AlgebraBasis& basis);

/// Directional derivative of V at x along the body-frame vector v:
/// dV_x(x v) = tr(Ad(x) ad(v)).
double dV_directional(const GroupElement& x, const AlgebraElement& v_body,
                      const AlgebraBasis& basis);

/// tr(Ad(x) ad(X)) for a single probe direction X.
double adjoint_probe(const GroupElement& x, const AlgebraElement& probe_dir,
                     const AlgebraBasis& basis);

/// Feedback coefficients a_k(t, w) = tr(Ad(w) ad(Ad(x_r(t)) X_k)).
RVec feedback_a(const FeedbackContext& ctx, double t, const GroupElement& w);

/// Body-frame value of the auxiliary field: xi(t, w) with W(t, w) = w xi.
AlgebraElement body_velocity_W(const FeedbackContext& ctx, double t,
                               const GroupElement& w);

/// One sample of an integral curve of W.
struct TraceSample {
  double t;
  GroupElement w;
  RVec a;    // feedback coefficients at (t, w)
  double V;  // lyapunov_V(w)

  TraceSample(double t_, GroupElement w_, RVec a_, double v)
      : t(t_), w(std::move(w_)), a(std::move(a_)), V(v) {}
};

/// One sample of the recovered tracking trajectory of the original system.
struct TrackedSample {
  double t;
  GroupElement x;
  RVec u;

  TrackedSample(double t_, GroupElement x_, RVec u_)
      : t(t_), x(std::move(x_)), u(std::move(u_)) {}
};

/// Change of variables back to the original system:
/// x(t) = w(t) x_r(t), u_k(t) = a_k(t, w(t)) + u_k^r(t).
std::vector<TrackedSample> recover_tracking(const FeedbackContext& ctx,
                                            std::span<const TraceSample> w_trace);

}  // namespace geotrack
