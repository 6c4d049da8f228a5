#include "geotrack/tracking.hpp"

#include "geotrack/errors.hpp"

namespace geotrack {

FeedbackContext FeedbackContext::make(const ControlSystem& sys,
                                      const ReferencePlan& plan) {
  auto [semisimple, min_eig] = check_semisimple(sys);
  if (semisimple)
    return FeedbackContext{sys, plan, orthonormalize_killing(sys.basis())};
  return FeedbackContext{sys, plan, sys.basis()};
}

double lyapunov_V(const GroupElement& x, const AlgebraBasis& basis) {
  return Ad_matrix(x, basis).mat.trace();
}

double dV_directional(const GroupElement& x, const AlgebraElement& v_body,
                      const AlgebraBasis& basis) {
  return numeric::trace_product(Ad_matrix(x, basis).mat,
                                ad_matrix(v_body, basis).mat);
}

double adjoint_probe(const GroupElement& x, const AlgebraElement& probe_dir,
                     const AlgebraBasis& basis) {
  return dV_directional(x, probe_dir, basis);
}

RVec feedback_a(const FeedbackContext& ctx, double t, const GroupElement& w) {
  const int m = ctx.sys.channels();
  const RMat ad_w = Ad_matrix(w, ctx.basis).mat;
  const GroupElement xr = ctx.plan.reference(t);
  RVec a(m);
  for (int k = 0; k < m; ++k) {
    const AlgebraElement y = conjugate(xr, ctx.sys.generator(k));
    a(k) = numeric::trace_product(ad_w, ad_matrix(y, ctx.basis).mat);
  }
  return a;
}

AlgebraElement body_velocity_W(const FeedbackContext& ctx, double t,
                               const GroupElement& w) {
  const int m = ctx.sys.channels();
  const RMat ad_w = Ad_matrix(w, ctx.basis).mat;
  const GroupElement xr = ctx.plan.reference(t);
  Mat xi = Mat::Zero(ctx.sys.spec().d, ctx.sys.spec().d);
  for (int k = 0; k < m; ++k) {
    const AlgebraElement y = conjugate(xr, ctx.sys.generator(k));
    const double a_k =
        numeric::trace_product(ad_w, ad_matrix(y, ctx.basis).mat);
    xi += a_k * y.mat();
  }
  return AlgebraElement(ctx.sys.spec(), std::move(xi));
}

std::vector<TrackedSample> recover_tracking(
    const FeedbackContext& ctx, std::span<const TraceSample> w_trace) {
  std::vector<TrackedSample> out;
  out.reserve(w_trace.size());
  for (const TraceSample& s : w_trace) {
    const GroupElement xr = ctx.plan.reference(s.t);
    const RVec ur = ctx.plan.controls(s.t);
    out.emplace_back(s.t, s.w * xr, RVec(s.a + ur));
  }
  return out;
}

}  // namespace geotrack
