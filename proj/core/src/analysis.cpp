#include "geotrack/analysis.hpp"

#include <cmath>

#include <json.hpp>

#include "geotrack/errors.hpp"

namespace geotrack {

double tracking_error(const GroupElement& x, const GroupElement& xr) {
  if (!(x.spec() == xr.spec())) throw Error("tracking_error: spec mismatch");
  const int d = x.spec().d;
  return (x.mat() * xr.mat().adjoint() - Mat::Identity(d, d)).norm();
}

double critical_probe(const GroupElement& x, const AlgebraBasis& basis) {
  const RMat ad_x = Ad_matrix(x, basis).mat;
  double probe = 0.0;
  for (int i = 0; i < basis.size(); ++i)
    probe = std::max(probe, std::abs(numeric::trace_product(
                                ad_x, ad_matrix(basis[i], basis).mat)));
  return probe;
}

bool center_check(const GroupElement& x, const AlgebraBasis& basis) {
  return std::abs(lyapunov_V(x, basis) - basis.size()) <= 1e-8;
}

RMat hessian_at_center(const GroupElement& x, const AlgebraBasis& basis) {
  const int n = basis.size();
  const RMat ortho_defect = -basis.killing() - RMat::Identity(n, n);
  if (ortho_defect.norm() > 1e-6 * n)
    throw Error("hessian_at_center: basis is not Killing-orthonormal");
  if (critical_probe(x, basis) > 1e-8)
    throw Error("hessian_at_center: x is not a critical point");

  constexpr double kStep = 1e-3;
  auto v_of = [&](const RVec& s) {
    GroupElement g = x;
    for (int i = 0; i < n; ++i)
      if (s(i) != 0.0) g = g * expm(basis[i] * s(i));
    return lyapunov_V(g, basis);
  };

  const double v0 = v_of(RVec::Zero(n));
  RMat hess(n, n);
  for (int i = 0; i < n; ++i) {
    RVec s = RVec::Zero(n);
    s(i) = kStep;
    const double vp = v_of(s);
    s(i) = -kStep;
    const double vm = v_of(s);
    hess(i, i) = (vp - 2.0 * v0 + vm) / (kStep * kStep);
    for (int j = i + 1; j < n; ++j) {
      RVec q = RVec::Zero(n);
      q(i) = kStep;
      q(j) = kStep;
      const double vpp = v_of(q);
      q(j) = -kStep;
      const double vpm = v_of(q);
      q(i) = -kStep;
      q(j) = kStep;
      const double vmp = v_of(q);
      q(j) = -kStep;
      const double vmm = v_of(q);
      hess(i, j) = hess(j, i) =
          (vpp - vpm - vmp + vmm) / (4.0 * kStep * kStep);
    }
  }
  return hess;
}

double residual_original_system(std::span<const TrackedSample> tracked,
                                const ControlSystem& sys) {
  const size_t n = tracked.size();
  if (n < 5) throw Error("residual_original_system: need at least 5 samples");
  const double h = tracked[1].t - tracked[0].t;
  for (size_t i = 1; i + 1 < n; ++i)
    if (std::abs((tracked[i + 1].t - tracked[i].t) - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw Error("residual_original_system: grid is not uniform");

  const int d = sys.spec().d;
  double worst = 0.0;
  for (size_t i = 2; i + 2 < n; ++i) {
    const Mat dx = (tracked[i - 2].x.mat() - 8.0 * tracked[i - 1].x.mat() +
                    8.0 * tracked[i + 1].x.mat() - tracked[i + 2].x.mat()) /
                   (12.0 * h);
    Mat field = Mat::Zero(d, d);
    for (int k = 0; k < sys.channels(); ++k)
      field += tracked[i].u(k) * sys.generator(k).mat();
    worst = std::max(worst, (dx - tracked[i].x.mat() * field).norm());
  }
  return worst;
}

MonitorReport monitor_run(const RunTrace& trace, const FeedbackContext& ctx,
                          const Thresholds& thresholds) {
  if (trace.samples.empty()) throw Error("monitor_run: empty trace");
  const double span = trace.samples.back().t - trace.samples.front().t;
  if (span < ctx.plan.period())
    throw Error("monitor_run: trace shorter than one period");

  MonitorReport rep;
  rep.thresholds = thresholds;
  rep.min_step_dV = 0.0;
  for (size_t i = 1; i < trace.samples.size(); ++i)
    rep.min_step_dV = std::min(rep.min_step_dV,
                               trace.samples[i].V - trace.samples[i - 1].V);

  const double t_tail = trace.samples.back().t - ctx.plan.period();
  rep.tail_sup_a = 0.0;
  for (const TraceSample& s : trace.samples)
    if (s.t >= t_tail)
      rep.tail_sup_a = std::max(rep.tail_sup_a, s.a.cwiseAbs().maxCoeff());

  const std::vector<TrackedSample> tracked =
      recover_tracking(ctx, trace.samples);
  const GroupElement& x_end = tracked.back().x;
  const GroupElement xr_end = ctx.plan.reference(trace.samples.back().t);
  rep.final_error = tracking_error(x_end, xr_end);
  rep.critical_probe_end =
      critical_probe(trace.samples.back().w, ctx.plan.system().basis());
  rep.center_end = center_check(trace.samples.back().w, ctx.basis);
  rep.residual_max = residual_original_system(tracked, ctx.sys);

  rep.verdicts["err_final"] = rep.final_error <= thresholds.err_final;
  rep.verdicts["tail_a"] = rep.tail_sup_a <= thresholds.tail_a;
  rep.verdicts["dV_min"] = rep.min_step_dV >= thresholds.dV_min;
  rep.verdicts["critical_probe"] =
      rep.critical_probe_end <= thresholds.critical_probe;
  rep.verdicts["residual"] = rep.residual_max <= thresholds.residual;
  rep.pass = true;
  for (const auto& [name, ok] : rep.verdicts) rep.pass = rep.pass && ok;
  return rep;
}

std::string report_to_json(const MonitorReport& report) {
  nlohmann::json j;
  j["min_step_dV"] = report.min_step_dV;
  j["tail_sup_a"] = report.tail_sup_a;
  j["final_error"] = report.final_error;
  j["critical_probe_end"] = report.critical_probe_end;
  j["residual_max"] = report.residual_max;
  j["center_check_end"] = report.center_end;
  j["thresholds"] = {{"err_final", report.thresholds.err_final},
                     {"tail_a", report.thresholds.tail_a},
                     {"dV_min", report.thresholds.dV_min},
                     {"critical_probe", report.thresholds.critical_probe},
                     {"residual", report.thresholds.residual}};
  nlohmann::json verdicts;
  for (const auto& [name, ok] : report.verdicts) verdicts[name] = ok;
  j["verdicts"] = verdicts;
  j["pass"] = report.pass;
  return j.dump(2);
}

}  // namespace geotrack
