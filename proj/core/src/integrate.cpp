#include "geotrack/integrate.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "geotrack/errors.hpp"

namespace geotrack {

std::string to_string(Method m) {
  return m == Method::LieEuler ? "lie-euler" : "rkmk4";
}

Method method_from_string(const std::string& s) {
  if (s == "lie-euler") return Method::LieEuler;
  if (s == "rkmk4") return Method::RKMK4;
  throw ConfigError("unknown integrator method: " + s);
}

namespace {

// dexpinv_{-u}(k) truncated for order 4: k + 1/2 [u,k] + 1/12 [u,[u,k]].
// This is the body-frame (right-multiplication) convention for w' = w xi.
AlgebraElement dexpinv_trunc(const AlgebraElement& u, const AlgebraElement& k) {
  const AlgebraElement uk = bracket(u, k);
  return k + 0.5 * uk + (1.0 / 12.0) * bracket(u, uk);
}

void require_finite(const AlgebraElement& a) {
  if (!a.mat().allFinite()) throw Error("integrate: non-finite rhs value");
}

}  // namespace

GroupElement lie_step(Method method, double t, const GroupElement& w, double h,
                      const BodyRhs& rhs) {
  if (method == Method::LieEuler) {
    AlgebraElement k = rhs(t, w);
    require_finite(k);
    return w * expm(k * h);
  }

  // RKMK4: integrate u' = dexpinv_{-u}(xi(t, w0 exp(u))) with classical RK4
  // from u(0) = 0.
  const AlgebraElement k1 = rhs(t, w);
  require_finite(k1);

  AlgebraElement u2 = k1 * (0.5 * h);
  const AlgebraElement k2 = dexpinv_trunc(u2, rhs(t + 0.5 * h, w * expm(u2)));
  AlgebraElement u3 = k2 * (0.5 * h);
  const AlgebraElement k3 = dexpinv_trunc(u3, rhs(t + 0.5 * h, w * expm(u3)));
  AlgebraElement u4 = k3 * h;
  const AlgebraElement k4 = dexpinv_trunc(u4, rhs(t + h, w * expm(u4)));
  require_finite(k4);

  const AlgebraElement u =
      (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6.0);
  return w * expm(u);
}

RunTrace integrate(const FeedbackContext& ctx, const GroupElement& w0,
                   double t0, const IntegratorConfig& cfg) {
  if (!(cfg.h > 0.0)) throw Error("integrate: h must be positive");
  if (!(cfg.t_end > 0.0)) throw Error("integrate: t_end must be positive");
  if (cfg.project_every < 1) throw Error("integrate: project_every must be >= 1");

  const BodyRhs rhs = [&ctx](double t, const GroupElement& w) {
    return body_velocity_W(ctx, t, w);
  };
  const auto steps = static_cast<long>(std::llround(cfg.t_end / cfg.h));
  if (steps < 1) throw Error("integrate: horizon shorter than one step");

  RunTrace trace;
  trace.config = cfg;
  trace.t0 = t0;
  trace.samples.reserve(static_cast<size_t>(steps) + 1);

  GroupElement w = w0;
  const int d = ctx.sys.spec().d;
  trace.samples.emplace_back(t0, w, feedback_a(ctx, t0, w),
                             lyapunov_V(w, ctx.basis));

  for (long i = 0; i < steps; ++i) {
    const double t = t0 + static_cast<double>(i) * cfg.h;
    w = lie_step(cfg.method, t, w, cfg.h, rhs);
    if (!w.mat().allFinite()) throw Error("integrate: state diverged");
    const double drift =
        (w.mat().adjoint() * w.mat() - Mat::Identity(d, d)).norm();
    if (drift > 0.5) throw Error("integrate: manifold drift beyond 0.5");
    if ((i + 1) % cfg.project_every == 0)
      w = project_to_group(w.mat(), ctx.sys.spec());
    const double tn = t0 + static_cast<double>(i + 1) * cfg.h;
    trace.samples.emplace_back(tn, w, feedback_a(ctx, tn, w),
                               lyapunov_V(w, ctx.basis));
  }

  // Summary.
  auto& s = trace.summary;
  s.final_error =
      (w.mat() - Mat::Identity(d, d)).norm();
  s.min_step_dV = 0.0;
  for (size_t i = 1; i < trace.samples.size(); ++i)
    s.min_step_dV = std::min(
        s.min_step_dV, trace.samples[i].V - trace.samples[i - 1].V);
  const double t_tail = trace.samples.back().t - ctx.plan.period();
  s.tail_sup_a = 0.0;
  for (const auto& smp : trace.samples)
    if (smp.t >= t_tail)
      s.tail_sup_a = std::max(s.tail_sup_a, smp.a.cwiseAbs().maxCoeff());
  return trace;
}

LambdaStack lambda_stack(const ReferencePlan& plan, const AlgebraElement& x,
                         double t, int order) {
  if (order < 0 || order > 4)
    throw Error("lambda_stack: order must be in [0, 4]");
  constexpr double kFdStep = 1e-4;

  // Keep the whole nested stencil clear of the window boundaries, where the
  // tabulated xi switches formulas at the 1e-12 level and differencing would
  // amplify that.
  const double radius = 2.0 * kFdStep * order + 1e-12;
  const double window = plan.period() / plan.channels();
  double t_used = t;
  bool shifted = false;
  const double into = numeric::mod_period(t, window);
  if (into < radius) {
    t_used = t - into + radius;
    shifted = true;
  } else if (window - into < radius) {
    t_used = t + (window - into) - radius;
    shifted = true;
  }

  // Lambda^n(t) evaluated recursively; the time derivative of the previous
  // level is a 5-point central difference, bottoming out in the control
  // waveforms through X_r(t).
  std::function<AlgebraElement(int, double)> level = [&](int n,
                                                         double s) -> AlgebraElement {
    if (n == 0) return x;
    auto prev = [&](double q) { return level(n - 1, q); };
    const AlgebraElement d1 =
        (1.0 / (12.0 * kFdStep)) *
        (prev(s - 2.0 * kFdStep) - 8.0 * prev(s - kFdStep) +
         8.0 * prev(s + kFdStep) - prev(s + 2.0 * kFdStep));
    return d1 + bracket(plan.reference_velocity(s), level(n - 1, s));
  };

  LambdaStack out;
  out.t_used = t_used;
  out.shifted = shifted;
  for (int n = 0; n <= order; ++n) out.lambdas.push_back(level(n, t_used));
  return out;
}

void write_trace_csv(const FeedbackContext& ctx, const RunTrace& trace,
                     const std::string& path, bool sidecar) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path);
  const int m = ctx.sys.channels();
  const int d = ctx.sys.spec().d;
  out << "t,V,err";
  for (int k = 1; k <= m; ++k) out << ",a" << k;
  for (int k = 1; k <= m; ++k) out << ",u" << k;
  out << "\n";
  char buf[32];
  auto put = [&](double v, bool lead_comma = true) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    if (lead_comma) out << ",";
    out << buf;
  };
  for (const TraceSample& s : trace.samples) {
    const double err = (s.w.mat() - Mat::Identity(d, d)).norm();
    const RVec ur = ctx.plan.controls(s.t);
    put(s.t, false);
    put(s.V);
    put(err);
    for (int k = 0; k < m; ++k) put(s.a(k));
    for (int k = 0; k < m; ++k) put(s.a(k) + ur(k));
    out << "\n";
  }
  out.close();

  if (sidecar) {
    nlohmann::json j;
    j["t0"] = trace.t0;
    j["method"] = to_string(trace.config.method);
    j["h"] = trace.config.h;
    j["t_end"] = trace.config.t_end;
    j["project_every"] = trace.config.project_every;
    j["samples"] = trace.samples.size();
    j["final_error"] = trace.summary.final_error;
    j["tail_sup_a"] = trace.summary.tail_sup_a;
    j["min_step_dV"] = trace.summary.min_step_dV;
    std::ofstream sj(path + ".json");
    if (!sj) throw Error("cannot open " + path + ".json");
    sj << j.dump(2) << "\n";
  }
}

}  // namespace geotrack
