#include "geotrack/verify.hpp"

#include <cmath>

namespace geotrack {

namespace {

struct Suite {
  std::vector<CheckResult>& out;

  void add(const std::string& name, double value, double bound,
           const std::string& note = "") {
    out.push_back({name, value <= bound, value, bound, note});
  }
  void add_flag(const std::string& name, bool ok, const std::string& note = "") {
    out.push_back({name, ok, ok ? 1.0 : 0.0, 1.0, note});
  }
};

double fd_dV(const GroupElement& x, const AlgebraElement& v,
             const AlgebraBasis& basis) {
  const double h = 1e-5;
  const double vp = lyapunov_V(x * expm(v * h), basis);
  const double vm = lyapunov_V(x * expm(v * -h), basis);
  return (vp - vm) / (2.0 * h);
}

}  // namespace

std::vector<CheckResult> invariant_suite(const RunConfig& cfg) {
  std::vector<CheckResult> results;
  Suite suite{results};

  ControlSystem sys = build_system(cfg);
  const AlgebraBasis& basis = sys.basis();
  const int n = basis.size();
  const SystemReport report = check_system(sys);
  SplitMix64 rng(cfg.seed ^ 0x5eedull);
  const int trials = cfg.verify_samples;

  // --- algebra identities -------------------------------------------------
  double worst_anti = 0.0, worst_jacobi = 0.0, worst_ad_hom = 0.0;
  for (int i = 0; i < trials; ++i) {
    const AlgebraElement a = random_algebra_element(basis, rng);
    const AlgebraElement b = random_algebra_element(basis, rng);
    const AlgebraElement c = random_algebra_element(basis, rng);
    worst_anti = std::max(worst_anti, (bracket(a, b) + bracket(b, a)).norm());
    worst_jacobi = std::max(
        worst_jacobi, (bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) +
                       bracket(c, bracket(a, b)))
                          .norm());
    const RMat lhs = ad_matrix(bracket(a, b), basis).mat;
    const RMat ada = ad_matrix(a, basis).mat;
    const RMat adb = ad_matrix(b, basis).mat;
    worst_ad_hom = std::max(worst_ad_hom, (lhs - (ada * adb - adb * ada)).norm());
  }
  suite.add("bracket antisymmetry", worst_anti, 1e-12);
  suite.add("jacobi identity", worst_jacobi, 1e-12);
  suite.add("ad is a bracket homomorphism", worst_ad_hom, 1e-10);

  // --- adjoint identities -------------------------------------------------
  double worst_adexp = 0.0, worst_hom = 0.0, worst_equiv = 0.0,
         worst_tr_ad = 0.0, worst_v_bound = 0.0;
  for (int i = 0; i < trials; ++i) {
    const AlgebraElement a = random_algebra_element(basis, rng);
    const GroupElement x = random_group_element(basis, rng);
    const GroupElement y = random_group_element(basis, rng);

    const RMat ad_a = ad_matrix(a, basis).mat;
    worst_adexp =
        std::max(worst_adexp, (Ad_matrix(expm(a), basis).mat -
                               numeric::expm_pade(ad_a.cast<Cplx>()).real())
                                  .norm());
    worst_hom = std::max(worst_hom,
                         (Ad_matrix(x * y, basis).mat -
                          Ad_matrix(x, basis).mat * Ad_matrix(y, basis).mat)
                             .norm());
    const RMat ad_x = Ad_matrix(x, basis).mat;
    worst_equiv =
        std::max(worst_equiv, (ad_matrix(conjugate(x, a), basis).mat -
                               ad_x * ad_a * ad_x.inverse())
                                  .norm());
    worst_tr_ad = std::max(worst_tr_ad, std::abs(ad_a.trace()));
    worst_v_bound =
        std::max(worst_v_bound, lyapunov_V(x, basis) - static_cast<double>(n));
  }
  suite.add("Ad(exp A) = exp(ad A)", worst_adexp, 1e-10);
  suite.add("Ad(xy) = Ad(x) Ad(y)", worst_hom, 1e-10);
  suite.add("ad(Ad(x)X) = Ad(x) ad(X) Ad(x)^-1", worst_equiv, 1e-10);
  suite.add("tr ad(X) = 0", worst_tr_ad, 1e-10);
  suite.add("V <= dim g", worst_v_bound, 1e-10);

  if (report.semisimple) {
    const AlgebraBasis ortho = orthonormalize_killing(basis);
    double worst_orth = 0.0;
    for (int i = 0; i < trials; ++i) {
      const GroupElement x = random_group_element(basis, rng);
      const RMat ad_x = Ad_matrix(x, ortho).mat;
      worst_orth = std::max(
          worst_orth,
          (ad_x.transpose() * ad_x - RMat::Identity(n, n)).norm());
    }
    suite.add("Ad orthogonal in Killing-orthonormal basis", worst_orth, 1e-10);
  }

  // --- feedback identities ------------------------------------------------
  GroupElement x_infty = build_x_infty(cfg, sys);
  ReferencePlan plan = build_reference_plan(sys, x_infty, cfg.period);
  FeedbackContext ctx = FeedbackContext::make(sys, plan);
  const double period = plan.period();

  double worst_dv = 0.0, worst_ak = 0.0, worst_ak_per = 0.0;
  double worst_inv = 0.0, worst_conj = 0.0;
  for (int i = 0; i < trials; ++i) {
    const GroupElement x = random_group_element(basis, rng);
    const AlgebraElement v = random_algebra_element(basis, rng);
    const double dv = dV_directional(x, v, basis);
    const double ref = fd_dV(x, v, basis);
    worst_dv = std::max(worst_dv,
                        std::abs(dv - ref) / std::max(1.0, std::abs(ref)));

    const double t = period * rng.uniform();
    const RVec a = feedback_a(ctx, t, x);
    const GroupElement xr = plan.reference(t);
    for (int k = 0; k < sys.channels(); ++k) {
      const AlgebraElement y = conjugate(xr, sys.generator(k));
      worst_ak = std::max(worst_ak,
                          std::abs(a(k) - dV_directional(x, y, ctx.basis)));
    }
    worst_ak_per =
        std::max(worst_ak_per,
                 (a - feedback_a(ctx, t + period, x)).cwiseAbs().maxCoeff());

    const GroupElement y = random_group_element(basis, rng);
    worst_inv = std::max(worst_inv,
                         std::abs(adjoint_probe(x.inverse(), v, basis) +
                                  adjoint_probe(x, v, basis)));
    // probe(y x y^-1, X) = probe(x, Ad(y)^-1 X)
    worst_conj = std::max(
        worst_conj,
        std::abs(adjoint_probe(y * x * y.inverse(), v, basis) -
                 adjoint_probe(x, conjugate(y.inverse(), v), basis)));
  }
  suite.add("dV matches finite differences (rel)", worst_dv, 1e-6);
  suite.add("a_k equals dV along transported generators", worst_ak, 1e-12);
  suite.add("a_k is T-periodic", worst_ak_per, 1e-12);
  suite.add("probe antisymmetry under inversion", worst_inv, 1e-10);
  suite.add("probe conjugation symmetry", worst_conj, 1e-10);

  // --- reference construction ---------------------------------------------
  const int m = plan.channels();
  double worst_int = 0.0;
  for (int j = 0; j < m; ++j) {
    const BumpDescriptor& b = plan.bump(j);
    const double total = numeric::adaptive_simpson(
        [&b](double s) { return b.chi(s); }, b.window_lo, b.window_hi, 1e-13);
    worst_int = std::max(worst_int, std::abs(total));
  }
  suite.add("zero-integral controls", worst_int, 1e-10);

  bool windows_ok = true;
  for (int j = 0; j < m && windows_ok; ++j) {
    const BumpDescriptor& bj = plan.bump(j);
    windows_ok = bj.window_lo >= (j == 0 ? 0.0 : plan.bump(j - 1).window_hi) &&
                 bj.window_hi <= period;
  }
  suite.add_flag("window disjointness", windows_ok);

  double worst_support = 0.0;
  double worst_xi_bound = 0.0;
  double worst_manifold = 0.0;
  const int grid = 2000;
  for (int i = 0; i <= grid; ++i) {
    const double t = period * i / grid;
    const RVec u = plan.controls(t);
    int active = 0;
    for (int k = 0; k < m; ++k)
      if (u(k) != 0.0) ++active;
    worst_support = std::max(worst_support, static_cast<double>(active > 1));
    for (int k = 0; k < m; ++k)
      worst_xi_bound =
          std::max(worst_xi_bound, std::abs(plan.xi(k, t)) - period / m);
    const GroupElement xr = plan.reference(t);
    worst_manifold = std::max(
        worst_manifold,
        (xr.mat().adjoint() * xr.mat() - Mat::Identity(cfg.group.d, cfg.group.d))
            .norm());
  }
  suite.add("one active channel at a time", worst_support, 0.0);
  suite.add("xi bounded by T/m", worst_xi_bound, 0.0);
  suite.add("x_r stays on the group", worst_manifold, kTolGroup);

  suite.add("x_r(0) = x_infty",
            (plan.reference(0.0).mat() - x_infty.mat()).norm(), 1e-13);
  double worst_per = 0.0;
  for (int i = 0; i < 16; ++i) {
    const double t = period * i / 16.0;
    worst_per = std::max(worst_per, (plan.reference(t + period).mat() -
                                     plan.reference(t).mat())
                                        .norm());
  }
  suite.add("x_r is T-periodic", worst_per, 1e-13);

  // Reference solves the system (off-grid central differences, h = 1e-5).
  {
    const double hfd = 1e-5;
    double worst_res = 0.0;
    for (int i = 0; i < grid; ++i) {
      const double t = period * i / grid;
      const Mat dx =
          (plan.reference(t + hfd).mat() - plan.reference(t - hfd).mat()) /
          (2.0 * hfd);
      const Mat field = plan.reference(t).mat() *
                        plan.reference_velocity(t).mat();
      worst_res = std::max(worst_res, (dx - field).norm());
    }
    suite.add("reference solves the system", worst_res, 1e-6);
  }

  if (report.reg_sys) {
    const auto [regular, rank] = check_regular_rank(plan, std::max(128, m * n));
    suite.add_flag("reference is regular (rank = dim g)", regular,
                   "rank " + std::to_string(rank) + "/" + std::to_string(n));
  }

  // Derivative identity d/dt Ad(x_r) = Ad(x_r) ad(X_r).
  {
    const double hfd = 1e-5;
    double worst_der = 0.0;
    SplitMix64 rng2(cfg.seed ^ 0xdada);
    for (int i = 0; i < 10; ++i) {
      // Sample clear of window edges.
      const double t =
          (0.1 + 0.8 * rng2.uniform()) * period / m + (i % m) * period / m;
      const RMat lhs = (Ad_matrix(plan.reference(t + hfd), basis).mat -
                        Ad_matrix(plan.reference(t - hfd), basis).mat) /
                       (2.0 * hfd);
      const RMat rhs = Ad_matrix(plan.reference(t), basis).mat *
                       ad_matrix(plan.reference_velocity(t), basis).mat;
      worst_der = std::max(worst_der, (lhs - rhs).norm());
    }
    suite.add("d/dt Ad(x_r) = Ad(x_r) ad(X_r)", worst_der, 1e-6);
  }

  // Frozen-coefficient step equals the exact exponential flow.
  {
    const AlgebraElement xi0 = random_algebra_element(basis, rng);
    const GroupElement w = random_group_element(basis, rng);
    const double h = 0.05;
    const auto frozen = [&xi0](double, const GroupElement&) { return xi0; };
    const GroupElement exact = w * expm(xi0 * h);
    const double err_euler =
        (lie_step(Method::LieEuler, 0.0, w, h, frozen).mat() - exact.mat())
            .norm();
    const double err_rkmk =
        (lie_step(Method::RKMK4, 0.0, w, h, frozen).mat() - exact.mat()).norm();
    suite.add("frozen-coefficient steps match exp flow",
              std::max(err_euler, err_rkmk), 1e-13);
  }

  // Plateau identity for the derivative recursion.
  {
    const BumpDescriptor& b = plan.bump(0);
    const double t1 = 0.5 * (b.plateau_lo() + b.plateau_hi());
    const AlgebraElement probe = random_algebra_element(basis, rng);
    const LambdaStack stack = lambda_stack(plan, probe, t1, 2);
    AlgebraElement expect = probe;
    double worst_lam = 0.0;
    for (int nn = 1; nn <= 2; ++nn) {
      expect = bracket(sys.generator(0), expect);
      worst_lam = std::max(worst_lam, (stack.lambdas[nn] - expect).norm());
    }
    suite.add("lambda stack matches ad(X_1)^n on the plateau", worst_lam, 1e-6);
  }

  // Short integration: V non-decreasing, manifold drift in check.
  {
    SplitMix64 rng3(cfg.seed ^ 0xbeefull);
    const AlgebraElement z = random_unit_algebra_element(basis, rng3);
    IntegratorConfig icfg;
    icfg.method = Method::RKMK4;
    icfg.h = period / 500.0;
    icfg.t_end = 2.0 * period;
    const RunTrace trace = integrate(ctx, expm(z * 0.1), 0.0, icfg);
    suite.add("V non-decreasing along W (min step dV)",
              -trace.summary.min_step_dV, 1e-8);
    double worst_drift = 0.0;
    for (const TraceSample& s : trace.samples)
      worst_drift = std::max(
          worst_drift, (s.w.mat().adjoint() * s.w.mat() -
                        Mat::Identity(cfg.group.d, cfg.group.d))
                           .norm());
    suite.add("integration stays on the manifold", worst_drift, 1e-8);
  }

  return results;
}

}  // namespace geotrack
