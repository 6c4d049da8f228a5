#include <doctest.h>

#include <cmath>

#include "geotrack/rng.hpp"
#include "geotrack/tracking.hpp"

using namespace geotrack;

namespace {

const GroupSpec kSo3{GroupFamily::SO, 3};
const GroupSpec kSu2{GroupFamily::SU, 2};
const GroupSpec kSu3{GroupFamily::SU, 3};

FeedbackContext make_ctx(const char* preset, double period = 1.0) {
  const ControlSystem sys = make_preset_system(preset);
  const ReferencePlan plan =
      build_reference_plan(sys, GroupElement::identity(sys.spec()), period);
  return FeedbackContext::make(sys, plan);
}

GroupElement su2_minus_identity() {
  return GroupElement(kSu2, Mat(-Mat::Identity(2, 2)));
}

// Independent least-squares coordinates (same oracle as in test_basis).
RVec lsq_coordinates(const AlgebraBasis& basis, const Mat& target) {
  const int d = basis.spec().d;
  const int n = basis.size();
  RMat a(2 * d * d, n);
  RVec b(2 * d * d);
  for (int j = 0; j < n; ++j) {
    const Mat& e = basis[j].mat();
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        a(r * d + c, j) = e(r, c).real();
        a(d * d + r * d + c, j) = e(r, c).imag();
      }
  }
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      b(r * d + c) = target(r, c).real();
      b(d * d + r * d + c) = target(r, c).imag();
    }
  return a.colPivHouseholderQr().solve(b);
}

// Brute-force tr(Ad(w) ad(Y)): both coordinate matrices built column by
// column with the least-squares oracle.
double bruteforce_probe(const GroupElement& w, const AlgebraElement& y,
                        const AlgebraBasis& basis) {
  const int n = basis.size();
  RMat ad_w(n, n), ad_y(n, n);
  for (int j = 0; j < n; ++j) {
    ad_w.col(j) = lsq_coordinates(basis, conjugate(w, basis[j]).mat());
    ad_y.col(j) = lsq_coordinates(basis, bracket(y, basis[j]).mat());
  }
  return (ad_w * ad_y).trace();
}

}  // namespace

TEST_CASE("lyapunov_V") {
  SUBCASE("V(e) = dim g") {
    for (auto spec : {kSo3, kSu2, kSu3}) {
      const AlgebraBasis basis = standard_basis(spec);
      CHECK(lyapunov_V(GroupElement::identity(spec), basis) ==
            doctest::Approx(spec.algebra_dim()).epsilon(1e-13));
    }
  }
  SUBCASE("SO(3): V(R(theta)) = 1 + 2 cos theta (any axis)") {
    const AlgebraBasis so3 = standard_basis(kSo3);
    SplitMix64 rng(15);
    for (int i = 0; i < 25; ++i) {
      const AlgebraElement axis = random_unit_algebra_element(so3, rng);
      // Frobenius-unit skew matrix: rotation angle theta = s / sqrt(2).
      const double s = 6.0 * rng.uniform();
      const GroupElement r = expm(axis * s);
      const double theta = s / std::sqrt(2.0);
      CHECK(lyapunov_V(r, so3) ==
            doctest::Approx(1.0 + 2.0 * std::cos(theta)).epsilon(1e-10));
    }
  }
  SUBCASE("SU(2): V(-I) = 3 = dim g (central)") {
    const AlgebraBasis su2 = standard_basis(kSu2);
    CHECK(lyapunov_V(su2_minus_identity(), su2) ==
          doctest::Approx(3.0).epsilon(1e-13));
  }
  SUBCASE("V <= dim g everywhere") {
    const AlgebraBasis su3 = standard_basis(kSu3);
    SplitMix64 rng(2);
    for (int i = 0; i < 50; ++i)
      CHECK(lyapunov_V(random_group_element(su3, rng), su3) <= 8.0 + 1e-10);
  }
}

TEST_CASE("dV_directional") {
  const AlgebraBasis su2 = standard_basis(kSu2);
  SplitMix64 rng(31);

  SUBCASE("zero at the identity (ad is traceless)") {
    for (int i = 0; i < 10; ++i) {
      const AlgebraElement v = random_algebra_element(su2, rng);
      CHECK(std::abs(dV_directional(GroupElement::identity(kSu2), v, su2)) <
            1e-12);
    }
  }
  SUBCASE("zero at central -I") {
    for (int i = 0; i < 10; ++i) {
      const AlgebraElement v = random_algebra_element(su2, rng);
      CHECK(std::abs(dV_directional(su2_minus_identity(), v, su2)) < 1e-12);
    }
  }
  SUBCASE("matches finite differences of V along exp rays") {
    const AlgebraBasis su3 = standard_basis(kSu3);
    const double h = 1e-5;
    for (int i = 0; i < 100; ++i) {
      const GroupElement x = random_group_element(su3, rng);
      const AlgebraElement v = random_algebra_element(su3, rng);
      const double lhs = dV_directional(x, v, su3);
      const double fd = (lyapunov_V(x * expm(v * h), su3) -
                         lyapunov_V(x * expm(v * -h), su3)) /
                        (2.0 * h);
      CHECK(lhs == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("feedback_a") {
  const FeedbackContext ctx = make_ctx("su2-f3f1");
  SplitMix64 rng(43);

  SUBCASE("zero at the identity for all t") {
    for (int i = 0; i < 10; ++i) {
      const RVec a =
          feedback_a(ctx, 3.0 * rng.uniform(), GroupElement::identity(kSu2));
      CHECK(a.cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("zero at central -I for all t") {
    for (int i = 0; i < 10; ++i) {
      const RVec a = feedback_a(ctx, 3.0 * rng.uniform(), su2_minus_identity());
      CHECK(a.cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("agrees with the brute-force trace formula") {
    for (int i = 0; i < 20; ++i) {
      const double t = rng.uniform();
      const GroupElement w = random_group_element(ctx.sys.basis(), rng);
      const RVec a = feedback_a(ctx, t, w);
      const GroupElement xr = ctx.plan.reference(t);
      for (int k = 0; k < ctx.sys.channels(); ++k) {
        const AlgebraElement y = conjugate(xr, ctx.sys.generator(k));
        CHECK(a(k) ==
              doctest::Approx(bruteforce_probe(w, y, ctx.basis)).epsilon(1e-12));
      }
    }
  }
  SUBCASE("agrees with finite differences of V along the transported field") {
    const double h = 1e-5;
    for (int i = 0; i < 20; ++i) {
      const double t = rng.uniform();
      const GroupElement w = random_group_element(ctx.sys.basis(), rng);
      const RVec a = feedback_a(ctx, t, w);
      const GroupElement xr = ctx.plan.reference(t);
      for (int k = 0; k < ctx.sys.channels(); ++k) {
        const AlgebraElement y = conjugate(xr, ctx.sys.generator(k));
        const double fd = (lyapunov_V(w * expm(y * h), ctx.basis) -
                           lyapunov_V(w * expm(y * -h), ctx.basis)) /
                          (2.0 * h);
        CHECK(a(k) == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
  SUBCASE("T-periodic in t") {
    for (int i = 0; i < 25; ++i) {
      const double t = rng.uniform();
      const GroupElement w = random_group_element(ctx.sys.basis(), rng);
      const RVec a1 = feedback_a(ctx, t, w);
      const RVec a2 = feedback_a(ctx, t + ctx.plan.period(), w);
      CHECK((a1 - a2).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("body_velocity_W") {
  const FeedbackContext ctx = make_ctx("so3-e1e2");
  SplitMix64 rng(47);

  SUBCASE("vanishes at the identity") {
    CHECK(body_velocity_W(ctx, 0.3, GroupElement::identity(kSo3)).norm() <
          1e-12);
  }
  SUBCASE("dV along W equals sum of squares of a_k (non-negative)") {
    for (int i = 0; i < 25; ++i) {
      const double t = rng.uniform();
      const GroupElement w = random_group_element(ctx.sys.basis(), rng);
      const RVec a = feedback_a(ctx, t, w);
      const AlgebraElement xi = body_velocity_W(ctx, t, w);
      const double dv = dV_directional(w, xi, ctx.basis);
      CHECK(dv == doctest::Approx(a.squaredNorm()).epsilon(1e-10));
      CHECK(dv >= -1e-12);
    }
  }
  SUBCASE("single channel: xi is proportional to the transported generator") {
    const GroupSpec su2{GroupFamily::SU, 2};
    const AlgebraBasis basis = standard_basis(su2);
    const ControlSystem sys(su2, basis, {basis[0]});
    const ReferencePlan plan =
        build_reference_plan(sys, GroupElement::identity(su2), 1.0);
    const FeedbackContext mono = FeedbackContext::make(sys, plan);
    for (int i = 0; i < 10; ++i) {
      const double t = rng.uniform();
      const GroupElement w = random_group_element(basis, rng);
      const AlgebraElement xi = body_velocity_W(mono, t, w);
      const RVec a = feedback_a(mono, t, w);
      const AlgebraElement y = conjugate(plan.reference(t), sys.generator(0));
      CHECK((xi.mat() - a(0) * y.mat()).norm() < 1e-12);
    }
  }
}

TEST_CASE("critical probe symmetries (inversion and conjugation)") {
  const AlgebraBasis su3 = standard_basis(kSu3);
  SplitMix64 rng(53);
  for (int i = 0; i < 100; ++i) {
    const GroupElement x = random_group_element(su3, rng);
    const GroupElement y = random_group_element(su3, rng);
    const AlgebraElement v = random_algebra_element(su3, rng);
    // inversion antisymmetry
    CHECK(std::abs(adjoint_probe(x.inverse(), v, su3) +
                   adjoint_probe(x, v, su3)) < 1e-10);
    // conjugation: probe(y x y^-1, X) = probe(x, Ad(y)^-1 X)
    CHECK(std::abs(adjoint_probe(y * x * y.inverse(), v, su3) -
                   adjoint_probe(x, conjugate(y.inverse(), v), su3)) < 1e-10);
  }
}

TEST_CASE("recover_tracking") {
  const FeedbackContext ctx = make_ctx("so3-e1e2");
  const int m = ctx.sys.channels();

  SUBCASE("w = e reproduces the reference and its controls") {
    std::vector<TraceSample> w_trace;
    for (int i = 0; i <= 40; ++i) {
      const double t = 2.0 * i / 40.0;
      w_trace.emplace_back(t, GroupElement::identity(kSo3), RVec::Zero(m),
                           lyapunov_V(GroupElement::identity(kSo3), ctx.basis));
    }
    const auto tracked = recover_tracking(ctx, w_trace);
    REQUIRE(tracked.size() == w_trace.size());
    for (size_t i = 0; i < tracked.size(); ++i) {
      const double t = tracked[i].t;
      CHECK((tracked[i].x.mat() - ctx.plan.reference(t).mat()).norm() <
            1e-14);
      CHECK((tracked[i].u - ctx.plan.controls(t)).cwiseAbs().maxCoeff() <
            1e-14);
    }
  }
  SUBCASE("x(0) = w(0) x_infty and the tracking error is w itself") {
    SplitMix64 rng(59);
    for (int i = 0; i < 10; ++i) {
      const GroupElement w0 = random_group_element(ctx.sys.basis(), rng);
      std::vector<TraceSample> w_trace;
      w_trace.emplace_back(0.0, w0, feedback_a(ctx, 0.0, w0),
                           lyapunov_V(w0, ctx.basis));
      const auto tracked = recover_tracking(ctx, w_trace);
      CHECK((tracked[0].x.mat() - (w0 * ctx.plan.x_infty()).mat()).norm() <
            1e-14);
      // err(x, x_r) = ||w - I|| by right-invariance
      const Mat xr = ctx.plan.reference(0.0).mat();
      CHECK((tracked[0].x.mat() * xr.adjoint() - w0.mat()).norm() < 1e-14);
    }
  }
}

TEST_CASE("FeedbackContext basis selection") {
  SUBCASE("semisimple groups get a Killing-orthonormal basis") {
    const FeedbackContext ctx = make_ctx("su2-f3f1");
    CHECK((ctx.basis.killing() + RMat::Identity(3, 3)).norm() < 1e-10);
  }
  SUBCASE("u(2) keeps the reference basis") {
    const FeedbackContext ctx = make_ctx("u2-f3f1");
    const AlgebraBasis u2 = standard_basis(GroupSpec{GroupFamily::U, 2});
    CHECK(ctx.basis.size() == 4);
    for (int i = 0; i < 4; ++i)
      CHECK((ctx.basis[i].mat() - u2[i].mat()).norm() == 0.0);
  }
}
