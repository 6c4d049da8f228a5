#include <doctest.h>

#include <cmath>

#include "geotrack/basis.hpp"
#include "geotrack/errors.hpp"
#include "geotrack/rng.hpp"

using namespace geotrack;

namespace {

const GroupSpec kSo3{GroupFamily::SO, 3};
const GroupSpec kSu2{GroupFamily::SU, 2};
const GroupSpec kSu3{GroupFamily::SU, 3};
const GroupSpec kU2{GroupFamily::U, 2};

// Independent coordinate oracle: least squares on the vectorized matrices
// (re and im parts stacked), no Gram solve involved.
RVec lsq_coordinates(const AlgebraBasis& basis, const Mat& target) {
  const int d = basis.spec().d;
  const int n = basis.size();
  RMat a(2 * d * d, n);
  for (int j = 0; j < n; ++j) {
    const Mat& e = basis[j].mat();
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        a(r * d + c, j) = e(r, c).real();
        a(d * d + r * d + c, j) = e(r, c).imag();
      }
  }
  RVec b(2 * d * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      b(r * d + c) = target(r, c).real();
      b(d * d + r * d + c) = target(r, c).imag();
    }
  return a.colPivHouseholderQr().solve(b);
}

// Brute-force ad matrix: bracket each basis element, coordinates by the
// least-squares oracle.
RMat bruteforce_ad(const AlgebraElement& x, const AlgebraBasis& basis) {
  RMat m(basis.size(), basis.size());
  for (int j = 0; j < basis.size(); ++j)
    m.col(j) = lsq_coordinates(basis, bracket(x, basis[j]).mat());
  return m;
}

}  // namespace

TEST_CASE("coordinates round-trip and reject out-of-span elements") {
  const AlgebraBasis su3 = standard_basis(kSu3);
  SplitMix64 rng(3);
  for (int i = 0; i < 20; ++i) {
    RVec c(su3.size());
    for (int k = 0; k < su3.size(); ++k) c(k) = rng.gaussian();
    const RVec back = su3.coordinates(su3.combine(c));
    CHECK((back - c).norm() < 1e-12 * std::max(1.0, c.norm()));
  }

  // A sub-basis must be bracket-closed (structure data needs it): {F1, F2}
  // brackets out of its own span and is rejected outright.
  const AlgebraBasis su2 = standard_basis(kSu2);
  CHECK_THROWS_AS(AlgebraBasis(kSu2, {su2[0], su2[1]}), Error);

  // su(2) viewed inside u(2) is closed; the central iI is outside its span.
  std::vector<AlgebraElement> su_in_u;
  for (int k = 0; k < 3; ++k) su_in_u.emplace_back(kU2, su2[k].mat());
  const AlgebraBasis embedded(kU2, su_in_u);
  const AlgebraElement central(kU2, Mat(Cplx(0, 1) * Mat::Identity(2, 2)));
  CHECK_THROWS_AS(embedded.coordinates(central), Error);
}

TEST_CASE("ad_matrix") {
  const AlgebraBasis so3 = standard_basis(kSo3);
  SUBCASE("ad(0) = 0") {
    const RMat z = ad_matrix(AlgebraElement::zero(kSo3), so3).mat;
    CHECK(z.norm() == 0.0);
  }
  SUBCASE("so(3) is its own adjoint: ad(E1) equals E1") {
    const RMat ad1 = ad_matrix(so3[0], so3).mat;
    CHECK((ad1 - so3[0].mat().real()).norm() < 1e-14);
    CHECK((ad1 - bruteforce_ad(so3[0], so3)).norm() < 1e-13);
  }
  SUBCASE("matches the brute-force oracle on random elements") {
    const AlgebraBasis su3 = standard_basis(kSu3);
    SplitMix64 rng(5);
    for (int i = 0; i < 10; ++i) {
      const AlgebraElement a = random_algebra_element(su3, rng);
      CHECK((ad_matrix(a, su3).mat - bruteforce_ad(a, su3)).norm() < 1e-10);
    }
  }
  SUBCASE("ad is traceless (100 random elements)") {
    const AlgebraBasis su3 = standard_basis(kSu3);
    SplitMix64 rng(17);
    for (int i = 0; i < 100; ++i) {
      const AlgebraElement a = random_algebra_element(su3, rng);
      const AdjointMatrix ad_a = ad_matrix(a, su3);
      CHECK(ad_a.kind == AdjointKind::ad);
      CHECK(std::abs(ad_a.mat.trace()) < 1e-10);
    }
  }
}

TEST_CASE("Ad_matrix") {
  const AlgebraBasis so3 = standard_basis(kSo3);
  const AlgebraBasis su2 = standard_basis(kSu2);
  SplitMix64 rng(23);

  SUBCASE("Ad(e) = id") {
    const RMat ad_e = Ad_matrix(GroupElement::identity(kSo3), so3).mat;
    CHECK((ad_e - RMat::Identity(3, 3)).norm() < 1e-14);
  }
  SUBCASE("Ad(exp A) = exp(ad A)") {
    for (int i = 0; i < 25; ++i) {
      const AlgebraElement a = random_algebra_element(su2, rng);
      const RMat lhs = Ad_matrix(expm(a), su2).mat;
      const RMat rhs =
          numeric::expm_pade(ad_matrix(a, su2).mat.cast<Cplx>()).real();
      CHECK((lhs - rhs).norm() < 1e-10);
    }
  }
  SUBCASE("Ad is a group homomorphism") {
    for (int i = 0; i < 25; ++i) {
      const GroupElement x = random_group_element(so3, rng);
      const GroupElement y = random_group_element(so3, rng);
      const RMat lhs = Ad_matrix(x * y, so3).mat;
      const RMat rhs = Ad_matrix(x, so3).mat * Ad_matrix(y, so3).mat;
      CHECK((lhs - rhs).norm() < 1e-10);
    }
  }
  SUBCASE("Ad-equivariance of ad") {
    const AlgebraBasis su3 = standard_basis(kSu3);
    for (int i = 0; i < 10; ++i) {
      const GroupElement x = random_group_element(su3, rng);
      const AlgebraElement a = random_algebra_element(su3, rng);
      const RMat ad_x = Ad_matrix(x, su3).mat;
      const RMat lhs = ad_matrix(conjugate(x, a), su3).mat;
      const RMat rhs = ad_x * ad_matrix(a, su3).mat * ad_x.inverse();
      CHECK((lhs - rhs).norm() < 1e-10);
    }
  }
  SUBCASE("tr Ad is basis independent") {
    // Mix the standard basis with a random invertible recombination.
    const int n = su2.size();
    RMat mix = RMat::Identity(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) mix(r, c) += 0.4 * rng.gaussian();
    std::vector<AlgebraElement> mixed;
    for (int j = 0; j < n; ++j) {
      Mat m = Mat::Zero(2, 2);
      for (int i = 0; i < n; ++i) m += mix(i, j) * su2[i].mat();
      mixed.emplace_back(kSu2, m);
    }
    const AlgebraBasis basis2(kSu2, mixed);
    for (int i = 0; i < 25; ++i) {
      const GroupElement x = random_group_element(su2, rng);
      CHECK(Ad_matrix(x, su2).mat.trace() ==
            doctest::Approx(Ad_matrix(x, basis2).mat.trace()).epsilon(1e-10));
    }
  }
  SUBCASE("Ad orthogonal in a Killing-orthonormal basis") {
    const AlgebraBasis ortho = orthonormalize_killing(so3);
    for (int i = 0; i < 25; ++i) {
      const GroupElement x = random_group_element(so3, rng);
      const RMat ad_x = Ad_matrix(x, ortho).mat;
      CHECK((ad_x.transpose() * ad_x - RMat::Identity(3, 3)).norm() < 1e-10);
    }
  }
}

TEST_CASE("killing_gram") {
  SUBCASE("so(3): -2 I") {
    const AlgebraBasis so3 = standard_basis(kSo3);
    CHECK((killing_gram(so3) + 2.0 * RMat::Identity(3, 3)).norm() < 1e-13);
  }
  SUBCASE("su(2): -2 I") {
    const AlgebraBasis su2 = standard_basis(kSu2);
    CHECK((killing_gram(su2) + 2.0 * RMat::Identity(3, 3)).norm() < 1e-13);
  }
  SUBCASE("su(3): -6 x reference Gram") {
    const AlgebraBasis su3 = standard_basis(kSu3);
    CHECK((killing_gram(su3) + 6.0 * su3.gram_ref()).norm() < 1e-12);
  }
  SUBCASE("abelian subalgebra: zero matrix") {
    // Diagonal skew-Hermitian 2x2 matrices commute.
    const AlgebraElement d1(kU2, Mat(Cplx(0, 1) * Mat::Identity(2, 2)));
    Mat m2 = Mat::Zero(2, 2);
    m2(0, 0) = Cplx(0, 1);
    m2(1, 1) = Cplx(0, -1);
    const AlgebraElement d2(kU2, m2);
    const AlgebraBasis abelian(kU2, {d1, d2});
    CHECK(killing_gram(abelian).norm() == 0.0);
  }
  SUBCASE("u(2): zero row/column for the central element") {
    const AlgebraBasis u2 = standard_basis(kU2);
    const RMat b = killing_gram(u2);
    const int last = u2.size() - 1;  // iI is appended last
    CHECK(b.row(last).norm() < 1e-13);
    CHECK(b.col(last).norm() < 1e-13);
    // and the su(2) block is still -2 I
    CHECK((b.topLeftCorner(3, 3) + 2.0 * RMat::Identity(3, 3)).norm() < 1e-12);
  }
  SUBCASE("negative semidefinite and symmetric") {
    const AlgebraBasis u2 = standard_basis(kU2);
    const RMat b = killing_gram(u2);
    CHECK((b - b.transpose()).norm() < 1e-13);
    Eigen::SelfAdjointEigenSolver<RMat> es(b);
    CHECK(es.eigenvalues().maxCoeff() < 1e-12);
  }
}

TEST_CASE("orthonormalize_killing") {
  SUBCASE("so(3) becomes E_k / sqrt(2)") {
    const AlgebraBasis so3 = standard_basis(kSo3);
    const AlgebraBasis ortho = orthonormalize_killing(so3);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int k = 0; k < 3; ++k)
      CHECK((ortho[k].mat() - inv_sqrt2 * so3[k].mat()).norm() < 1e-13);
    CHECK((ortho.killing() + RMat::Identity(3, 3)).norm() < 1e-12);
  }
  SUBCASE("idempotent on an already orthonormal basis") {
    const AlgebraBasis ortho = orthonormalize_killing(standard_basis(kSu3));
    const AlgebraBasis twice = orthonormalize_killing(ortho);
    for (int k = 0; k < ortho.size(); ++k)
      CHECK((twice[k].mat() - ortho[k].mat()).norm() < 1e-12);
  }
  SUBCASE("u(2) is rejected: Killing form degenerate") {
    CHECK_THROWS_WITH_AS(orthonormalize_killing(standard_basis(kU2)),
                         "orthonormalize_killing: Killing form degenerate",
                         Error);
  }
}
