#include "geotrack/basis.hpp"

#include <cmath>

#include "geotrack/errors.hpp"

namespace geotrack {

namespace {

double inner_ref(const Mat& a, const Mat& b) {
  return (a.adjoint() * b).trace().real();
}

}  // namespace

AlgebraBasis::AlgebraBasis(GroupSpec spec, std::vector<AlgebraElement> elems)
    : spec_(spec), elems_(std::move(elems)) {
  const int n = size();
  if (n < 1) throw Error("AlgebraBasis: empty element list");
  if (n > spec_.algebra_dim())
    throw Error("AlgebraBasis: more elements than dim g");
  for (const auto& e : elems_)
    if (!(e.spec() == spec_)) throw Error("AlgebraBasis: spec mismatch");

  gram_ = RMat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      gram_(i, j) = gram_(j, i) = inner_ref(elems_[i].mat(), elems_[j].mat());

  // Independence: the Gram spectrum doubles as the singular spectrum of the
  // coordinate matrix.
  Eigen::SelfAdjointEigenSolver<RMat> es(gram_);
  const RVec ev = es.eigenvalues();
  if (ev.minCoeff() <= 0.0 ||
      std::sqrt(ev.minCoeff()) <= kTolRank * std::sqrt(ev.maxCoeff()))
    throw Error("AlgebraBasis: elements are (near) linearly dependent");
  gram_llt_ = Eigen::LLT<RMat>(gram_);

  killing_ = RMat::Zero(n, n);
  std::vector<RMat> ads;
  ads.reserve(n);
  for (int i = 0; i < n; ++i) {
    RMat ad_i(n, n);
    for (int j = 0; j < n; ++j)
      ad_i.col(j) = coordinates(bracket(elems_[i], elems_[j]));
    ads.push_back(std::move(ad_i));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      killing_(i, j) = killing_(j, i) =
          numeric::trace_product(ads[i], ads[j]);
}

RVec AlgebraBasis::coordinates(const AlgebraElement& a) const {
  if (!(a.spec() == spec_)) throw Error("coordinates: spec mismatch");
  const int n = size();
  RVec rhs(n);
  for (int i = 0; i < n; ++i) rhs(i) = inner_ref(elems_[i].mat(), a.mat());
  RVec c = gram_llt_.solve(rhs);
  // The solve projects onto the span; reject elements that are not in it.
  Mat recon = Mat::Zero(spec_.d, spec_.d);
  for (int i = 0; i < n; ++i) recon += c(i) * elems_[i].mat();
  const double resid = (recon - a.mat()).norm();
  if (resid > 1e-8 * (1.0 + a.mat().norm()))
    throw Error("coordinates: element outside the basis span");
  return c;
}

AlgebraElement AlgebraBasis::combine(const RVec& coords) const {
  if (coords.size() != size()) throw Error("combine: coordinate size mismatch");
  Mat m = Mat::Zero(spec_.d, spec_.d);
  for (int i = 0; i < size(); ++i) m += coords(i) * elems_[i].mat();
  return AlgebraElement(spec_, std::move(m));
}

RVec AlgebraBasis::whiten(const RVec& coords) const {
  return gram_llt_.matrixL().transpose() * coords;
}

RVec AlgebraBasis::unwhiten(const RVec& y) const {
  return gram_llt_.matrixU().solve(y);
}

AdjointMatrix ad_matrix(const AlgebraElement& a, const AlgebraBasis& basis) {
  if (!(a.spec() == basis.spec())) throw Error("ad_matrix: spec mismatch");
  const int n = basis.size();
  RMat m(n, n);
  for (int j = 0; j < n; ++j)
    m.col(j) = basis.coordinates(bracket(a, basis[j]));
  return AdjointMatrix{std::move(m), AdjointKind::ad};
}

AdjointMatrix Ad_matrix(const GroupElement& x, const AlgebraBasis& basis) {
  if (!(x.spec() == basis.spec())) throw Error("Ad_matrix: spec mismatch");
  const int n = basis.size();
  RMat m(n, n);
  for (int j = 0; j < n; ++j)
    m.col(j) = basis.coordinates(conjugate(x, basis[j]));
  return AdjointMatrix{std::move(m), AdjointKind::Ad};
}

RMat killing_gram(const AlgebraBasis& basis) { return basis.killing(); }

AlgebraBasis orthonormalize_killing(const AlgebraBasis& basis) {
  const int n = basis.size();
  const RMat neg_b = -basis.killing();
  Eigen::SelfAdjointEigenSolver<RMat> es(neg_b);
  if (es.eigenvalues().minCoeff() <=
      n * kTolRank * std::max(1.0, es.eigenvalues().maxCoeff()))
    throw Error("orthonormalize_killing: Killing form degenerate");

  // Gram-Schmidt against -B == columns of L^{-T} for -B = L L^T.
  Eigen::LLT<RMat> llt(neg_b);
  RMat coeff =
      llt.matrixL().transpose().solve(RMat::Identity(n, n));
  std::vector<AlgebraElement> out;
  out.reserve(n);
  for (int j = 0; j < n; ++j) {
    Mat m = Mat::Zero(basis.spec().d, basis.spec().d);
    for (int i = 0; i < n; ++i) m += coeff(i, j) * basis[i].mat();
    out.emplace_back(basis.spec(), std::move(m));
  }
  return AlgebraBasis(basis.spec(), std::move(out));
}

namespace {

std::vector<AlgebraElement> su_generators(GroupSpec spec) {
  const int d = spec.d;
  const Cplx mihalf(0.0, -0.5);
  std::vector<AlgebraElement> out;
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      Mat sx = Mat::Zero(d, d);
      sx(j, k) = 1.0;
      sx(k, j) = 1.0;
      out.emplace_back(spec, Mat(mihalf * sx));
      Mat sy = Mat::Zero(d, d);
      sy(j, k) = Cplx(0.0, -1.0);
      sy(k, j) = Cplx(0.0, 1.0);
      out.emplace_back(spec, Mat(mihalf * sy));
    }
  }
  for (int l = 1; l < d; ++l) {
    Mat h = Mat::Zero(d, d);
    const double scale = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int i = 0; i < l; ++i) h(i, i) = scale;
    h(l, l) = -scale * l;
    out.emplace_back(spec, Mat(mihalf * h));
  }
  return out;
}

}  // namespace

AlgebraBasis standard_basis(GroupSpec spec) {
  if (spec.d < 2) throw Error("standard_basis: d must be >= 2");
  switch (spec.family) {
    case GroupFamily::SO: {
      // E_ij ordered so that for d = 3 we get [E1, E2] = E3.
      std::vector<AlgebraElement> out;
      const int d = spec.d;
      if (d == 3) {
        for (int k = 0; k < 3; ++k) {
          Mat m = Mat::Zero(3, 3);
          const int i = (k + 1) % 3, j = (k + 2) % 3;
          m(i, j) = -1.0;
          m(j, i) = 1.0;
          out.emplace_back(spec, std::move(m));
        }
      } else {
        for (int i = 0; i < d; ++i)
          for (int j = i + 1; j < d; ++j) {
            Mat m = Mat::Zero(d, d);
            m(i, j) = -1.0;
            m(j, i) = 1.0;
            out.emplace_back(spec, std::move(m));
          }
      }
      return AlgebraBasis(spec, std::move(out));
    }
    case GroupFamily::SU:
      return AlgebraBasis(spec, su_generators(spec));
    case GroupFamily::U: {
      auto elems = su_generators(spec);
      Mat center = Cplx(0.0, 1.0) * Mat::Identity(spec.d, spec.d);
      elems.emplace_back(spec, std::move(center));
      return AlgebraBasis(spec, std::move(elems));
    }
  }
  throw Error("standard_basis: unknown family");
}

AlgebraElement random_algebra_element(const AlgebraBasis& basis,
                                      SplitMix64& rng) {
  RVec c(basis.size());
  for (int i = 0; i < basis.size(); ++i) c(i) = rng.gaussian();
  return basis.combine(c);
}

AlgebraElement random_unit_algebra_element(const AlgebraBasis& basis,
                                           SplitMix64& rng) {
  AlgebraElement a = random_algebra_element(basis, rng);
  const double n = a.norm();
  if (n < 1e-12) return random_unit_algebra_element(basis, rng);
  return a * (1.0 / n);
}

GroupElement random_group_element(const AlgebraBasis& basis, SplitMix64& rng) {
  // Two exponential factors give decent coverage away from one-parameter
  // subgroups.
  const AlgebraElement a = random_algebra_element(basis, rng) * 0.7;
  const AlgebraElement b = random_algebra_element(basis, rng) * 0.7;
  return expm(a) * expm(b);
}

}  // namespace geotrack
