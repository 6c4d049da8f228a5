#include "geotrack/group.hpp"

#include <cmath>

#include "geotrack/errors.hpp"

namespace geotrack {

std::string to_string(GroupFamily family) {
  switch (family) {
    case GroupFamily::SU: return "SU";
    case GroupFamily::SO: return "SO";
    case GroupFamily::U: return "U";
  }
  return "?";
}

int GroupSpec::algebra_dim() const {
  switch (family) {
    case GroupFamily::SU: return d * d - 1;
    case GroupFamily::SO: return d * (d - 1) / 2;
    case GroupFamily::U: return d * d;
  }
  return 0;
}

namespace {

void require_square(const Mat& m, const GroupSpec& spec, const char* what) {
  if (m.rows() != spec.d || m.cols() != spec.d)
    throw Error(std::string(what) + ": expected " + std::to_string(spec.d) +
                "x" + std::to_string(spec.d) + " matrix");
  if (!m.allFinite()) throw Error(std::string(what) + ": non-finite entries");
}

double max_imag(const Mat& m) { return m.imag().cwiseAbs().maxCoeff(); }

}  // namespace

GroupElement::GroupElement(GroupSpec spec, Mat mat)
    : spec_(spec), mat_(std::move(mat)) {
  require_square(mat_, spec_, "GroupElement");
  const Mat gram = mat_.adjoint() * mat_;
  const double unitary_defect =
      (gram - Mat::Identity(spec_.d, spec_.d)).norm();
  if (unitary_defect > kTolGroup)
    throw Error("GroupElement: not unitary (defect " +
                std::to_string(unitary_defect) + ")");
  if (spec_.family != GroupFamily::U) {
    const Cplx det = mat_.determinant();
    if (std::abs(det - Cplx(1.0, 0.0)) > kTolGroup)
      throw Error("GroupElement: determinant away from 1");
  }
  if (spec_.family == GroupFamily::SO && max_imag(mat_) > kTolGroup)
    throw Error("GroupElement: SO element must be real");
}

GroupElement GroupElement::identity(GroupSpec spec) {
  return GroupElement(spec, Mat::Identity(spec.d, spec.d));
}

GroupElement GroupElement::inverse() const {
  return GroupElement(spec_, mat_.adjoint());
}

GroupElement GroupElement::operator*(const GroupElement& rhs) const {
  if (!(spec_ == rhs.spec_)) throw Error("GroupElement: spec mismatch in *");
  return GroupElement(spec_, mat_ * rhs.mat_);
}

AlgebraElement::AlgebraElement(GroupSpec spec, Mat mat)
    : spec_(spec), mat_(std::move(mat)) {
  require_square(mat_, spec_, "AlgebraElement");
  const double scale = std::max(1.0, mat_.norm());
  if ((mat_.adjoint() + mat_).norm() > kTolAlg * scale)
    throw Error("AlgebraElement: not skew-Hermitian");
  if (spec_.family == GroupFamily::SU &&
      std::abs(mat_.trace()) > kTolAlg * scale)
    throw Error("AlgebraElement: su element must be traceless");
  if (spec_.family == GroupFamily::SO && max_imag(mat_) > kTolAlg * scale)
    throw Error("AlgebraElement: so element must be real");
}

AlgebraElement AlgebraElement::zero(GroupSpec spec) {
  return AlgebraElement(spec, Mat::Zero(spec.d, spec.d));
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& rhs) const {
  if (!(spec_ == rhs.spec_)) throw Error("AlgebraElement: spec mismatch in +");
  return AlgebraElement(spec_, mat_ + rhs.mat_);
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& rhs) const {
  if (!(spec_ == rhs.spec_)) throw Error("AlgebraElement: spec mismatch in -");
  return AlgebraElement(spec_, mat_ - rhs.mat_);
}

AlgebraElement AlgebraElement::operator*(double s) const {
  return AlgebraElement(spec_, mat_ * s);
}

AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b) {
  if (!(a.spec() == b.spec())) throw Error("bracket: spec mismatch");
  return AlgebraElement(a.spec(), a.mat() * b.mat() - b.mat() * a.mat());
}

GroupElement expm(const AlgebraElement& a) {
  Mat e = numeric::expm_pade(a.mat());
  if (a.spec().family == GroupFamily::SO) e = e.real().cast<Cplx>();
  return GroupElement(a.spec(), std::move(e));
}

AlgebraElement conjugate(const GroupElement& x, const AlgebraElement& a) {
  if (!(x.spec() == a.spec())) throw Error("conjugate: spec mismatch");
  return AlgebraElement(x.spec(), x.mat() * a.mat() * x.mat().adjoint());
}

GroupElement project_to_group(const Mat& x, GroupSpec spec) {
  if (x.rows() != spec.d || x.cols() != spec.d || !x.allFinite())
    throw Error("project_to_group: bad input matrix");
  Eigen::JacobiSVD<Mat> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues().minCoeff() < 1e-6)
    throw Error("project_to_group: matrix is (near) singular");

  Mat u = svd.matrixU() * svd.matrixV().adjoint();
  switch (spec.family) {
    case GroupFamily::U:
      break;
    case GroupFamily::SU: {
      // det(u) lies on the unit circle; divide out the phase spread over d.
      const Cplx det = u.determinant();
      const double theta = std::arg(det);
      u *= std::exp(Cplx(0.0, -theta / spec.d));
      break;
    }
    case GroupFamily::SO: {
      RMat ur = u.real();
      if (ur.determinant() < 0.0) {
        // Flip the direction of least stretch.
        Eigen::JacobiSVD<RMat> rsvd(ur, Eigen::ComputeFullU |
                                            Eigen::ComputeFullV);
        RMat d = RMat::Identity(spec.d, spec.d);
        d(spec.d - 1, spec.d - 1) = -1.0;
        ur = rsvd.matrixU() * d * rsvd.matrixV().transpose();
      }
      u = ur.cast<Cplx>();
      break;
    }
  }

  if ((u - x).norm() > 0.5)
    throw Error("project_to_group: input too far from the manifold");
  return GroupElement(spec, std::move(u));
}

}  // namespace geotrack
