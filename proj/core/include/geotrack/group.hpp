#pragma once

#include <string>

#include "geotrack/numeric.hpp"

namespace geotrack {

enum class GroupFamily { SU, SO, U };

std::string to_string(GroupFamily family);

/// Which compact matrix group we are working in: SU(d), SO(d) or U(d),
/// in the defining d x d representation.
struct GroupSpec {
  GroupFamily family = GroupFamily::SU;
  int d = 2;

  /// Dimension n of the Lie algebra.
  int algebra_dim() const;
  bool operator==(const GroupSpec&) const = default;
};

inline constexpr double kTolGroup = 1e-9;
inline constexpr double kTolAlg = 1e-9;
inline constexpr double kTolRank = 1e-8;

/// A point of the group: d x d complex matrix kept unitary (orthogonal and
/// real for SO) to kTolGroup, with unit determinant for SU/SO.
class GroupElement {
 public:
  GroupElement(GroupSpec spec, Mat mat);

  static GroupElement identity(GroupSpec spec);

  const GroupSpec& spec() const { return spec_; }
  const Mat& mat() const { return mat_; }

  GroupElement inverse() const;  // adjoint, since the matrix is unitary
  GroupElement operator*(const GroupElement& rhs) const;

 private:
  GroupSpec spec_;
  Mat mat_;
};

/// A Lie algebra element: skew-Hermitian d x d matrix (real skew-symmetric
/// for SO, traceless for SU) to kTolAlg.
class AlgebraElement {
 public:
  AlgebraElement(GroupSpec spec, Mat mat);

  static AlgebraElement zero(GroupSpec spec);

  const GroupSpec& spec() const { return spec_; }
  const Mat& mat() const { return mat_; }

  double norm() const { return mat_.norm(); }

  AlgebraElement operator+(const AlgebraElement& rhs) const;
  AlgebraElement operator-(const AlgebraElement& rhs) const;
  AlgebraElement operator*(double s) const;

 private:
  GroupSpec spec_;
  Mat mat_;
};

inline AlgebraElement operator*(double s, const AlgebraElement& a) {
  return a * s;
}

/// [A, B] = AB - BA.
AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b);

/// Matrix exponential of an algebra element; lands on the group.
GroupElement expm(const AlgebraElement& a);

/// Conjugation x A x^{-1}; stays in the algebra since x is in the group.
AlgebraElement conjugate(const GroupElement& x, const AlgebraElement& a);

/// Nearest-group-element repair via the polar decomposition, with a
/// determinant phase (SU) or sign (SO) correction. Input must be within
/// Frobenius distance 0.5 of the manifold.
GroupElement project_to_group(const Mat& x, GroupSpec spec);

}  // namespace geotrack
