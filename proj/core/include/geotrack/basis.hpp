#pragma once

#include <vector>

#include "geotrack/group.hpp"
#include "geotrack/rng.hpp"

namespace geotrack {

enum class AdjointKind { Ad, ad };

/// Coordinate matrix of Ad(x) or ad(X) in a fixed AlgebraBasis.
struct AdjointMatrix {
  RMat mat;
  AdjointKind kind = AdjointKind::ad;
};

/// An ordered, linearly independent list of algebra elements with cached
/// structure data. Usually a full basis of g; a closed subalgebra (e.g. an
/// abelian one) is also accepted, which is enough for Killing-form probes.
///
/// Coordinates are extracted against the reference inner product
/// <A,B> = Re tr(A* B), which is Ad-invariant on compact matrix groups.
class AlgebraBasis {
 public:
  AlgebraBasis(GroupSpec spec, std::vector<AlgebraElement> elems);

  const GroupSpec& spec() const { return spec_; }
  int size() const { return static_cast<int>(elems_.size()); }
  const AlgebraElement& operator[](int i) const { return elems_[i]; }
  const std::vector<AlgebraElement>& elems() const { return elems_; }

  const RMat& gram_ref() const { return gram_; }
  const RMat& killing() const { return killing_; }

  /// Coordinates of an element that lies in the span; throws if it does not.
  RVec coordinates(const AlgebraElement& a) const;

  /// Linear combination sum_i c_i E_i.
  AlgebraElement combine(const RVec& coords) const;

  /// Coordinates mapped to an orthonormal frame of the reference inner
  /// product (y = L^T c with gram = L L^T), so Euclidean geometry on the
  /// result matches <.,.> on the algebra.
  RVec whiten(const RVec& coords) const;
  RVec unwhiten(const RVec& y) const;

 private:
  GroupSpec spec_;
  std::vector<AlgebraElement> elems_;
  RMat gram_;
  Eigen::LLT<RMat> gram_llt_;
  RMat killing_;
};

/// ad(A): column j holds the coordinates of [A, E_j].
AdjointMatrix ad_matrix(const AlgebraElement& a, const AlgebraBasis& basis);

/// Ad(x): column j holds the coordinates of x E_j x^{-1}.
AdjointMatrix Ad_matrix(const GroupElement& x, const AlgebraBasis& basis);

/// Killing form B_ij = tr(ad(E_i) ad(E_j)); symmetric, negative semidefinite.
RMat killing_gram(const AlgebraBasis& basis);

/// Gram-Schmidt against -B. Requires a negative definite Killing form
/// (semisimple algebra); throws otherwise.
AlgebraBasis orthonormalize_killing(const AlgebraBasis& basis);

/// The standard basis of the full algebra for a group spec:
///   SO(d): elementary rotations E_ij;
///   SU(d): generalized Gell-Mann generators scaled by -i/2;
///   U(d):  the SU(d) set plus the central element iI.
AlgebraBasis standard_basis(GroupSpec spec);

/// Seeded random sampling used by tests, verify runs and basin probes.
AlgebraElement random_algebra_element(const AlgebraBasis& basis,
                                      SplitMix64& rng);
AlgebraElement random_unit_algebra_element(const AlgebraBasis& basis,
                                           SplitMix64& rng);
GroupElement random_group_element(const AlgebraBasis& basis, SplitMix64& rng);

}  // namespace geotrack
