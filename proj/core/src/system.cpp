#include "geotrack/system.hpp"

#include <cmath>

#include "geotrack/errors.hpp"

namespace geotrack {

ControlSystem::ControlSystem(GroupSpec spec, AlgebraBasis basis,
                             std::vector<AlgebraElement> generators)
    : spec_(spec), basis_(std::move(basis)), generators_(std::move(generators)) {
  if (!(basis_.spec() == spec_)) throw Error("ControlSystem: basis spec mismatch");
  const int m = channels();
  if (m < 1) throw Error("ControlSystem: needs at least one generator");
  if (m > spec_.algebra_dim())
    throw Error("ControlSystem: more generators than dim g");
  for (const auto& x : generators_) {
    if (!(x.spec() == spec_)) throw Error("ControlSystem: generator spec mismatch");
    if (x.norm() < 1e-12) throw Error("ControlSystem: zero generator");
  }
}

namespace {

// Orthonormal column basis of the span of `cols` (whitened coordinates),
// with the rank decided at kTolRank relative to the top singular value.
RMat orthonormal_span(const RMat& cols) {
  Eigen::JacobiSVD<RMat> svd(cols, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= 0.0) return RMat(cols.rows(), 0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > kTolRank * s(0)) ++r;
  return svd.matrixU().leftCols(r);
}

}  // namespace

std::pair<bool, int> check_bracket_generating(const ControlSystem& sys) {
  const AlgebraBasis& basis = sys.basis();
  const int n = basis.size();
  const int m = sys.channels();

  RMat span(n, m);
  for (int k = 0; k < m; ++k)
    span.col(k) = basis.whiten(basis.coordinates(sys.generator(k)));
  RMat q = orthonormal_span(span);

  for (int round = 0; round < n; ++round) {
    const int r = static_cast<int>(q.cols());
    if (r == n) break;
    RMat grown(n, r + r * m);
    grown.leftCols(r) = q;
    // Unwhiten -> bracket with every generator -> whiten back.
    for (int i = 0; i < r; ++i) {
      const AlgebraElement e = basis.combine(basis.unwhiten(RVec(q.col(i))));
      for (int k = 0; k < m; ++k)
        grown.col(r + i * m + k) =
            basis.whiten(basis.coordinates(bracket(e, sys.generator(k))));
    }
    RMat q_next = orthonormal_span(grown);
    if (q_next.cols() == q.cols()) {
      q = std::move(q_next);
      break;
    }
    q = std::move(q_next);
  }
  const int rank = static_cast<int>(q.cols());
  return {rank == n, rank};
}

std::pair<bool, double> check_semisimple(const ControlSystem& sys) {
  const RMat& killing = sys.basis().killing();
  Eigen::SelfAdjointEigenSolver<RMat> es(killing);
  const RVec ev = es.eigenvalues().cwiseAbs();
  const double min_abs = ev.minCoeff();
  const double max_abs = ev.maxCoeff();
  const int n = sys.basis().size();
  return {min_abs > n * kTolRank * max_abs, min_abs};
}

std::pair<bool, int> check_reg_sys(const ControlSystem& sys, int pivot) {
  const AlgebraBasis& basis = sys.basis();
  const int n = basis.size();
  const int m = sys.channels();
  if (pivot < 0 || pivot >= m) throw Error("check_reg_sys: pivot out of range");

  const RMat ad_pivot = ad_matrix(sys.generator(pivot), basis).mat;
  std::vector<RVec> cols;
  cols.reserve(static_cast<size_t>(m) * (n + 1));
  for (int k = 0; k < m; ++k) {
    RVec c = basis.coordinates(sys.generator(k));
    cols.push_back(basis.whiten(c));
    for (int p = 0; p < n; ++p) {
      c = ad_pivot * c;
      cols.push_back(basis.whiten(c));
    }
  }
  RMat stacked(n, static_cast<Eigen::Index>(cols.size()));
  for (size_t i = 0; i < cols.size(); ++i)
    stacked.col(static_cast<Eigen::Index>(i)) = cols[i];
  const int rank = numeric::rank_svd(stacked, kTolRank);
  return {rank == n, rank};
}

SystemReport check_system(const ControlSystem& sys, int pivot) {
  SystemReport rep;
  std::tie(rep.bracket_generating, rep.bracket_rank) =
      check_bracket_generating(sys);
  std::tie(rep.semisimple, rep.killing_min_abs_eig) = check_semisimple(sys);
  std::tie(rep.reg_sys, rep.reg_sys_rank) = check_reg_sys(sys, pivot);
  return rep;
}

namespace {

ControlSystem preset_so3_e1e2() {
  GroupSpec spec{GroupFamily::SO, 3};
  AlgebraBasis basis = standard_basis(spec);
  return ControlSystem(spec, basis, {basis[0], basis[1]});
}

ControlSystem preset_su2_f3f1() {
  GroupSpec spec{GroupFamily::SU, 2};
  AlgebraBasis basis = standard_basis(spec);
  // standard_basis(su(2)) orders the Pauli set as {F1, F2, F3}.
  return ControlSystem(spec, basis, {basis[2], basis[0]});
}

ControlSystem preset_su3_2gen() {
  GroupSpec spec{GroupFamily::SU, 3};
  AlgebraBasis basis = standard_basis(spec);
  const Cplx mihalf(0.0, -0.5);
  // X1: regular Cartan element (distinct ad eigenvalue gaps);
  // X2: off-diagonal content in every root plane plus a second Cartan
  // direction, so the ad(X1)-orbit of X2 together with X1 spans su(3).
  Mat h = Mat::Zero(3, 3);
  h(0, 0) = 1.0;
  h(1, 1) = -1.0;
  Mat h8 = Mat::Zero(3, 3);
  const double s3 = 1.0 / std::sqrt(3.0);
  h8(0, 0) = s3;
  h8(1, 1) = s3;
  h8(2, 2) = -2.0 * s3;
  Mat x1 = mihalf * (h + 0.5 * h8);
  Mat off = Mat::Zero(3, 3);
  off(0, 1) = 1.0;
  off(1, 0) = 1.0;
  off(0, 2) = 1.0;
  off(2, 0) = 1.0;
  off(1, 2) = 1.0;
  off(2, 1) = 1.0;
  Mat x2 = mihalf * (off + h8);
  return ControlSystem(spec, basis,
                       {AlgebraElement(spec, std::move(x1)),
                        AlgebraElement(spec, std::move(x2))});
}

ControlSystem preset_u2_f3f1() {
  GroupSpec spec{GroupFamily::U, 2};
  AlgebraBasis basis = standard_basis(spec);
  return ControlSystem(spec, basis, {basis[2], basis[0]});
}

}  // namespace

ControlSystem make_preset_system(const std::string& name) {
  if (name == "so3-e1e2") return preset_so3_e1e2();
  if (name == "su2-f3f1") return preset_su2_f3f1();
  if (name == "su3-gellmann-2gen") return preset_su3_2gen();
  if (name == "u2-f3f1") return preset_u2_f3f1();
  throw ConfigError("unknown generator preset: " + name);
}

}  // namespace geotrack
