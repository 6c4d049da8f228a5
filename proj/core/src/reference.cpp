#include "geotrack/reference.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "geotrack/errors.hpp"

namespace geotrack {

namespace {

constexpr int kXiNodes = 512;
constexpr double kQuadTol = 1e-12;

// C-infinity step: 0 for s <= 0, 1 for s >= 1.
double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

// Unit bump on [lo, hi]: ramps of width `ramp` on both sides, plateau 1
// in between.
double unit_bump(double t, double lo, double hi, double ramp) {
  if (t <= lo || t >= hi) return 0.0;
  return smooth_step((t - lo) / ramp) * smooth_step((hi - t) / ramp);
}

}  // namespace

double BumpDescriptor::chi(double t) const {
  const double pos = unit_bump(t, pos_lo, pos_hi, ramp);
  const double neg_ramp = 0.2 * (neg_hi - neg_lo);
  const double neg = unit_bump(t, neg_lo, neg_hi, neg_ramp);
  return pos - lobe_scale * neg;
}

ReferencePlan::ReferencePlan(ControlSystem sys, GroupElement x_infty,
                             double period)
    : sys_(std::move(sys)), x_infty_(std::move(x_infty)), period_(period) {
  if (!(x_infty_.spec() == sys_.spec()))
    throw Error("ReferencePlan: x_infty spec mismatch");
  if (!(period_ > 0.0)) throw Error("ReferencePlan: period must be positive");
  const int m = channels();
  if (m < 1) throw Error("ReferencePlan: no channels");

  const double window_len = period_ / m;
  for (int j = 0; j < m; ++j) {
    BumpDescriptor b;
    b.channel = j;
    b.window_lo = j * window_len;
    b.window_hi = (j + 1) * window_len;
    // Inset by 5% per side so the closed support stays inside the open
    // window, then split the core into thirds: positive lobe / gap /
    // negative lobe.
    const double inset = 0.05 * window_len;
    const double core_lo = b.window_lo + inset;
    const double core_hi = b.window_hi - inset;
    const double third = (core_hi - core_lo) / 3.0;
    b.pos_lo = core_lo;
    b.pos_hi = core_lo + third;
    b.neg_lo = core_hi - third;
    b.neg_hi = core_hi;
    b.ramp = 0.2 * third;  // plateau = middle 60% of the first third
    b.lobe_scale = 1.0;
    const double pos_area = numeric::adaptive_simpson(
        [&b](double t) { return unit_bump(t, b.pos_lo, b.pos_hi, b.ramp); },
        b.pos_lo, b.pos_hi, kQuadTol);
    const double neg_ramp = 0.2 * (b.neg_hi - b.neg_lo);
    const double neg_area = numeric::adaptive_simpson(
        [&b, neg_ramp](double t) {
          return unit_bump(t, b.neg_lo, b.neg_hi, neg_ramp);
        },
        b.neg_lo, b.neg_hi, kQuadTol);
    b.lobe_scale = pos_area / neg_area;
    bumps_.push_back(b);
  }

  // Tabulate cumulative integrals of chi_j over the window.
  xi_nodes_.resize(m);
  for (int j = 0; j < m; ++j) {
    const BumpDescriptor& b = bumps_[j];
    auto& nodes = xi_nodes_[j];
    nodes.assign(kXiNodes + 1, 0.0);
    const double dt = (b.window_hi - b.window_lo) / kXiNodes;
    for (int i = 0; i < kXiNodes; ++i) {
      const double lo = b.window_lo + i * dt;
      const double piece = numeric::adaptive_simpson(
          [&b](double t) { return b.chi(t); }, lo, lo + dt, kQuadTol);
      nodes[i + 1] = nodes[i] + piece;
    }
  }

  // Spectral factorization of each generator for exact one-parameter flows:
  // X skew-Hermitian => -iX Hermitian => X = U diag(i mu) U^*.
  for (int k = 0; k < m; ++k) {
    const Mat h = Cplx(0.0, -1.0) * sys_.generator(k).mat();
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    gen_eigvecs_.push_back(es.eigenvectors());
    gen_eigvals_.push_back(es.eigenvalues());
  }
}

RVec ReferencePlan::controls(double t) const {
  const double tp = numeric::mod_period(t, period_);
  RVec u = RVec::Zero(channels());
  for (int j = 0; j < channels(); ++j) {
    const BumpDescriptor& b = bumps_[j];
    if (tp > b.window_lo && tp < b.window_hi) {
      u(j) = b.chi(tp);
      break;  // windows are disjoint
    }
  }
  return u;
}

double ReferencePlan::xi(int j, double t) const {
  if (j < 0 || j >= channels()) throw Error("xi: channel out of range");
  const double tp = numeric::mod_period(t, period_);
  const BumpDescriptor& b = bumps_[j];
  if (tp <= b.window_lo || tp >= b.window_hi) return 0.0;
  const auto& nodes = xi_nodes_[j];
  const double dt = (b.window_hi - b.window_lo) / kXiNodes;
  int i = static_cast<int>((tp - b.window_lo) / dt);
  if (i >= kXiNodes) i = kXiNodes - 1;
  const double lo = b.window_lo + i * dt;
  return nodes[i] + numeric::adaptive_simpson(
                        [&b](double s) { return b.chi(s); }, lo, tp, kQuadTol);
}

GroupElement ReferencePlan::reference(double t) const {
  const double tp = numeric::mod_period(t, period_);
  for (int j = 0; j < channels(); ++j) {
    const BumpDescriptor& b = bumps_[j];
    if (tp > b.window_lo && tp < b.window_hi) {
      const double s = xi(j, t);
      // exp(s X_j) through the cached spectral factors.
      const Mat& u = gen_eigvecs_[j];
      const RVec& mu = gen_eigvals_[j];
      Eigen::VectorXcd phase(mu.size());
      for (Eigen::Index i = 0; i < mu.size(); ++i)
        phase(i) = std::exp(Cplx(0.0, s * mu(i)));
      Mat flow = u * phase.asDiagonal() * u.adjoint();
      if (sys_.spec().family == GroupFamily::SO)
        flow = flow.real().cast<Cplx>();
      return GroupElement(sys_.spec(), x_infty_.mat() * flow);
    }
  }
  return x_infty_;
}

AlgebraElement ReferencePlan::reference_velocity(double t) const {
  const RVec u = controls(t);
  Mat m = Mat::Zero(sys_.spec().d, sys_.spec().d);
  for (int j = 0; j < channels(); ++j)
    if (u(j) != 0.0) m += u(j) * sys_.generator(j).mat();
  return AlgebraElement(sys_.spec(), std::move(m));
}

AlgebraElement ReferencePlan::transported_generator(double t, int k) const {
  return conjugate(reference(t), sys_.generator(k));
}

ReferencePlan build_reference_plan(const ControlSystem& sys,
                                   const GroupElement& x_infty,
                                   double period) {
  return ReferencePlan(sys, x_infty, period);
}

std::pair<bool, int> regular_rank_at(const ReferencePlan& plan,
                                     std::span<const double> times) {
  const AlgebraBasis& basis = plan.system().basis();
  const int n = basis.size();
  const int m = plan.channels();
  RMat rows(static_cast<Eigen::Index>(times.size()) * m, n);
  Eigen::Index r = 0;
  for (double t : times) {
    for (int k = 0; k < m; ++k)
      rows.row(r++) =
          basis.whiten(basis.coordinates(plan.transported_generator(t, k)))
              .transpose();
  }
  const int rank = numeric::rank_svd(rows, kTolRank);
  return {rank == n, rank};
}

std::pair<bool, int> check_regular_rank(const ReferencePlan& plan,
                                        int grid_size) {
  const int n = plan.system().basis().size();
  if (grid_size < plan.channels() * n)
    throw Error("check_regular_rank: grid too small");
  std::vector<double> times(grid_size);
  for (int i = 0; i < grid_size; ++i)
    times[i] = plan.period() * i / grid_size;
  return regular_rank_at(plan, times);
}

void write_controls_csv(const ReferencePlan& plan, const std::string& path,
                        int samples) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path);
  out << "t";
  for (int j = 1; j <= plan.channels(); ++j) out << ",u" << j;
  out << "\n";
  char buf[32];
  for (int i = 0; i <= samples; ++i) {
    const double t = plan.period() * i / samples;
    const RVec u = plan.controls(t);
    std::snprintf(buf, sizeof buf, "%.17g", t);
    out << buf;
    for (int j = 0; j < plan.channels(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", u(j));
      out << "," << buf;
    }
    out << "\n";
  }
}

std::string ReferencePlan::to_json() const {
  nlohmann::json j;
  j["T"] = period_;
  j["m"] = channels();
  nlohmann::json xinf = nlohmann::json::array();
  for (int r = 0; r < sys_.spec().d; ++r)
    for (int c = 0; c < sys_.spec().d; ++c) {
      const Cplx z = x_infty_.mat()(r, c);
      xinf.push_back({z.real(), z.imag()});
    }
  j["x_infty"] = xinf;
  nlohmann::json chans = nlohmann::json::array();
  for (const BumpDescriptor& b : bumps_) {
    chans.push_back({{"channel", b.channel + 1},
                     {"window", {b.window_lo, b.window_hi}},
                     {"plateau", {b.plateau_lo(), b.plateau_hi()}},
                     {"negative_lobe", {b.neg_lo, b.neg_hi}},
                     {"ramp_width", b.ramp},
                     {"lobe_scale", b.lobe_scale}});
  }
  j["channels"] = chans;
  return j.dump(2);
}

void write_plan_json(const ReferencePlan& plan, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path);
  out << plan.to_json() << "\n";
}

}  // namespace geotrack
