#pragma once

#include <span>
#include <string>
#include <vector>

#include "geotrack/system.hpp"

namespace geotrack {

/// One channel's smooth bump control u_j^r restricted to its base window
/// J_j^0 = ((j-1)T/m, jT/m). The shape is a unit plateau bump on the first
/// third of the (slightly inset) window and a matching negative lobe on the
/// last third, scaled so the integral over the window vanishes. Ramps are
/// the C-infinity step built from f(t) = exp(-1/t).
struct BumpDescriptor {
  int channel = 0;           // 0-based
  double window_lo = 0.0;    // J_j^0
  double window_hi = 0.0;
  double pos_lo = 0.0;       // support of the positive lobe
  double pos_hi = 0.0;
  double neg_lo = 0.0;       // support of the negative lobe
  double neg_hi = 0.0;
  double ramp = 0.0;         // ramp width r of the positive lobe
  double lobe_scale = 1.0;   // c multiplying the negative lobe

  /// Plateau I_j where chi == 1.
  double plateau_lo() const { return pos_lo + ramp; }
  double plateau_hi() const { return pos_hi - ramp; }

  /// chi_j(t) on one period (no periodic wrap here).
  double chi(double t) const;
};

/// The periodic regular reference: per-channel bump controls u_j^r, their
/// running integrals xi_j, and x_r(t) = x_inf * exp(xi_j(t) X_j) on the
/// channel windows (x_inf elsewhere).
class ReferencePlan {
 public:
  ReferencePlan(ControlSystem sys, GroupElement x_infty, double period);

  double period() const { return period_; }
  int channels() const { return sys_.channels(); }
  const GroupElement& x_infty() const { return x_infty_; }
  const ControlSystem& system() const { return sys_; }
  const BumpDescriptor& bump(int j) const { return bumps_[j]; }

  /// u^r(t): at most one entry is nonzero at any t.
  RVec controls(double t) const;

  /// xi_j(t) = integral of u_j^r from 0 to t mod T.
  double xi(int j, double t) const;

  /// x_r(t).
  GroupElement reference(double t) const;

  /// X_r(t) = sum_j u_j^r(t) X_j, as a curve in the algebra.
  AlgebraElement reference_velocity(double t) const;

  /// Ad(x_r(t)) X_k as an algebra element (conjugation by the reference).
  AlgebraElement transported_generator(double t, int k) const;

  std::string to_json() const;

 private:
  ControlSystem sys_;
  GroupElement x_infty_;
  double period_;
  std::vector<BumpDescriptor> bumps_;
  // Cumulative integral of chi_j tabulated on uniform nodes over the window.
  std::vector<std::vector<double>> xi_nodes_;
  // Spectral factors X_j = U (i mu) U^* for exact one-parameter flows.
  std::vector<Mat> gen_eigvecs_;
  std::vector<RVec> gen_eigvals_;  // mu (real)
};

ReferencePlan build_reference_plan(const ControlSystem& sys,
                                   const GroupElement& x_infty, double period);

/// Rank of the stacked coordinates of Ad(x_r(t)) X_k over the given sample
/// times (regularity of the trajectory when it reaches dim g).
std::pair<bool, int> regular_rank_at(const ReferencePlan& plan,
                                     std::span<const double> times);

/// Same over a uniform grid on [0, T).
std::pair<bool, int> check_regular_rank(const ReferencePlan& plan,
                                        int grid_size);

/// CSV with header t,u1,...,um over [0, T] with `samples` intervals.
void write_controls_csv(const ReferencePlan& plan, const std::string& path,
                        int samples = 2000);

void write_plan_json(const ReferencePlan& plan, const std::string& path);

}  // namespace geotrack
