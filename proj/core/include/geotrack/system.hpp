#pragma once

#include <string>
#include <utility>
#include <vector>

#include "geotrack/basis.hpp"

namespace geotrack {

/// A left-invariant driftless control system: x' = sum_k u_k x X_k.
class ControlSystem {
 public:
  ControlSystem(GroupSpec spec, AlgebraBasis basis,
                std::vector<AlgebraElement> generators);

  const GroupSpec& spec() const { return spec_; }
  const AlgebraBasis& basis() const { return basis_; }
  int channels() const { return static_cast<int>(generators_.size()); }
  const AlgebraElement& generator(int k) const { return generators_[k]; }
  const std::vector<AlgebraElement>& generators() const { return generators_; }

 private:
  GroupSpec spec_;
  AlgebraBasis basis_;
  std::vector<AlgebraElement> generators_;
};

struct SystemReport {
  bool bracket_generating = false;
  int bracket_rank = 0;
  bool semisimple = false;
  double killing_min_abs_eig = 0.0;
  bool reg_sys = false;
  int reg_sys_rank = 0;

  bool all_ok() const { return bracket_generating && semisimple && reg_sys; }
};

/// Bracket closure of Span{X_1..X_m}: repeatedly adds [E, X_k] over the
/// current span, re-orthonormalizing against the reference Gram, until the
/// rank stabilizes. True iff the rank reaches dim g.
std::pair<bool, int> check_bracket_generating(const ControlSystem& sys);

/// Cartan criterion: smallest |eigenvalue| of the Killing Gram, relative to
/// the largest, decides semisimplicity.
std::pair<bool, double> check_semisimple(const ControlSystem& sys);

/// Rank of Span{ad(X_pivot)^p X_k : 0 <= p <= dim g, 1 <= k <= m}.
/// Powers beyond dim g add nothing (Cayley-Hamilton); p = 0 is included.
std::pair<bool, int> check_reg_sys(const ControlSystem& sys, int pivot = 0);

SystemReport check_system(const ControlSystem& sys, int pivot = 0);

/// Named generator presets: "so3-e1e2", "su2-f3f1", "su3-gellmann-2gen",
/// "u2-f3f1".
ControlSystem make_preset_system(const std::string& name);

}  // namespace geotrack
