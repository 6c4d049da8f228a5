#include "geotrack/cli.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include <json.hpp>

#include "geotrack/errors.hpp"

namespace geotrack {

namespace {

nlohmann::json report_json(const SystemReport& rep) {
  return {{"bracket_generating",
           {{"ok", rep.bracket_generating}, {"rank", rep.bracket_rank}}},
          {"semisimple",
           {{"ok", rep.semisimple}, {"min_abs_eig", rep.killing_min_abs_eig}}},
          {"reg_sys", {{"ok", rep.reg_sys}, {"rank", rep.reg_sys_rank}}},
          {"pass", rep.all_ok()}};
}

void print_system_report(const SystemReport& rep, std::ostream& out) {
  out << "bracket_generating: " << (rep.bracket_generating ? "true" : "false")
      << " (rank " << rep.bracket_rank << ")\n";
  out << "semisimple:         " << (rep.semisimple ? "true" : "false")
      << " (min |killing eig| " << rep.killing_min_abs_eig << ")\n";
  out << "reg_sys:            " << (rep.reg_sys ? "true" : "false")
      << " (rank " << rep.reg_sys_rank << ")\n";
}

}  // namespace

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  const ControlSystem sys = build_system(cfg);
  const SystemReport rep = check_system(sys);
  print_system_report(rep, out);
  if (!cfg.report_json.empty()) {
    std::ofstream f(cfg.report_json);
    if (!f) throw Error("cannot open " + cfg.report_json);
    f << report_json(rep).dump(2) << "\n";
  }
  return rep.all_ok() ? kExitOk : kExitFail;
}

int cmd_reference(const RunConfig& cfg, std::ostream& out) {
  const ControlSystem sys = build_system(cfg);
  const GroupElement x_infty = build_x_infty(cfg, sys);
  const ReferencePlan plan = build_reference_plan(sys, x_infty, cfg.period);
  write_plan_json(plan, cfg.plan_json);
  write_controls_csv(plan, cfg.control_csv);
  out << "plan: " << cfg.plan_json << "\n";
  out << "controls: " << cfg.control_csv << "\n";
  return kExitOk;
}

int cmd_track(const RunConfig& cfg, std::ostream& out) {
  {
    const ControlSystem sys = build_system(cfg);
    const SystemReport rep = check_system(sys);
    if (!rep.all_ok()) {
      print_system_report(rep, out);
      out << "track: refusing to synthesize, hypotheses failed\n";
      return kExitFail;
    }
  }
  const ResolvedRun run = resolve_run(cfg);
  const RunTrace trace = integrate(run.ctx, run.w0, 0.0, cfg.integrator);
  const MonitorReport report = monitor_run(trace, run.ctx, cfg.thresholds);

  if (!cfg.trace_csv.empty()) write_trace_csv(run.ctx, trace, cfg.trace_csv);
  if (!cfg.report_json.empty()) {
    std::ofstream f(cfg.report_json);
    if (!f) throw Error("cannot open " + cfg.report_json);
    f << report_to_json(report) << "\n";
  }

  out << std::setprecision(3) << std::scientific;
  out << "final_error:        " << report.final_error << "\n";
  out << "tail_sup_a:         " << report.tail_sup_a << "\n";
  out << "min_step_dV:        " << report.min_step_dV << "\n";
  out << "critical_probe_end: " << report.critical_probe_end << "\n";
  out << "residual_max:       " << report.residual_max << "\n";
  out << "center_check_end:   " << (report.center_end ? "true" : "false")
      << "\n";
  for (const auto& [name, ok] : report.verdicts)
    out << (ok ? "[ ok ] " : "[FAIL] ") << name << "\n";
  return report.pass ? kExitOk : kExitFail;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const std::vector<CheckResult> results = invariant_suite(cfg);
  bool all_ok = true;
  out << std::setprecision(3) << std::scientific;
  for (const CheckResult& r : results) {
    all_ok = all_ok && r.pass;
    out << (r.pass ? "[ ok ] " : "[FAIL] ") << r.name << " (" << r.value
        << " vs " << r.bound << ")";
    if (!r.note.empty()) out << " " << r.note;
    out << "\n";
  }
  out << (all_ok ? "verify: all checks passed\n" : "verify: FAILURES\n");
  return all_ok ? kExitOk : kExitFail;
}

}  // namespace geotrack
