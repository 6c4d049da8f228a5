#include "geotrack/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "geotrack/errors.hpp"

namespace geotrack {

namespace {

using nlohmann::json;

Mat parse_matrix(const json& entries, int d, const char* what) {
  if (!entries.is_array() || entries.size() != static_cast<size_t>(d) * d)
    throw ConfigError(std::string(what) + ": expected " + std::to_string(d * d) +
                      " [re, im] pairs (row-major)");
  Mat m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      const json& e = entries[static_cast<size_t>(r) * d + c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
          !e[1].is_number())
        throw ConfigError(std::string(what) + ": entries must be [re, im]");
      m(r, c) = Cplx(e[0].get<double>(), e[1].get<double>());
    }
  return m;
}

RVec parse_coords(const json& arr, const char* what) {
  if (!arr.is_array() || arr.empty())
    throw ConfigError(std::string(what) + ": expected a coordinate array");
  RVec v(static_cast<Eigen::Index>(arr.size()));
  for (size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number())
      throw ConfigError(std::string(what) + ": coordinates must be numbers");
    v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  }
  return v;
}

double require_positive(const json& j, const char* what) {
  if (!j.is_number())
    throw ConfigError(std::string(what) + ": expected a number");
  const double v = j.get<double>();
  if (!(v > 0.0) || !std::isfinite(v))
    throw ConfigError(std::string(what) + ": must be finite and positive");
  return v;
}

}  // namespace

RunConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  RunConfig cfg;

  if (!j.contains("group") || !j["group"].is_object())
    throw ConfigError("config: missing \"group\" object");
  const json& g = j["group"];
  const std::string family = g.value("family", "");
  if (family == "SU")
    cfg.group.family = GroupFamily::SU;
  else if (family == "SO")
    cfg.group.family = GroupFamily::SO;
  else if (family == "U")
    cfg.group.family = GroupFamily::U;
  else
    throw ConfigError("config: group.family must be \"SU\", \"SO\" or \"U\"");
  if (!g.contains("d") || !g["d"].is_number_integer() || g["d"].get<int>() < 2)
    throw ConfigError("config: group.d must be an integer >= 2");
  cfg.group.d = g["d"].get<int>();

  if (!j.contains("generators"))
    throw ConfigError("config: missing \"generators\"");
  if (j["generators"].is_string()) {
    cfg.generator_preset = j["generators"].get<std::string>();
  } else if (j["generators"].is_array()) {
    for (const json& gm : j["generators"])
      cfg.generator_mats.push_back(parse_matrix(gm, cfg.group.d, "generator"));
    if (cfg.generator_mats.empty())
      throw ConfigError("config: generators array is empty");
  } else {
    throw ConfigError("config: generators must be a preset name or an array");
  }

  cfg.period = require_positive(j.value("T", json(1.0)), "config: T");

  if (j.contains("x_infty")) {
    const json& xi = j["x_infty"];
    if (xi.is_string()) {
      if (xi.get<std::string>() != "identity")
        throw ConfigError("config: x_infty string form must be \"identity\"");
    } else if (xi.is_object() && xi.contains("exp_of")) {
      cfg.x_infty_exp_coords = parse_coords(xi["exp_of"], "x_infty.exp_of");
    } else if (xi.is_array()) {
      cfg.x_infty_mat = parse_matrix(xi, cfg.group.d, "x_infty");
    } else {
      throw ConfigError("config: bad x_infty");
    }
  }

  if (j.contains("x0")) {
    const json& x0 = j["x0"];
    if (!x0.is_object()) throw ConfigError("config: x0 must be an object");
    if (x0.contains("perturb_eps")) {
      const double eps = x0["perturb_eps"].get<double>();
      if (!(eps >= 0.0) || !std::isfinite(eps))
        throw ConfigError("config: x0.perturb_eps must be >= 0");
      cfg.perturb_eps = eps;
    }
    if (x0.contains("direction")) {
      if (x0["direction"].is_string()) {
        if (x0["direction"].get<std::string>() != "random")
          throw ConfigError("config: x0.direction must be coords or \"random\"");
        cfg.perturb_random = true;
      } else {
        cfg.perturb_direction = parse_coords(x0["direction"], "x0.direction");
      }
    } else {
      cfg.perturb_random = true;
    }
    if (x0.contains("seed")) {
      if (!x0["seed"].is_number_unsigned() && !x0["seed"].is_number_integer())
        throw ConfigError("config: x0.seed must be an integer");
      cfg.seed = x0["seed"].get<std::uint64_t>();
    } else if (cfg.perturb_random && cfg.perturb_eps > 0.0) {
      throw ConfigError("config: x0.seed is required with direction \"random\"");
    }
  }

  if (j.contains("integrator")) {
    const json& it = j["integrator"];
    if (!it.is_object()) throw ConfigError("config: integrator must be an object");
    if (it.contains("method"))
      cfg.integrator.method = method_from_string(it["method"].get<std::string>());
    if (it.contains("h"))
      cfg.integrator.h = require_positive(it["h"], "config: integrator.h");
    if (it.contains("t_end"))
      cfg.integrator.t_end =
          require_positive(it["t_end"], "config: integrator.t_end");
    if (it.contains("project_every")) {
      if (!it["project_every"].is_number_integer() ||
          it["project_every"].get<int>() < 1)
        throw ConfigError("config: integrator.project_every must be >= 1");
      cfg.integrator.project_every = it["project_every"].get<int>();
    }
  } else {
    // Defaults scale with the period: h = T/2000, t_end = 50 T.
    cfg.integrator.h = cfg.period / 2000.0;
    cfg.integrator.t_end = 50.0 * cfg.period;
  }

  if (j.contains("thresholds")) {
    const json& th = j["thresholds"];
    if (!th.is_object()) throw ConfigError("config: thresholds must be an object");
    if (th.contains("err_final"))
      cfg.thresholds.err_final = th["err_final"].get<double>();
    if (th.contains("tail_a")) cfg.thresholds.tail_a = th["tail_a"].get<double>();
    if (th.contains("dV_min")) cfg.thresholds.dV_min = th["dV_min"].get<double>();
    if (th.contains("critical_probe"))
      cfg.thresholds.critical_probe = th["critical_probe"].get<double>();
    if (th.contains("residual"))
      cfg.thresholds.residual = th["residual"].get<double>();
  }

  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    if (!o.is_object()) throw ConfigError("config: outputs must be an object");
    cfg.trace_csv = o.value("trace_csv", "");
    cfg.report_json = o.value("report_json", "");
    cfg.plan_json = o.value("plan_json", "plan.json");
    cfg.control_csv = o.value("control_csv", "controls.csv");
  }

  if (j.contains("verify_samples")) {
    if (!j["verify_samples"].is_number_integer() ||
        j["verify_samples"].get<int>() < 1)
      throw ConfigError("config: verify_samples must be a positive integer");
    cfg.verify_samples = j["verify_samples"].get<int>();
  }

  // Environment override for reproducible sweeps.
  if (const char* env = std::getenv("GEOTRACK_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (...) {
      throw ConfigError("GEOTRACK_SEED must be an unsigned integer");
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

ControlSystem build_system(const RunConfig& cfg) {
  if (!cfg.generator_preset.empty()) {
    ControlSystem sys = make_preset_system(cfg.generator_preset);
    if (!(sys.spec() == cfg.group))
      throw ConfigError("config: group does not match preset \"" +
                        cfg.generator_preset + "\" (expected " +
                        to_string(sys.spec().family) + "(" +
                        std::to_string(sys.spec().d) + "))");
    return sys;
  }
  AlgebraBasis basis = standard_basis(cfg.group);
  std::vector<AlgebraElement> gens;
  gens.reserve(cfg.generator_mats.size());
  for (const Mat& m : cfg.generator_mats) {
    try {
      gens.emplace_back(cfg.group, m);
    } catch (const Error& e) {
      throw ConfigError(std::string("config: bad generator matrix: ") +
                        e.what());
    }
  }
  return ControlSystem(cfg.group, std::move(basis), std::move(gens));
}

GroupElement build_x_infty(const RunConfig& cfg, const ControlSystem& sys) {
  if (cfg.x_infty_mat) {
    try {
      return GroupElement(cfg.group, *cfg.x_infty_mat);
    } catch (const Error& e) {
      throw ConfigError(std::string("config: x_infty is not a group element: ") +
                        e.what());
    }
  }
  if (cfg.x_infty_exp_coords) {
    if (cfg.x_infty_exp_coords->size() != sys.basis().size())
      throw ConfigError("config: x_infty.exp_of has wrong length");
    return expm(sys.basis().combine(*cfg.x_infty_exp_coords));
  }
  return GroupElement::identity(cfg.group);
}

ResolvedRun resolve_run(const RunConfig& cfg) {
  ControlSystem sys = build_system(cfg);
  GroupElement x_infty = build_x_infty(cfg, sys);
  ReferencePlan plan = build_reference_plan(sys, x_infty, cfg.period);
  FeedbackContext ctx = FeedbackContext::make(sys, plan);

  GroupElement w0 = GroupElement::identity(cfg.group);
  if (cfg.perturb_eps > 0.0) {
    AlgebraElement z = AlgebraElement::zero(cfg.group);
    if (cfg.perturb_direction) {
      if (cfg.perturb_direction->size() != sys.basis().size())
        throw ConfigError("config: x0.direction has wrong length");
      z = sys.basis().combine(*cfg.perturb_direction);
    } else {
      SplitMix64 rng(cfg.seed);
      z = random_unit_algebra_element(sys.basis(), rng);
    }
    w0 = expm(z * cfg.perturb_eps);
  }
  return ResolvedRun(std::move(sys), std::move(ctx), std::move(w0),
                     std::move(x_infty), cfg.seed);
}

}  // namespace geotrack
