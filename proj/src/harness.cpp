#include "kerr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <thread>

#include "kerr/error.hpp"

namespace kerr::harness {
namespace {

constexpr std::size_t kMaxSweepPoints = 1'000'000;

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ConfigError("config field '" + field + "': " + msg);
}

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items())
    if (!ok.contains(key)) fail(join(path, key), "unknown key");
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "must be finite");
  return v;
}

double required_number(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) fail(join(path, key), "missing");
  return number(obj.at(key), join(path, key));
}

Complex complex_value(const json& j, const std::string& field) {
  if (j.is_number()) return {number(j, field), 0.0};
  if (j.is_array() && j.size() == 2)
    return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
  fail(field, "expected a number or an [re, im] pair");
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string{}; }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Applies a sweep parameter value to a config copy.
void apply_param(RunConfig& c, const std::string& name, double v) {
  auto constant_of = [&](ProfileSpec& p, bool real_part) {
    const auto* k = std::get_if<ProfileSpec::Constant>(&p.kind());
    if (!k) fail("sweep.axes", "parameter '" + name + "' requires a constant profile");
    Complex value = k->value;
    if (real_part)
      value.real(v);
    else
      value.imag(v);
    p = ProfileSpec::constant(value);
  };
  auto need_physical = [&]() -> PhysicalParams& {
    if (!c.physical) fail("sweep.axes", "parameter '" + name + "' requires a physical block");
    return *c.physical;
  };
  auto need_nondim = [&]() -> NondimensionalBlock& {
    if (!c.nondimensional)
      fail("sweep.axes", "parameter '" + name + "' requires a nondimensional block");
    return *c.nondimensional;
  };
  if (name == "k") {
    need_physical().k = v;
  } else if (name == "theta") {
    need_physical().theta = v;
  } else if (name == "L") {
    need_physical().L = v;
  } else if (name == "eps_re" || name == "eps_im") {
    constant_of(need_physical().eps_l, name == "eps_re");
  } else if (name == "sigma_re" || name == "sigma_im") {
    constant_of(need_physical().sigma, name == "sigma_re");
  } else if (name == "r_re" || name == "r_im") {
    constant_of(need_nondim().r, name == "r_re");
  } else if (name == "s_re" || name == "s_im") {
    constant_of(need_nondim().s, name == "s_re");
  } else if (name == "c0_abs") {
    if (!(v >= 0.0)) fail("sweep.axes", "c0_abs must be non-negative");
    c.ic.c0 = std::polar(v, std::arg(c.ic.c0));
  } else if (name == "phase_diff") {
    c.ic.c1 = std::polar(std::abs(c.ic.c1), std::arg(c.ic.c0) + v);
  } else {
    fail("sweep.axes", "unknown sweep parameter '" + name + "'");
  }
}

json hypotheses_json(const HypothesisReport& h) {
  return {{"passed", h.passed()},
          {"b_negative", h.kerr_defocusing},
          {"nonzero_initial_data", h.nonzero_data},
          {"phase_condition", h.phase_condition},
          {"amplitude_condition", h.amplitude_condition},
          {"cos_phase_difference", h.cos_phase},
          {"amplitude_threshold",
           std::isfinite(h.amplitude_threshold) ? json(h.amplitude_threshold) : json(nullptr)},
          {"failures", h.failures()}};
}

struct RowResult {
  bool hypotheses = false;
  bool blew_up = false;
  std::optional<double> z_star;
  std::optional<BoundResult> bounds;
  Termination reason = Termination::DomainEnd;
};

RowResult run_row(const RunConfig& base, const std::vector<std::pair<std::string, double>>& point) {
  RunConfig c = base;
  for (const auto& [name, value] : point) apply_param(c, name, value);
  const SlabProfile slab = c.slab();
  const BlowupReport rep = integrate(slab, c.ic, c.integrator);
  RowResult row;
  row.hypotheses = rep.hypotheses.passed();
  row.blew_up = rep.blew_up;
  row.z_star = rep.z_star_estimate;
  row.reason = rep.reason;
  row.bounds = rep.bounds;
  if (row.hypotheses && c.quadrature_rel_tol != kQuadratureRelTol)
    row.bounds = compute_bounds(make_glassey_data(slab, c.ic), c.quadrature_rel_tol);
  return row;
}

}  // namespace

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Simulate:
      return "simulate";
    case Mode::Sweep:
      return "sweep";
    case Mode::VerifyBound:
      return "verify-bound";
    case Mode::Analytic:
      return "analytic";
    case Mode::Check:
      return "check";
  }
  return "unknown";
}

Mode parse_mode(const std::string& name) {
  for (Mode m : {Mode::Simulate, Mode::Sweep, Mode::VerifyBound, Mode::Analytic, Mode::Check})
    if (name == to_string(m)) return m;
  throw ConfigError("unknown mode '" + name + "'");
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out[static_cast<std::size_t>(i)] =
        log_spacing ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
                    : start + t * (stop - start);
  }
  // Pin the endpoints exactly.
  out.front() = start;
  if (count > 1) out.back() = stop;
  return out;
}

SlabProfile RunConfig::slab() const {
  if (physical) return nondimensionalize(*physical);
  if (nondimensional) return SlabProfile(nondimensional->r, nondimensional->s, nondimensional->z_max);
  throw ConfigError("config has neither a physical nor a nondimensional block");
}

std::pair<Complex, Complex> RunConfig::physical_ic() const {
  const double k = physical ? physical->k : 1.0;
  return {ic.c0, k * ic.c1};
}

json profile_to_json(const ProfileSpec& p) {
  json out{{"kind", p.kind_name()}};
  std::visit(
      [&out](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ProfileSpec::Constant>) {
          out["value"] = complex_json(k.value);
        } else if constexpr (std::is_same_v<K, ProfileSpec::Polynomial>) {
          json coeffs = json::array();
          for (const auto& c : k.coeffs) coeffs.push_back(complex_json(c));
          out["coeffs"] = coeffs;
          out["domain_end"] = k.domain_end;
        } else if constexpr (std::is_same_v<K, ProfileSpec::PiecewiseLinear>) {
          json pts = json::array();
          for (std::size_t i = 0; i < k.z.size(); ++i)
            pts.push_back(json::array({k.z[i], complex_json(k.values[i])}));
          out["points"] = pts;
        } else {
          json vals = json::array();
          for (const auto& v : k.values) vals.push_back(complex_json(v));
          out["z"] = k.z;
          out["values"] = vals;
        }
      },
      p.kind());
  return out;
}

ProfileSpec profile_from_json(const json& j, const std::string& field, double default_domain_end) {
  if (j.is_number() || j.is_array()) return ProfileSpec::constant(complex_value(j, field));
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    fail(field, "expected a constant or an object with a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "constant") {
      check_keys(j, field, {"kind", "value"});
      if (!j.contains("value")) fail(join(field, "value"), "missing");
      return ProfileSpec::constant(complex_value(j.at("value"), join(field, "value")));
    }
    if (kind == "polynomial") {
      check_keys(j, field, {"kind", "coeffs", "domain_end"});
      if (!j.contains("coeffs") || !j.at("coeffs").is_array())
        fail(join(field, "coeffs"), "expected an array");
      std::vector<Complex> coeffs;
      for (std::size_t i = 0; i < j.at("coeffs").size(); ++i)
        coeffs.push_back(complex_value(j.at("coeffs")[i], join(field, "coeffs")));
      const double end = j.contains("domain_end") ? number(j.at("domain_end"), join(field, "domain_end"))
                                                  : default_domain_end;
      return ProfileSpec::polynomial(std::move(coeffs), end);
    }
    if (kind == "piecewise-linear") {
      check_keys(j, field, {"kind", "points"});
      if (!j.contains("points") || !j.at("points").is_array())
        fail(join(field, "points"), "expected an array of [z, value] pairs");
      std::vector<double> z;
      std::vector<Complex> v;
      for (const auto& pt : j.at("points")) {
        if (!pt.is_array() || pt.size() != 2) fail(join(field, "points"), "expected [z, value] pairs");
        z.push_back(number(pt[0], join(field, "points")));
        v.push_back(complex_value(pt[1], join(field, "points")));
      }
      return ProfileSpec::piecewise_linear(std::move(z), std::move(v));
    }
    if (kind == "sampled-grid") {
      check_keys(j, field, {"kind", "z", "values"});
      if (!j.contains("z") || !j.at("z").is_array()) fail(join(field, "z"), "expected an array");
      if (!j.contains("values") || !j.at("values").is_array())
        fail(join(field, "values"), "expected an array");
      std::vector<double> z;
      std::vector<Complex> v;
      for (const auto& x : j.at("z")) z.push_back(number(x, join(field, "z")));
      for (const auto& x : j.at("values")) v.push_back(complex_value(x, join(field, "values")));
      return ProfileSpec::sampled_grid(std::move(z), std::move(v));
    }
  } catch (const InvalidInput& e) {
    fail(field, e.what());
  }
  fail(join(field, "kind"), "unknown profile kind '" + kind + "'");
}

RunConfig parse_config(const json& doc, Mode mode) {
  check_keys(doc, "", {"mode", "physical", "nondimensional", "ic", "integrator", "quadrature", "sweep",
                       "analytic", "verify", "output"});
  RunConfig cfg;
  cfg.mode = mode;
  if (doc.contains("mode")) {
    if (!doc.at("mode").is_string()) fail("mode", "expected a string");
    if (doc.at("mode").get<std::string>() != to_string(mode))
      fail("mode", "config is for '" + doc.at("mode").get<std::string>() + "' but the command is '" +
                       to_string(mode) + "'");
  }

  const bool has_phys = doc.contains("physical");
  const bool has_nondim = doc.contains("nondimensional");
  if (has_phys && has_nondim)
    fail("physical", "physical and nondimensional blocks are mutually exclusive");
  const bool needs_slab = mode != Mode::Analytic;
  if (needs_slab && !has_phys && !has_nondim)
    fail("physical", "one of the physical or nondimensional blocks is required");

  if (has_phys) {
    const json& p = doc.at("physical");
    check_keys(p, "physical", {"k", "theta", "L", "eps_l", "sigma"});
    PhysicalParams pp;
    pp.k = required_number(p, "k", "physical");
    pp.theta = p.contains("theta") ? number(p.at("theta"), "physical.theta") : 0.0;
    pp.L = required_number(p, "L", "physical");
    if (!p.contains("eps_l")) fail("physical.eps_l", "missing");
    if (!p.contains("sigma")) fail("physical.sigma", "missing");
    pp.eps_l = profile_from_json(p.at("eps_l"), "physical.eps_l", pp.L);
    pp.sigma = profile_from_json(p.at("sigma"), "physical.sigma", pp.L);
    try {
      pp.validate();
    } catch (const InvalidInput& e) {
      fail("physical", e.what());
    }
    cfg.physical = std::move(pp);
  }
  if (has_nondim) {
    const json& n = doc.at("nondimensional");
    check_keys(n, "nondimensional", {"z_max", "r", "s"});
    const double z_max = required_number(n, "z_max", "nondimensional");
    if (!(z_max > 0.0)) fail("nondimensional.z_max", "must be positive");
    if (!n.contains("r")) fail("nondimensional.r", "missing");
    if (!n.contains("s")) fail("nondimensional.s", "missing");
    cfg.nondimensional = NondimensionalBlock{profile_from_json(n.at("r"), "nondimensional.r", z_max),
                                             profile_from_json(n.at("s"), "nondimensional.s", z_max),
                                             z_max};
  }

  if (needs_slab) {
    if (!doc.contains("ic")) fail("ic", "missing");
    const json& ic = doc.at("ic");
    check_keys(ic, "ic", {"c0", "c1", "E0", "dE0"});
    const bool nondim_ic = ic.contains("c0") || ic.contains("c1");
    const bool phys_ic = ic.contains("E0") || ic.contains("dE0");
    if (nondim_ic == phys_ic) fail("ic", "give exactly one of the pairs (c0, c1) or (E0, dE0)");
    if (nondim_ic) {
      if (!ic.contains("c0") || !ic.contains("c1")) fail("ic", "both c0 and c1 are required");
      cfg.ic = {complex_value(ic.at("c0"), "ic.c0"), complex_value(ic.at("c1"), "ic.c1")};
    } else {
      if (!cfg.physical) fail("ic", "E0/dE0 require a physical block");
      if (!ic.contains("E0") || !ic.contains("dE0")) fail("ic", "both E0 and dE0 are required");
      cfg.ic = {complex_value(ic.at("E0"), "ic.E0"),
                complex_value(ic.at("dE0"), "ic.dE0") / cfg.physical->k};
    }
  }

  if (doc.contains("integrator")) {
    const json& in = doc.at("integrator");
    check_keys(in, "integrator",
               {"rel_tol", "abs_tol", "max_step", "blowup_threshold", "min_step", "max_steps"});
    auto& ic = cfg.integrator;
    if (in.contains("rel_tol")) ic.rel_tol = number(in.at("rel_tol"), "integrator.rel_tol");
    if (in.contains("abs_tol")) ic.abs_tol = number(in.at("abs_tol"), "integrator.abs_tol");
    if (in.contains("max_step")) ic.max_step = number(in.at("max_step"), "integrator.max_step");
    if (in.contains("blowup_threshold"))
      ic.blowup_threshold = number(in.at("blowup_threshold"), "integrator.blowup_threshold");
    if (in.contains("min_step")) ic.min_step = number(in.at("min_step"), "integrator.min_step");
    if (in.contains("max_steps")) {
      if (!in.at("max_steps").is_number_integer()) fail("integrator.max_steps", "expected an integer");
      ic.max_steps = in.at("max_steps").get<std::int64_t>();
    }
  }
  if (needs_slab) {
    try {
      (void)resolve(cfg.integrator, cfg.slab().z_max, cfg.ic.c0);
    } catch (const InvalidInput& e) {
      fail("integrator", e.what());
    }
  }

  if (doc.contains("quadrature")) {
    check_keys(doc.at("quadrature"), "quadrature", {"rel_tol"});
    if (doc.at("quadrature").contains("rel_tol")) {
      cfg.quadrature_rel_tol = number(doc.at("quadrature").at("rel_tol"), "quadrature.rel_tol");
      if (!(cfg.quadrature_rel_tol > 0.0)) fail("quadrature.rel_tol", "must be positive");
    }
  }

  if (doc.contains("sweep")) {
    const json& sw = doc.at("sweep");
    check_keys(sw, "sweep", {"axes"});
    if (!sw.contains("axes") || !sw.at("axes").is_array()) fail("sweep.axes", "expected an array");
    for (std::size_t i = 0; i < sw.at("axes").size(); ++i) {
      const json& ax = sw.at("axes")[i];
      const std::string path = "sweep.axes[" + std::to_string(i) + "]";
      check_keys(ax, path, {"param", "start", "stop", "count", "spacing"});
      SweepAxis axis;
      if (!ax.contains("param") || !ax.at("param").is_string()) fail(join(path, "param"), "expected a string");
      axis.param = ax.at("param").get<std::string>();
      axis.start = required_number(ax, "start", path);
      axis.stop = required_number(ax, "stop", path);
      if (!ax.contains("count") || !ax.at("count").is_number_integer() || ax.at("count").get<int>() < 1)
        fail(join(path, "count"), "expected a positive integer");
      axis.count = ax.at("count").get<int>();
      if (ax.contains("spacing")) {
        const std::string sp = ax.at("spacing").is_string() ? ax.at("spacing").get<std::string>() : "";
        if (sp == "log")
          axis.log_spacing = true;
        else if (sp != "linear")
          fail(join(path, "spacing"), "expected 'linear' or 'log'");
      }
      if (axis.log_spacing && !(axis.start > 0.0 && axis.stop > 0.0))
        fail(path, "log spacing requires positive start and stop");
      cfg.sweep.push_back(axis);
    }
  }
  if (mode == Mode::Sweep) {
    if (cfg.sweep.empty()) fail("sweep.axes", "at least one axis is required");
    if (cfg.sweep.size() > 2) fail("sweep.axes", "at most two axes are supported");
    std::size_t total = 1;
    for (const auto& ax : cfg.sweep) total *= static_cast<std::size_t>(ax.count);
    if (total > kMaxSweepPoints) fail("sweep.axes", "grid exceeds 10^6 points");
    // Endpoint validation: every parameter's admissible set is an interval.
    for (const auto& ax : cfg.sweep) {
      for (double v : {ax.start, ax.stop}) {
        RunConfig probe = cfg;
        apply_param(probe, ax.param, v);
        try {
          (void)probe.slab();
        } catch (const InvalidInput& e) {
          fail("sweep.axes", "parameter '" + ax.param + "' value " + fmt(v) + ": " + e.what());
        }
      }
    }
  }

  if (doc.contains("analytic")) {
    const json& an = doc.at("analytic");
    check_keys(an, "analytic", {"eps_l", "theta", "sigma", "k", "phase", "fraction", "samples"});
    AnalyticBlock blk;
    blk.params.eps_l = required_number(an, "eps_l", "analytic");
    blk.params.theta = an.contains("theta") ? number(an.at("theta"), "analytic.theta") : 0.0;
    blk.params.sigma = required_number(an, "sigma", "analytic");
    blk.params.k = required_number(an, "k", "analytic");
    blk.params.phase = an.contains("phase") ? number(an.at("phase"), "analytic.phase") : 0.0;
    if (an.contains("fraction")) blk.fraction = number(an.at("fraction"), "analytic.fraction");
    if (!(blk.fraction > 0.0 && blk.fraction < 1.0)) fail("analytic.fraction", "must lie in (0, 1)");
    if (an.contains("samples")) {
      if (!an.at("samples").is_number_integer() || an.at("samples").get<int>() < 2)
        fail("analytic.samples", "expected an integer >= 2");
      blk.samples = an.at("samples").get<int>();
    }
    cfg.analytic = blk;
  }
  if (mode == Mode::Analytic && !cfg.analytic) fail("analytic", "missing");

  if (doc.contains("verify")) {
    check_keys(doc.at("verify"), "verify", {"simulate"});
    if (doc.at("verify").contains("simulate")) {
      if (!doc.at("verify").at("simulate").is_boolean()) fail("verify.simulate", "expected a boolean");
      cfg.verify_simulate = doc.at("verify").at("simulate").get<bool>();
    }
  }

  if (doc.contains("output")) {
    const json& out = doc.at("output");
    check_keys(out, "output", {"report", "trajectory"});
    if (out.contains("report")) {
      if (!out.at("report").is_string()) fail("output.report", "expected a path string");
      cfg.output.report = out.at("report").get<std::string>();
    }
    if (out.contains("trajectory")) {
      if (!out.at("trajectory").is_string()) fail("output.trajectory", "expected a path string");
      cfg.output.trajectory = out.at("trajectory").get<std::string>();
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path, Mode mode) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line:column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": syntax error: " + e.what());
  }
  return parse_config(doc, mode);
}

json config_to_json(const RunConfig& cfg) {
  json out{{"mode", to_string(cfg.mode)}};
  if (cfg.physical) {
    const auto& p = *cfg.physical;
    out["physical"] = {{"k", p.k},
                       {"theta", p.theta},
                       {"L", p.L},
                       {"eps_l", profile_to_json(p.eps_l)},
                       {"sigma", profile_to_json(p.sigma)}};
  }
  if (cfg.nondimensional) {
    const auto& n = *cfg.nondimensional;
    out["nondimensional"] = {{"z_max", n.z_max}, {"r", profile_to_json(n.r)}, {"s", profile_to_json(n.s)}};
  }
  if (cfg.physical || cfg.nondimensional) {
    out["ic"] = {{"c0", complex_json(cfg.ic.c0)}, {"c1", complex_json(cfg.ic.c1)}};
    const ResolvedConfig r = resolve(cfg.integrator, cfg.slab().z_max, cfg.ic.c0);
    out["integrator"] = {{"rel_tol", r.rel_tol},
                         {"abs_tol", r.abs_tol},
                         {"max_step", r.max_step},
                         {"blowup_threshold", r.blowup_threshold},
                         {"min_step", r.min_step},
                         {"max_steps", r.max_steps}};
  }
  out["quadrature"] = {{"rel_tol", cfg.quadrature_rel_tol}};
  if (!cfg.sweep.empty()) {
    json axes = json::array();
    for (const auto& ax : cfg.sweep)
      axes.push_back({{"param", ax.param},
                      {"start", ax.start},
                      {"stop", ax.stop},
                      {"count", ax.count},
                      {"spacing", ax.log_spacing ? "log" : "linear"}});
    out["sweep"] = {{"axes", axes}};
  }
  if (cfg.analytic) {
    const auto& a = *cfg.analytic;
    out["analytic"] = {{"eps_l", a.params.eps_l}, {"theta", a.params.theta}, {"sigma", a.params.sigma},
                       {"k", a.params.k},         {"phase", a.params.phase}, {"fraction", a.fraction},
                       {"samples", a.samples}};
  }
  if (cfg.mode == Mode::VerifyBound) out["verify"] = {{"simulate", cfg.verify_simulate}};
  return out;
}

SimulationResult cmd_simulate(const RunConfig& cfg, bool with_timing) {
  const auto t0 = std::chrono::steady_clock::now();
  const SlabProfile slab = cfg.slab();
  BlowupReport rep = integrate(slab, cfg.ic, cfg.integrator);
  if (rep.hypotheses.passed() && cfg.quadrature_rel_tol != kQuadratureRelTol)
    rep.bounds = compute_bounds(make_glassey_data(slab, cfg.ic), cfg.quadrature_rel_tol);

  json report;
  report["mode"] = "simulate";
  report["config"] = config_to_json(cfg);
  report["slab"] = {{"z_max", slab.z_max}, {"a", slab.a}, {"b", slab.b}};
  report["hypotheses"] = hypotheses_json(rep.hypotheses);
  report["blowup"] = {{"blew_up", rep.blew_up},
                      {"z_star_estimate", opt_json(rep.z_star_estimate)},
                      {"low_confidence", rep.low_confidence},
                      {"z_reached", rep.z_reached},
                      {"reason", to_string(rep.reason)}};
  if (rep.bounds) {
    json b{{"bound_gamma", rep.bounds->gamma_quadrature},
           {"gamma_closed_q", rep.bounds->gamma_closed_q},
           {"bound_closed_form", rep.bounds->l_star_nondim},
           {"quadrature_error_estimate", rep.bounds->quadrature_error_estimate}};
    if (cfg.physical) {
      const auto [e0, de0] = cfg.physical_ic();
      b["l_star_physical"] = l_star_physical(cfg.physical->k, slab.b, e0, de0);
    }
    report["bounds"] = b;
  } else {
    report["bounds"] = nullptr;
  }
  report["solver"] = {{"accepted_steps", rep.stats.accepted},
                      {"rejected_steps", rep.stats.rejected},
                      {"rhs_evaluations", rep.stats.rhs_evaluations},
                      {"trajectory_points", rep.trajectory.size()}};
  if (with_timing)
    report["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(report), std::move(rep)};
}

std::string cmd_sweep(const RunConfig& cfg, int workers) {
  if (cfg.sweep.empty()) throw ConfigError("config field 'sweep.axes': at least one axis is required");
  std::vector<std::vector<double>> axis_values;
  std::size_t total = 1;
  for (const auto& ax : cfg.sweep) {
    axis_values.push_back(ax.values());
    total *= axis_values.back().size();
  }
  // Row-major: the last axis varies fastest.
  auto point_at = [&](std::size_t idx) {
    std::vector<std::pair<std::string, double>> pt(cfg.sweep.size());
    for (std::size_t a = cfg.sweep.size(); a-- > 0;) {
      const std::size_t n = axis_values[a].size();
      pt[a] = {cfg.sweep[a].param, axis_values[a][idx % n]};
      idx /= n;
    }
    return pt;
  };

  std::vector<RowResult> rows(total);
  std::vector<std::string> errors(total);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        rows[i] = run_row(cfg, point_at(i));
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int n_threads = std::clamp(workers, 1, static_cast<int>(std::min<std::size_t>(total, 256)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < total; ++i)
    if (!errors[i].empty()) throw InvalidInput("sweep row " + std::to_string(i) + ": " + errors[i]);

  std::ostringstream os;
  for (const auto& ax : cfg.sweep) os << ax.param << ',';
  os << "hypotheses,blew_up,z_star_estimate,gamma_quadrature,gamma_closed_q,bound_closed_form,margin,"
        "reason\n";
  for (std::size_t i = 0; i < total; ++i) {
    const auto pt = point_at(i);
    const RowResult& r = rows[i];
    for (const auto& [_, v] : pt) os << fmt(v) << ',';
    std::optional<double> margin;
    if (r.bounds && r.z_star) margin = r.bounds->gamma_quadrature - *r.z_star;
    os << (r.hypotheses ? "pass" : "fail") << ',' << (r.blew_up ? "true" : "false") << ','
       << fmt_opt(r.z_star) << ','
       << fmt_opt(r.bounds ? std::optional(r.bounds->gamma_quadrature) : std::nullopt) << ','
       << fmt_opt(r.bounds ? std::optional(r.bounds->gamma_closed_q) : std::nullopt) << ','
       << fmt_opt(r.bounds ? std::optional(r.bounds->l_star_nondim) : std::nullopt) << ','
       << fmt_opt(margin) << ',' << to_string(r.reason) << '\n';
  }
  return os.str();
}

VerifyResult cmd_verify_bound(const RunConfig& cfg) {
  const SlabProfile slab = cfg.slab();
  const HypothesisReport hyp = check_hypotheses(slab, cfg.ic);
  if (!hyp.passed()) throw InapplicableBound("blow-up bound inapplicable: " + hyp.failures());
  const GlasseyData data = make_glassey_data(slab, cfg.ic);
  const BoundResult bounds = compute_bounds(data, cfg.quadrature_rel_tol);

  VerifyResult out{{}, true, std::nullopt};
  json& r = out.report;
  r["mode"] = "verify-bound";
  r["config"] = config_to_json(cfg);
  r["glassey"] = {{"alpha", data.alpha}, {"beta", data.beta}, {"a", data.a}, {"b", data.b}};
  r["gamma_quadrature"] = bounds.gamma_quadrature;
  r["quadrature_error_estimate"] = bounds.quadrature_error_estimate;
  r["gamma_closed_q"] = bounds.gamma_closed_q;
  r["bound_closed_form"] = bounds.l_star_nondim;
  r["quadrature_vs_closed_q_relative_gap"] =
      (bounds.gamma_closed_q - bounds.gamma_quadrature) / bounds.gamma_closed_q;

  json ordering;
  ordering["gamma_le_closed_q"] = bounds.gamma_quadrature <= bounds.gamma_closed_q * (1.0 + 1e-6);
  ordering["closed_q_le_closed_form"] = bounds.gamma_closed_q <= bounds.l_star_nondim * (1.0 + 1e-6);
  out.ordering_passed = ordering["gamma_le_closed_q"].get<bool>() &&
                        ordering["closed_q_le_closed_form"].get<bool>();
  if (cfg.verify_simulate) {
    out.blowup = integrate(slab, cfg.ic, cfg.integrator);
    r["z_star_estimate"] = opt_json(out.blowup->z_star_estimate);
    r["blew_up"] = out.blowup->blew_up;
    if (out.blowup->z_star_estimate) {
      const bool ok = *out.blowup->z_star_estimate <= bounds.gamma_quadrature * (1.0 + 1e-3);
      ordering["z_star_le_gamma"] = ok;
      out.ordering_passed = out.ordering_passed && ok;
    } else {
      ordering["z_star_le_gamma"] = nullptr;
    }
  }
  ordering["passed"] = out.ordering_passed;
  r["ordering"] = ordering;
  return out;
}

AnalyticResult cmd_analytic(const RunConfig& cfg) {
  if (!cfg.analytic) throw ConfigError("config field 'analytic': missing");
  const AnalyticBlock& blk = *cfg.analytic;
  const auto& p = blk.params;
  p.validate();
  const double zs = analytic::z_star(p);
  const double amp = analytic::amplitude_A(p);
  const analytic::SecSample at0 = analytic::sec_solution(p, 0.0);
  const double lstar = l_star_physical(p.k, p.sigma, at0.value, at0.derivative);

  AnalyticResult out;
  out.summary = {{"z_star", zs}, {"A", amp}, {"r", p.r()}, {"l_star", lstar}, {"l_star_over_z_star", lstar / zs}};

  std::ostringstream os;
  os << "z,re_E,im_E,re_dE,im_dE,abs_E,residual_abs,residual_rel\n";
  double max_rel = 0.0;
  for (int i = 0; i < blk.samples; ++i) {
    const double z = blk.fraction * zs * i / (blk.samples - 1);
    const analytic::SecSample s = analytic::sec_solution(p, z);
    const double res = std::abs(analytic::residual(p, z));
    const double mag = std::abs(s.value);
    const double rel = res / (p.k * p.k * mag * mag * mag);
    max_rel = std::max(max_rel, rel);
    os << fmt(z) << ',' << fmt(s.value.real()) << ',' << fmt(s.value.imag()) << ','
       << fmt(s.derivative.real()) << ',' << fmt(s.derivative.imag()) << ',' << fmt(mag) << ','
       << fmt(res) << ',' << fmt(rel) << '\n';
  }
  out.summary["max_relative_residual"] = max_rel;
  out.csv = os.str();
  return out;
}

json cmd_check(const RunConfig& cfg) {
  const SlabProfile slab = cfg.slab();
  const HypothesisReport hyp = check_hypotheses(slab, cfg.ic);
  json r{{"mode", "check"},
         {"config", config_to_json(cfg)},
         {"slab", {{"z_max", slab.z_max}, {"a", slab.a}, {"b", slab.b}}},
         {"hypotheses", hypotheses_json(hyp)}};
  if (cfg.ic.c0 != Complex{} && cfg.ic.c1 != Complex{}) {
    const auto [alpha, beta] = alpha_beta(cfg.ic);
    r["alpha"] = alpha;
    r["beta"] = beta;
  }
  return r;
}

}  // namespace kerr::harness
