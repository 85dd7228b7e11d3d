#include "herglotz/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>

namespace herglotz {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

const json& member(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) fail(path, "missing required key '" + key + "'");
  return obj.at(key);
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::uint64_t get_seed(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    fail(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

std::vector<double> get_numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(get_number(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

std::vector<std::string> get_strings(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(get_string(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

int get_dim(const json& obj, const std::string& path) {
  const int n = get_int(member(obj, "n", path), path + ".n");
  if (n < 1) fail(path + ".n", "dimension must be positive");
  return n;
}

ParamSet get_params(const json& obj, const std::string& path) {
  ParamSet ps;
  if (!obj.contains("params")) return ps;
  const json& p = obj.at("params");
  if (!p.is_object()) fail(path + ".params", "expected an object");
  for (const auto& [k, v] : p.items()) {
    try {
      ps.bind(k, get_number(v, path + ".params." + k));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      fail(path + ".params." + k, e.what());
    }
  }
  return ps;
}

StatePoint get_point(const json& j, int n, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object with q, v, z");
  StatePoint p(get_numbers(member(j, "q", path), path + ".q"), get_numbers(member(j, "v", path), path + ".v"),
               get_number(member(j, "z", path), path + ".z"));
  if (p.q.size() != p.v.size()) fail(path, "q and v have different lengths");
  if (n > 0 && p.dim() != n) fail(path, "point dimension differs from n = " + std::to_string(n));
  return p;
}

Interval get_interval(const json& j, const std::string& path) {
  const auto v = get_numbers(j, path);
  if (v.size() != 2) fail(path, "expected [lo, hi]");
  if (!(v[0] <= v[1])) fail(path, "lo must not exceed hi");
  return {v[0], v[1]};
}

template <class F>
void each_entry(const json& doc, const std::string& key, F&& f) {
  if (!doc.contains(key)) return;
  const json& sec = doc.at(key);
  if (!sec.is_object()) fail(key, "expected an object of named entries");
  for (const auto& [name, entry] : sec.items()) {
    if (!entry.is_object()) fail(key + "." + name, "expected an object");
    f(name, entry, key + "." + name);
  }
}

Expr parse_at(const std::string& text, int n, const std::string& path) {
  try {
    return parse(text, n);
  } catch (const ParseError& e) {
    fail(path, std::string("parse error at byte ") + std::to_string(e.offset()) + ": " + e.what());
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

SamplePlan::Mode get_mode(const json& j, const std::string& path) {
  const std::string m = get_string(j, path);
  if (m == "seeded-random" || m == "random") return SamplePlan::Mode::random;
  if (m == "grid") return SamplePlan::Mode::grid;
  if (m == "points") return SamplePlan::Mode::points;
  fail(path, "unknown mode '" + m + "' (expected seeded-random, grid or points)");
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("HERGLOTZ_SEED");
  if (!s || !*s) return std::nullopt;
  std::uint64_t v = 0;
  const std::string text(s);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("HERGLOTZ_SEED: expected a non-negative integer");
  return v;
}

}  // namespace

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) fail("$", "configuration must be a JSON object");
  static const std::set<std::string> known = {"lagrangians", "hamiltonians", "sodes",      "action_functions",
                                              "sample_plans", "tolerances", "tasks",       "output_dir",
                                              "seed"};
  for (const auto& [k, v] : doc.items())
    if (!known.count(k)) fail(k, "unknown top-level key");

  RunConfig cfg;
  if (doc.contains("seed")) cfg.seed = get_seed(doc.at("seed"), "seed");
  if (doc.contains("output_dir")) cfg.output_dir = get_string(doc.at("output_dir"), "output_dir");
  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    if (!t.is_object()) fail("tolerances", "expected an object");
    if (t.contains("pass_tol")) cfg.tolerances.pass_tol = get_number(t.at("pass_tol"), "tolerances.pass_tol");
    if (t.contains("fail_tol")) cfg.tolerances.fail_tol = get_number(t.at("fail_tol"), "tolerances.fail_tol");
    if (t.contains("det_tol")) cfg.tolerances.det_tol = get_number(t.at("det_tol"), "tolerances.det_tol");
    try {
      cfg.tolerances.validate();
    } catch (const Error& e) {
      fail("tolerances", e.what());
    }
  }

  each_entry(doc, "lagrangians", [&](const std::string& name, const json& e, const std::string& path) {
    LagrangianSpec s;
    s.n = get_dim(e, path);
    s.expr = get_string(member(e, "expr", path), path + ".expr");
    s.params = get_params(e, path);
    if (e.contains("initial_state")) s.initial_state = get_point(e.at("initial_state"), s.n, path + ".initial_state");
    if (e.contains("expected_accelerations")) {
      s.expected_accelerations = get_strings(e.at("expected_accelerations"), path + ".expected_accelerations");
      if (static_cast<int>(s.expected_accelerations.size()) != s.n)
        fail(path + ".expected_accelerations", "expected n entries");
    }
    cfg.lagrangians[name] = std::move(s);
  });

  each_entry(doc, "hamiltonians", [&](const std::string& name, const json& e, const std::string& path) {
    HamiltonianSpec s;
    s.n = get_dim(e, path);
    s.eta = get_strings(member(e, "eta", path), path + ".eta");
    if (static_cast<int>(s.eta.size()) != 2 * s.n + 1) fail(path + ".eta", "expected 2n+1 components");
    s.hamiltonian = get_string(member(e, "H", path), path + ".H");
    s.params = get_params(e, path);
    cfg.hamiltonians[name] = std::move(s);
  });

  each_entry(doc, "sodes", [&](const std::string& name, const json& e, const std::string& path) {
    SODESpec s;
    if (e.contains("from_lagrangian")) {
      s.from_lagrangian = get_string(e.at("from_lagrangian"), path + ".from_lagrangian");
      if (e.contains("acceleration_offsets"))
        s.acceleration_offsets = get_numbers(e.at("acceleration_offsets"), path + ".acceleration_offsets");
    } else {
      s.n = get_dim(e, path);
      s.accelerations = get_strings(member(e, "accelerations", path), path + ".accelerations");
      if (static_cast<int>(s.accelerations.size()) != s.n) fail(path + ".accelerations", "expected n entries");
      s.z_rate = get_string(member(e, "z_rate", path), path + ".z_rate");
      s.params = get_params(e, path);
    }
    cfg.sodes[name] = std::move(s);
  });

  each_entry(doc, "action_functions", [&](const std::string& name, const json& e, const std::string& path) {
    ActionSpec s;
    s.n = get_dim(e, path);
    s.expr = get_string(member(e, "expr", path), path + ".expr");
    s.params = get_params(e, path);
    cfg.action_functions[name] = std::move(s);
  });

  each_entry(doc, "sample_plans", [&](const std::string& name, const json& e, const std::string& path) {
    PlanSpec s;
    if (e.contains("mode")) s.mode = get_mode(e.at("mode"), path + ".mode");
    if (e.contains("count")) s.count = get_int(e.at("count"), path + ".count");
    if (s.count < 1) fail(path + ".count", "count must be at least 1");
    if (e.contains("seed")) s.seed = get_seed(e.at("seed"), path + ".seed");
    if (e.contains("box")) s.box = get_interval(e.at("box"), path + ".box");
    if (e.contains("bounds")) {
      const json& b = e.at("bounds");
      if (!b.is_object()) fail(path + ".bounds", "expected an object keyed by coordinate");
      for (const auto& [k, v] : b.items()) s.bounds[k] = get_interval(v, path + ".bounds." + k);
    }
    if (e.contains("points")) {
      const json& pts = member(e, "points", path);
      if (!pts.is_array()) fail(path + ".points", "expected an array");
      for (std::size_t k = 0; k < pts.size(); ++k)
        s.points.push_back(get_point(pts[k], 0, path + ".points[" + std::to_string(k) + "]"));
    }
    if (s.mode == SamplePlan::Mode::points && s.points.empty()) fail(path + ".points", "points mode needs points");
    cfg.sample_plans[name] = std::move(s);
  });

  if (doc.contains("tasks")) {
    const json& t = doc.at("tasks");
    if (!t.is_array()) fail("tasks", "expected an array");
    for (std::size_t k = 0; k < t.size(); ++k) {
      const std::string path = "tasks[" + std::to_string(k) + "]";
      TaskSpec s;
      s.command = get_string(member(t[k], "command", path), path + ".command");
      s.name = t[k].contains("name") ? get_string(t[k].at("name"), path + ".name") : s.command;
      if (t[k].contains("args")) {
        s.args = t[k].at("args");
        if (!s.args.is_object()) fail(path + ".args", "expected an object");
      }
      cfg.tasks.push_back(std::move(s));
    }
  }
  cfg.validate();
  return cfg;
}

void RunConfig::validate() const {
  for (const auto& [name, s] : lagrangians) {
    const std::string path = "lagrangians." + name;
    parse_at(s.expr, s.n, path + ".expr");
    for (std::size_t k = 0; k < s.expected_accelerations.size(); ++k)
      parse_at(s.expected_accelerations[k], s.n, path + ".expected_accelerations[" + std::to_string(k) + "]");
  }
  for (const auto& [name, s] : hamiltonians) {
    const std::string path = "hamiltonians." + name;
    for (std::size_t k = 0; k < s.eta.size(); ++k) parse_at(s.eta[k], s.n, path + ".eta[" + std::to_string(k) + "]");
    parse_at(s.hamiltonian, s.n, path + ".H");
  }
  for (const auto& [name, s] : sodes) {
    const std::string path = "sodes." + name;
    if (!s.from_lagrangian.empty()) {
      const auto it = lagrangians.find(s.from_lagrangian);
      if (it == lagrangians.end()) fail(path + ".from_lagrangian", "unknown Lagrangian '" + s.from_lagrangian + "'");
      if (!s.acceleration_offsets.empty() && static_cast<int>(s.acceleration_offsets.size()) != it->second.n)
        fail(path + ".acceleration_offsets", "expected n entries");
      continue;
    }
    for (std::size_t k = 0; k < s.accelerations.size(); ++k)
      parse_at(s.accelerations[k], s.n, path + ".accelerations[" + std::to_string(k) + "]");
    parse_at(s.z_rate, s.n, path + ".z_rate");
  }
  for (const auto& [name, s] : action_functions) {
    const std::string path = "action_functions." + name;
    const Expr e = parse_at(s.expr, s.n, path + ".expr");
    if (depends_on_param(e, kZetaSymbol)) fail(path + ".expr", "an action function may not reference 'zeta'");
  }
  for (const auto& [name, s] : sample_plans) {
    for (const auto& [coord, iv] : s.bounds) {
      const bool ok = coord == "z" || ((coord[0] == 'q' || coord[0] == 'v') && coord.size() > 1 &&
                                       coord.find_first_not_of("0123456789", 1) == std::string::npos);
      if (!ok) fail("sample_plans." + name + ".bounds." + coord, "unknown coordinate name");
    }
  }

  static const std::map<std::string, std::string> kinds = {
      {"lagrangian", "lagrangian"}, {"lagrangian-bar", "lagrangian"}, {"system", "any"},
      {"system-a", "hamiltonian"},  {"system-b", "hamiltonian"},      {"zeta", "action"},
      {"sode", "sode"},             {"field", "sode"},                {"field-bar", "sode"},
      {"plan", "plan"}};
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    const std::string path = "tasks[" + std::to_string(k) + "].args";
    for (const auto& [key, value] : tasks[k].args.items()) {
      const auto it = kinds.find(key);
      if (it == kinds.end()) continue;
      if (!value.is_string()) fail(path + "." + key, "expected a name");
      const std::string ref = value.get<std::string>();
      const std::string& kind = it->second;
      bool found = false;
      if (kind == "lagrangian") found = lagrangians.count(ref);
      if (kind == "hamiltonian") found = hamiltonians.count(ref);
      if (kind == "action") found = ref == "z" || action_functions.count(ref);
      if (kind == "sode") found = sodes.count(ref) || lagrangians.count(ref);
      if (kind == "plan") found = sample_plans.count(ref);
      if (kind == "any") found = lagrangians.count(ref) || hamiltonians.count(ref) || sodes.count(ref);
      if (!found) fail(path + "." + key, "unknown name '" + ref + "'");
    }
  }
}

SamplePlan RunConfig::plan(const std::string& name, int n) const {
  const auto it = sample_plans.find(name);
  if (it == sample_plans.end()) throw ConfigError("sample_plans: unknown plan '" + name + "'");
  const PlanSpec& s = it->second;
  if (s.mode == SamplePlan::Mode::points) {
    for (const auto& p : s.points)
      if (p.dim() != n)
        throw ConfigError("sample_plans." + name + ".points: dimension differs from task dimension " +
                          std::to_string(n));
    return SamplePlan::explicit_points(s.points);
  }
  SamplePlan p;
  p.mode = s.mode;
  p.count = s.count;
  p.seed = s.seed.value_or(seed);
  p.bounds.assign(2 * n + 1, s.box);
  for (const auto& [coord, iv] : s.bounds) {
    for (int a = 0; a < 2 * n + 1; ++a)
      if (CoordId::from_flat(a, n).name() == coord) p.bounds[a] = iv;
  }
  return p;
}

Expr RunConfig::lagrangian_expr(const std::string& name, int* n, ParamSet* params) const {
  const auto it = lagrangians.find(name);
  if (it == lagrangians.end()) throw ConfigError("lagrangians: unknown name '" + name + "'");
  if (n) *n = it->second.n;
  if (params) *params = it->second.params;
  return parse_at(it->second.expr, it->second.n, "lagrangians." + name + ".expr");
}

ContactLagrangianSystem RunConfig::lagrangian(const std::string& name) const {
  int n = 0;
  ParamSet params;
  const Expr L = lagrangian_expr(name, &n, &params);
  if (depends_on_param(L, kZetaSymbol))
    throw ConfigError("lagrangians." + name + ": written in a zeta-chart; use it as lagrangian-bar");
  return ContactLagrangianSystem(n, L, params);
}

ContactHamiltonianSystem RunConfig::hamiltonian(const std::string& name) const {
  const auto it = hamiltonians.find(name);
  if (it == hamiltonians.end()) throw ConfigError("hamiltonians: unknown name '" + name + "'");
  const HamiltonianSpec& s = it->second;
  std::vector<Expr> c;
  for (std::size_t k = 0; k < s.eta.size(); ++k)
    c.push_back(parse_at(s.eta[k], s.n, "hamiltonians." + name + ".eta[" + std::to_string(k) + "]"));
  return ContactHamiltonianSystem(CoordOneForm(s.n, std::move(c), s.params),
                                  parse_at(s.hamiltonian, s.n, "hamiltonians." + name + ".H"), s.params);
}

ActionFunction RunConfig::action_function(const std::string& name, int n) const {
  if (name == "z") return ActionFunction::identity(n);
  const auto it = action_functions.find(name);
  if (it == action_functions.end()) throw ConfigError("action_functions: unknown name '" + name + "'");
  if (it->second.n != n)
    throw ConfigError("action_functions." + name + ": dimension " + std::to_string(it->second.n) +
                      " differs from task dimension " + std::to_string(n));
  return ActionFunction(n, parse_at(it->second.expr, n, "action_functions." + name + ".expr"), it->second.params);
}

SODESystem RunConfig::sode(const std::string& name) const {
  const auto it = sodes.find(name);
  if (it == sodes.end()) {
    if (lagrangians.count(name)) return SODESystem::from_field(herglotz_field(lagrangian(name)));
    throw ConfigError("sodes: unknown name '" + name + "'");
  }
  const SODESpec& s = it->second;
  if (!s.from_lagrangian.empty()) {
    SODESystem base = SODESystem::from_field(herglotz_field(lagrangian(s.from_lagrangian)));
    for (std::size_t i = 0; i < s.acceleration_offsets.size(); ++i)
      if (s.acceleration_offsets[i] != 0.0) base = base.perturbed(static_cast<int>(i), s.acceleration_offsets[i]);
    return base;
  }
  std::vector<Expr> a;
  for (std::size_t k = 0; k < s.accelerations.size(); ++k)
    a.push_back(parse_at(s.accelerations[k], s.n, "sodes." + name + ".accelerations[" + std::to_string(k) + "]"));
  return SODESystem(s.n, std::move(a), parse_at(s.z_rate, s.n, "sodes." + name + ".z_rate"), s.params);
}

int RunConfig::dimension_of(const std::string& name) const {
  if (auto it = lagrangians.find(name); it != lagrangians.end()) return it->second.n;
  if (auto it = hamiltonians.find(name); it != hamiltonians.end()) return it->second.n;
  if (auto it = sodes.find(name); it != sodes.end())
    return it->second.from_lagrangian.empty() ? it->second.n : dimension_of(it->second.from_lagrangian);
  throw ConfigError("unknown system '" + name + "'");
}

RunConfig load_config(const std::optional<std::string>& path) {
  json doc = builtin_fixtures();
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError(*path + ": cannot open configuration file");
    json user;
    try {
      user = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(*path + ": invalid JSON: " + e.what());
    }
    if (!user.is_object()) throw ConfigError("$: configuration must be a JSON object");
    for (const auto& [k, v] : user.items()) {
      if (v.is_object() && doc.contains(k) && doc[k].is_object() && k != "tolerances") {
        for (const auto& [name, entry] : v.items()) doc[k][name] = entry;
      } else {
        doc[k] = v;
      }
    }
  }
  RunConfig cfg = parse_config(doc);
  if (const auto env = env_seed()) {
    cfg.seed = *env;
    for (auto& [name, plan] : cfg.sample_plans)
      if (plan.seed) plan.seed = *env;
  }
  return cfg;
}

}  // namespace herglotz
