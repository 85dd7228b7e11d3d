#include "herglotz/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "herglotz/dynamics.hpp"
#include "herglotz/equivalence.hpp"
#include "herglotz/extended.hpp"
#include "herglotz/inverse.hpp"
#include "herglotz/lagrangian.hpp"

namespace herglotz {

using nlohmann::json;

namespace {

struct Args {
  const TaskSpec& task;

  bool has(const std::string& key) const { return task.args.contains(key) && !task.args.at(key).is_null(); }

  std::string str(const std::string& key) const {
    if (!has(key)) throw ConfigError(task.name + ".args." + key + ": required");
    const json& v = task.args.at(key);
    if (!v.is_string()) throw ConfigError(task.name + ".args." + key + ": expected a string");
    return v.get<std::string>();
  }

  std::string str(const std::string& key, const std::string& fallback) const { return has(key) ? str(key) : fallback; }

  double num(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = task.args.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      try {
        std::size_t used = 0;
        const double x = std::stod(v.get<std::string>(), &used);
        if (used == v.get<std::string>().size()) return x;
      } catch (const std::exception&) {
      }
    }
    throw ConfigError(task.name + ".args." + key + ": expected a number");
  }

  int integer(const std::string& key, int fallback) const {
    const double x = num(key, fallback);
    if (x != std::floor(x) || x < 1) throw ConfigError(task.name + ".args." + key + ": expected a positive integer");
    return static_cast<int>(x);
  }
};

CheckReport error_report(const std::string& task, const std::string& why, const Tolerances& tol) {
  CheckReport r;
  r.task = task;
  r.tolerances = tol;
  r.error(why);
  r.finalize();
  return r;
}

StatePoint initial_state(const RunConfig& cfg, const Args& args, const std::string& system, int n) {
  if (args.has("initial")) {
    const json& v = args.task.args.at("initial");
    std::vector<double> x;
    if (v.is_string()) {
      std::stringstream ss(v.get<std::string>());
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          x.push_back(std::stod(item));
        } catch (const std::exception&) {
          throw ConfigError(args.task.name + ".args.initial: expected comma-separated numbers");
        }
      }
    } else if (v.is_array()) {
      for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(args.task.name + ".args.initial: expected numbers");
        x.push_back(e.get<double>());
      }
    }
    if (static_cast<int>(x.size()) != 2 * n + 1)
      throw ConfigError(args.task.name + ".args.initial: expected 2n+1 = " + std::to_string(2 * n + 1) + " values");
    return StatePoint(std::vector<double>(x.begin(), x.begin() + n), std::vector<double>(x.begin() + n, x.end() - 1),
                      x.back());
  }
  const auto it = cfg.lagrangians.find(system);
  if (it != cfg.lagrangians.end() && it->second.initial_state) return *it->second.initial_state;
  throw ConfigError(args.task.name + ".args.initial: no initial state given and '" + system + "' has none");
}

std::string format(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

TaskOutcome simulate(const RunConfig& cfg, const Args& args) {
  const std::string system = args.str("system");
  const double t_end = args.num("t", 1.0);
  const double dt = args.num("dt", 1e-3);
  const int n = cfg.dimension_of(system);
  const StatePoint p0 = initial_state(cfg, args, system, n);

  TaskOutcome out;
  CheckReport& r = out.report;
  r.task = args.task.name;
  r.tolerances = cfg.tolerances;

  RateFunction rate;
  std::function<double(const StatePoint&)> residual;
  std::string residual_name = "residual";
  std::optional<CoordVectorField> field;
  std::optional<ContactHamiltonianSystem> ham;
  std::vector<Expr> expected;
  ParamSet params;

  if (cfg.lagrangians.count(system)) {
    const ContactLagrangianSystem L = cfg.lagrangian(system);
    field = herglotz_field(L);
    params = L.params();
    const auto& spec = cfg.lagrangians.at(system);
    for (const auto& e : spec.expected_accelerations) expected.push_back(parse(e, n));
    if (!expected.empty()) {
      residual_name = "acceleration_residual";
      residual = [&, n](const StatePoint& p) {
        double mx = 0.0;
        for (int i = 0; i < n; ++i)
          mx = std::max(mx, std::abs(eval(field->component(n + i), p, params) - eval(expected[i], p, params)));
        return mx;
      };
    } else {
      residual_name = "herglotz_residual";
      residual = [&, L, n](const StatePoint& p) {
        Eigen::VectorXd a(n);
        for (int i = 0; i < n; ++i) a[i] = eval(field->component(n + i), p, params);
        return herglotz_residual(L, p, a).lpNorm<Eigen::Infinity>();
      };
    }
    rate = [&](const StatePoint& p) { return field->at(p); };
  } else if (cfg.hamiltonians.count(system)) {
    ham = cfg.hamiltonian(system);
    residual_name = "contraction_residual";
    rate = [&](const StatePoint& p) { return hamiltonian_field(*ham, p); };
    residual = [&](const StatePoint& p) {
      return std::abs(ham->eta().at(p).dot(hamiltonian_field(*ham, p)) + ham->hamiltonian_at(p));
    };
  } else {
    field = cfg.sode(system).field();
    residual_name = "q_rate_minus_v";
    rate = [&](const StatePoint& p) { return field->at(p); };
    residual = [&, n](const StatePoint& p) {
      const Eigen::VectorXd x = field->at(p);
      double mx = 0.0;
      for (int i = 0; i < n; ++i) mx = std::max(mx, std::abs(x[i] - p.v[i]));
      return mx;
    };
  }

  Trajectory traj;
  try {
    traj = integrate(rate, p0, t_end, dt);
  } catch (const IntegrationError& e) {
    traj = e.partial();
    r.error(e.what());
  }
  std::vector<double> col;
  col.reserve(traj.states.size());
  double mx = 0.0;
  for (const auto& s : traj.states) {
    try {
      col.push_back(residual(s));
    } catch (const Error& e) {
      col.push_back(std::nan(""));
      if (!r.forced()) r.error(std::string("residual evaluation failed: ") + e.what());
    }
    if (std::isfinite(col.back())) mx = std::max(mx, col.back());
  }
  ResidualRecord rec;
  rec.point = traj.states.back();
  rec.label = "trajectory";
  rec.residuals = {{residual_name, mx}};
  rec.info = {{"t_end", traj.times.back()}, {"steps", static_cast<double>(traj.times.size() - 1)}};
  r.records.push_back(std::move(rec));
  r.finalize();

  std::ostringstream csv;
  write_csv(csv, traj, {{"residual", col}});
  out.csv = csv.str();
  out.lines.push_back("integrated " + std::to_string(traj.times.size() - 1) + " steps to t = " +
                      format(traj.times.back()));
  return out;
}

TaskOutcome herglotz_task(const RunConfig& cfg, const Args& args) {
  const std::string name = args.str("lagrangian");
  int n = 0;
  ParamSet params;
  const Expr written = cfg.lagrangian_expr(name, &n, &params);
  const SamplePlan plan = cfg.plan(args.str("plan", "default"), n);
  TaskOutcome out;
  CheckReport& r = out.report;
  r.task = args.task.name;
  r.tolerances = cfg.tolerances;
  r.plan = plan;

  const bool extended = args.has("zeta") || depends_on_param(written, kZetaSymbol);
  const ActionFunction zeta = cfg.action_function(args.str("zeta", "z"), n);
  const ExtendedLagrangianSystem sys(n, pull_back(written, zeta), zeta, params);
  const CoordVectorField xi = extended ? zeta_herglotz_field(sys)
                                       : herglotz_field(ContactLagrangianSystem(n, written, params));
  const ContractProbe probe = zeta_herglotz_contract(sys, xi);
  const Expr rate_defect = ops::sub(xi.apply(zeta.expr()), sys.lagrangian());

  for (int a = 0; a < 2 * n + 1; ++a) {
    const std::string line = "xi[" + CoordId::from_flat(a, n).name() + "] = " + to_string(xi.component(a));
    out.lines.push_back(line);
    r.diagnostics.push_back(line);
  }
  const auto pts = sample_points(plan, [&](const StatePoint& p) { return std::abs(zeta.dz_at(p)) > 1e-8; });
  for (const auto& p : pts) {
    const Regularity reg = zeta_regularity(sys, p, cfg.tolerances.det_tol);
    if (!reg.ok) {
      r.error("zeta-regularity violated (det W^zeta = " + format(reg.det) + ")");
      break;
    }
    const ContractResiduals c = probe.at(p);
    double solver = 0.0;
    try {
      solver = (xi.at(p) - zeta_herglotz_field_at(sys, p)).lpNorm<Eigen::Infinity>();
    } catch (const SingularSystem& e) {
      r.error(e.what());
      break;
    }
    r.records.push_back({p,
                         {},
                         {{"contraction", c.contraction},
                          {"lie", c.lie},
                          {"action_rate", std::abs(eval(rate_defect, p, sys.params()))},
                          {"solver_mismatch", solver}},
                         {}});
  }
  r.finalize();
  return out;
}

TaskOutcome legendre_task(const RunConfig& cfg, const Args& args) {
  const std::string name = args.str("lagrangian");
  int n = 0;
  ParamSet params;
  const Expr written = cfg.lagrangian_expr(name, &n, &params);
  const ActionFunction zeta = cfg.action_function(args.str("zeta", "z"), n);
  const ExtendedLagrangianSystem sys(n, pull_back(written, zeta), zeta, params);
  const SamplePlan plan = cfg.plan(args.str("plan", "default"), n);
  TaskOutcome out;
  CheckReport& r = out.report;
  r.task = args.task.name;
  r.tolerances = cfg.tolerances;
  r.plan = plan;
  for (int i = 0; i < n; ++i) out.lines.push_back("p" + std::to_string(i + 1) + " = " + to_string(sys.momentum(i)));
  const auto pts = sample_points(plan, [&](const StatePoint& p) { return std::abs(zeta.dz_at(p)) > 1e-8; });
  for (const auto& p : pts) {
    try {
      const LegendrePoint lp = zeta_legendre(sys, p, cfg.tolerances.det_tol);
      NamedValues info;
      for (int i = 0; i < n; ++i) info.emplace_back("p" + std::to_string(i + 1), lp.p[i]);
      info.emplace_back("zeta", lp.zeta);
      r.records.push_back({p, {}, {{"pullback", legendre_pullback_residual(sys, p)}}, info});
    } catch (const RegularityError& e) {
      r.error(e.what());
      break;
    }
  }
  r.finalize();
  return out;
}

SampledCurve curve_for(const RunConfig& cfg, const Args& args, const ContactLagrangianSystem& L, const StatePoint& p0,
                       int points) {
  const int refine = 10;
  const double dt = 1.0 / ((points - 1) * refine);
  const Trajectory fine = integrate(herglotz_field(L), p0, 1.0, dt);
  Trajectory coarse;
  for (std::size_t k = 0; k < fine.times.size(); k += refine) {
    coarse.times.push_back(fine.times[k]);
    coarse.states.push_back(fine.states[k]);
  }
  coarse.times.back() = 1.0;
  SampledCurve c = SampledCurve::from_trajectory(coarse);

  const std::string kind = args.str("curve", "solution");
  if (kind == "solution") return c;
  const int n = L.dim();
  if (kind == "line") {
    const Eigen::VectorXd q0 = c.positions.front(), q1 = c.positions.back();
    for (std::size_t k = 0; k < c.times.size(); ++k) {
      c.positions[k] = q0 + c.times[k] * (q1 - q0);
      (*c.velocities)[k] = q1 - q0;
    }
    return c;
  }
  if (kind == "perturbed") {
    std::mt19937_64 rng(cfg.plan(args.str("plan", "default"), n).seed);
    for (int i = 0; i < n; ++i) {
      for (int j = 1; j <= 3; ++j) {
        const double amp = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
        const double w = j * std::numbers::pi;
        for (std::size_t k = 0; k < c.times.size(); ++k) {
          c.positions[k][i] += amp * std::sin(w * c.times[k]);
          (*c.velocities)[k][i] += amp * w * std::cos(w * c.times[k]);
        }
      }
    }
    return c;
  }
  throw ConfigError(args.task.name + ".args.curve: expected solution, line or perturbed");
}

TaskOutcome stationarity_task(const RunConfig& cfg, const Args& args) {
  const std::string name = args.str("lagrangian");
  const ContactLagrangianSystem L = cfg.lagrangian(name);
  const StatePoint p0 = initial_state(cfg, args, name, L.dim());
  const int points = args.integer("points", 200);
  if (points < 3) throw ConfigError(args.task.name + ".args.points: need at least 3");
  const SampledCurve curve = curve_for(cfg, args, L, p0, points);
  TaskOutcome out;
  out.report = stationarity_test(L.lagrangian(), L.params(), curve, p0.z, args.integer("perturbations", 8),
                                 args.num("amplitude", 1e-4), args.num("stat_tol", 1e-3));
  out.report.task = args.task.name;
  return out;
}

TaskOutcome check_task(const RunConfig& cfg, const Args& args) {
  const std::string& cmd = args.task.command;
  const Tolerances& tol = cfg.tolerances;
  TaskOutcome out;
  const auto plan_for = [&](int n) { return cfg.plan(args.str("plan", "default"), n); };

  if (cmd == "check-eq" || cmd == "check-strong-eq") {
    const ContactLagrangianSystem L = cfg.lagrangian(args.str("lagrangian"));
    int nb = 0;
    ParamSet pb;
    const Expr lbar = cfg.lagrangian_expr(args.str("lagrangian-bar"), &nb, &pb);
    if (nb != L.dim()) throw ConfigError(args.task.name + ": Lagrangians have different dimensions");
    const ActionFunction zeta = cfg.action_function(args.str("zeta", "z"), L.dim());
    out.report = cmd == "check-eq" ? general_equivalence_check(L, lbar, zeta, plan_for(L.dim()), tol, pb)
                                   : strong_equivalence_check(L, lbar, zeta, plan_for(L.dim()), tol, pb);
  } else if (cmd == "check-conformal" || cmd == "check-dynamical" || cmd == "check-zero-set") {
    const ContactHamiltonianSystem a = cfg.hamiltonian(args.str("system-a"));
    const ContactHamiltonianSystem b = cfg.hamiltonian(args.str("system-b"));
    const SamplePlan plan = plan_for(a.dim());
    if (cmd == "check-conformal") {
      std::optional<Expr> f;
      if (args.has("factor")) {
        try {
          f = parse(args.str("factor"), a.dim());
        } catch (const Error& e) {
          throw ConfigError(args.task.name + ".args.factor: " + e.what());
        }
      }
      out.report = conformal_similarity_check(a, b, f, plan, tol);
    } else if (cmd == "check-dynamical") {
      out.report = dynamical_equivalence_check(a, b, plan, tol);
    } else {
      out.report = zero_set_diagnostic(a, b, plan, tol);
    }
  } else if (cmd == "check-horizontal") {
    const SODESystem xi = cfg.sode(args.str("field"));
    const SODESystem xibar = cfg.sode(args.str("field-bar"));
    const ActionFunction zeta = cfg.action_function(args.str("zeta", "z"), xi.dim());
    out.report = horizontal_similarity_check(xi.field(), xibar.field(), zeta, plan_for(xi.dim()), tol);
  } else if (cmd == "check-projectable") {
    const SODESystem xi = cfg.sode(args.str("field"));
    out.report = projectability_check(xi.field(), plan_for(xi.dim()), tol);
  } else if (cmd == "check-inverse") {
    const SODESystem s = cfg.sode(args.str("sode"));
    InverseResult res = naive_inverse_check(s, plan_for(s.dim()), tol);
    if (res.lagrangian) out.lines.push_back("L = " + to_string(*res.lagrangian));
    out.report = std::move(res.report);
  } else if (cmd == "check-inverse-ext") {
    const SODESystem s = cfg.sode(args.str("sode"));
    const ActionFunction zeta = cfg.action_function(args.str("zeta", "z"), s.dim());
    InverseResult res = extended_inverse_check(s, zeta, plan_for(s.dim()), tol);
    if (res.lagrangian) out.lines.push_back("L = " + to_string(*res.lagrangian));
    if (res.factor) out.lines.push_back("g = " + to_string(*res.factor));
    out.report = std::move(res.report);
  } else if (cmd == "check-di-ei") {
    const SODESystem s = cfg.sode(args.str("sode"));
    out.report = di_ei_diagnostics(s, plan_for(s.dim()), tol);
  } else {
    throw ConfigError(args.task.name + ": unknown command '" + cmd + "'");
  }
  out.report.task = args.task.name;
  return out;
}

}  // namespace

const std::vector<std::string>& task_commands() {
  static const std::vector<std::string> cmds = {
      "simulate",          "herglotz",        "check-strong-eq", "check-eq",       "check-horizontal",
      "check-inverse",     "check-inverse-ext", "check-conformal", "check-dynamical", "legendre",
      "stationarity",      "check-zero-set",  "check-projectable", "check-di-ei"};
  return cmds;
}

TaskOutcome run_task(const RunConfig& cfg, const TaskSpec& task) {
  const Args args{task};
  try {
    if (task.command == "simulate") return simulate(cfg, args);
    if (task.command == "herglotz") return herglotz_task(cfg, args);
    if (task.command == "legendre") return legendre_task(cfg, args);
    if (task.command == "stationarity") return stationarity_task(cfg, args);
    return check_task(cfg, args);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    TaskOutcome out;
    out.report = error_report(task.name, e.what(), cfg.tolerances);
    return out;
  }
}

void write_outcome(const std::string& dir, const std::string& name, const TaskOutcome& out) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream f(fs::path(dir) / (name + ".json"));
    if (!f) throw Error("cannot write report to " + dir);
    f << to_json(out.report).dump(2) << '\n';
  }
  if (out.csv) {
    std::ofstream f(fs::path(dir) / (name + ".csv"));
    if (!f) throw Error("cannot write trajectory to " + dir);
    f << *out.csv;
  }
}

int batch_exit_code(const std::vector<Verdict>& verdicts) {
  int code = 0;
  for (Verdict v : verdicts) code = std::max(code, exit_code(v));
  return code;
}

namespace {

struct OptionSpec {
  std::string name;
  std::string help;
};

const std::map<std::string, std::vector<OptionSpec>>& command_options() {
  static const std::map<std::string, std::vector<OptionSpec>> opts = {
      {"simulate",
       {{"system", "Lagrangian, Hamiltonian or SODE name"},
        {"t", "final time"},
        {"dt", "step size"},
        {"initial", "initial state q1..qn,v1..vn,z"}}},
      {"herglotz",
       {{"lagrangian", "Lagrangian name"}, {"zeta", "action function name"}, {"plan", "sample plan name"}}},
      {"check-strong-eq",
       {{"lagrangian", "Lagrangian L"},
        {"lagrangian-bar", "Lagrangian Lbar in its zeta-chart"},
        {"zeta", "action function"},
        {"plan", "sample plan"}}},
      {"check-eq",
       {{"lagrangian", "Lagrangian L"},
        {"lagrangian-bar", "Lagrangian Lbar in its zeta-chart"},
        {"zeta", "action function"},
        {"plan", "sample plan"}}},
      {"check-horizontal",
       {{"field", "SODE xi"}, {"field-bar", "SODE xibar"}, {"zeta", "action function"}, {"plan", "sample plan"}}},
      {"check-projectable", {{"field", "SODE"}, {"plan", "sample plan"}}},
      {"check-inverse", {{"sode", "SODE"}, {"plan", "sample plan"}}},
      {"check-inverse-ext", {{"sode", "SODE"}, {"zeta", "action function"}, {"plan", "sample plan"}}},
      {"check-di-ei", {{"sode", "SODE"}, {"plan", "sample plan"}}},
      {"check-conformal",
       {{"system-a", "Hamiltonian system"},
        {"system-b", "Hamiltonian system"},
        {"factor", "conformal factor expression"},
        {"plan", "sample plan"}}},
      {"check-dynamical", {{"system-a", "Hamiltonian system"}, {"system-b", "Hamiltonian system"}, {"plan", "sample plan"}}},
      {"check-zero-set", {{"system-a", "Hamiltonian system"}, {"system-b", "Hamiltonian system"}, {"plan", "sample plan"}}},
      {"legendre", {{"lagrangian", "Lagrangian name"}, {"zeta", "action function"}, {"plan", "sample plan"}}},
      {"stationarity",
       {{"lagrangian", "Lagrangian name"},
        {"curve", "solution, line or perturbed"},
        {"points", "curve samples"},
        {"perturbations", "sine modes per coordinate"},
        {"amplitude", "central-difference step"},
        {"initial", "initial state q1..qn,v1..vn,z"}}},
  };
  return opts;
}

const char* command_description(const std::string& cmd) {
  static const std::map<std::string, const char*> text = {
      {"simulate", "integrate a system with RK4 and write the trajectory CSV"},
      {"herglotz", "print the Herglotz vector field of a Lagrangian"},
      {"check-strong-eq", "test strong equivalence of L and Lbar under zeta"},
      {"check-eq", "test general equivalence of L and Lbar under zeta"},
      {"check-horizontal", "test horizontal similarity of two SODEs under zeta"},
      {"check-projectable", "test that the accelerations of a SODE are z-independent"},
      {"check-inverse", "recover a Lagrangian from a SODE in the z-chart"},
      {"check-inverse-ext", "recover a Lagrangian from a SODE in a zeta-chart"},
      {"check-di-ei", "compare the D_i and E_i obstructions of a SODE"},
      {"check-conformal", "test conformal equivalence of two Hamiltonian systems"},
      {"check-dynamical", "test that two Hamiltonian systems share their vector field"},
      {"check-zero-set", "report points where the zero sets or signs of two Hamiltonians differ"},
      {"legendre", "check that the zeta-Legendre map pulls the contact form back to eta_L"},
      {"stationarity", "probe the action along a curve with sine perturbations"},
  };
  return text.at(cmd);
}

void print_outcome(const std::string& name, const TaskOutcome& out) {
  for (const auto& line : out.lines) std::cout << line << '\n';
  std::cout << name << ": " << to_string(out.report.verdict) << " (max residual " << format(out.report.max_residual)
            << ")\n";
  for (const auto& d : out.report.diagnostics)
    if (d.rfind("xi[", 0) != 0) std::cout << "  " << d << '\n';
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Contact Lagrangian and Hamiltonian mechanics checker"};
  app.require_subcommand(1);
  std::string config_path;
  std::string output_dir;
  app.add_option("-c,--config", config_path, "JSON configuration file (built-in fixtures are always loaded)");
  app.add_option("-o,--output-dir", output_dir, "directory for reports and trajectories");

  std::map<std::string, CLI::App*> subs;
  for (const auto& [cmd, opts] : command_options()) {
    CLI::App* sub = app.add_subcommand(cmd, command_description(cmd));
    for (const auto& o : opts) sub->add_option("--" + o.name, o.help);
    subs[cmd] = sub;
  }
  CLI::App* run = app.add_subcommand("run", "run every task listed in the configuration");
  CLI::App* list = app.add_subcommand("list", "list the available fixtures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 3;
  }

  try {
    const RunConfig cfg = load_config(config_path.empty() ? std::nullopt : std::optional<std::string>(config_path));
    const std::string dir = output_dir.empty() ? cfg.output_dir : output_dir;

    if (list->parsed()) {
      const auto names = [](const auto& m) {
        std::string s;
        for (const auto& [k, v] : m) s += (s.empty() ? "" : " ") + k;
        return s;
      };
      std::cout << "lagrangians: " << names(cfg.lagrangians) << '\n'
                << "hamiltonians: " << names(cfg.hamiltonians) << '\n'
                << "sodes: " << names(cfg.sodes) << '\n'
                << "action_functions: z " << names(cfg.action_functions) << '\n'
                << "sample_plans: " << names(cfg.sample_plans) << '\n';
      return 0;
    }

    if (run->parsed()) {
      std::vector<Verdict> verdicts;
      for (const auto& task : cfg.tasks) {
        const TaskOutcome out = run_task(cfg, task);
        write_outcome(dir, task.name, out);
        print_outcome(task.name, out);
        verdicts.push_back(out.report.verdict);
      }
      return batch_exit_code(verdicts);
    }

    for (const auto& [cmd, sub] : subs) {
      if (!sub->parsed()) continue;
      TaskSpec task;
      task.name = cmd;
      task.command = cmd;
      for (const auto& o : command_options().at(cmd)) {
        const CLI::Option* opt = sub->get_option("--" + o.name);
        if (opt->count() > 0) task.args[o.name] = opt->as<std::string>();
      }
      const TaskOutcome out = run_task(cfg, task);
      write_outcome(dir, task.name, out);
      print_outcome(task.name, out);
      return exit_code(out.report.verdict);
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 3;
}

}  // namespace herglotz
