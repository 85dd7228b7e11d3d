#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "herglotz/contact.hpp"
#include "herglotz/extended.hpp"
#include "herglotz/inverse.hpp"
#include "herglotz/lagrangian.hpp"
#include "herglotz/report.hpp"

namespace herglotz {

/// Invalid configuration; the message starts with the offending JSON path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct LagrangianSpec {
  int n = 1;
  std::string expr;
  ParamSet params;
  std::optional<StatePoint> initial_state;
  std::vector<std::string> expected_accelerations;
};

struct HamiltonianSpec {
  int n = 1;
  std::vector<std::string> eta;
  std::string hamiltonian;
  ParamSet params;
};

/// Either explicit (accelerations, z_rate) or the Herglotz field of a named
/// Lagrangian with constant offsets added to the accelerations.
struct SODESpec {
  int n = 1;
  std::vector<std::string> accelerations;
  std::string z_rate;
  ParamSet params;
  std::string from_lagrangian;
  std::vector<double> acceleration_offsets;
};

struct ActionSpec {
  int n = 1;
  std::string expr;
  ParamSet params;
};

/// A sample plan template; the box adapts to the dimension of the task.
struct PlanSpec {
  SamplePlan::Mode mode = SamplePlan::Mode::random;
  int count = 200;
  std::optional<std::uint64_t> seed;
  Interval box{-1.0, 1.0};
  std::map<std::string, Interval> bounds;  // per coordinate name, overrides box
  std::vector<StatePoint> points;
};

struct TaskSpec {
  std::string name;
  std::string command;
  nlohmann::json args = nlohmann::json::object();
};

struct RunConfig {
  std::map<std::string, LagrangianSpec> lagrangians;
  std::map<std::string, HamiltonianSpec> hamiltonians;
  std::map<std::string, SODESpec> sodes;
  std::map<std::string, ActionSpec> action_functions;
  std::map<std::string, PlanSpec> sample_plans;
  Tolerances tolerances;
  std::vector<TaskSpec> tasks;
  std::string output_dir = "herglotz-out";
  std::uint64_t seed = 0;

  /// Checks names, dimensions and expressions. Throws ConfigError.
  void validate() const;

  SamplePlan plan(const std::string& name, int n) const;

  ContactLagrangianSystem lagrangian(const std::string& name) const;
  /// The expression of a Lagrangian as written, possibly in a zeta-chart.
  Expr lagrangian_expr(const std::string& name, int* n = nullptr, ParamSet* params = nullptr) const;
  ContactHamiltonianSystem hamiltonian(const std::string& name) const;
  ActionFunction action_function(const std::string& name, int n) const;
  /// A named SODE, or the Herglotz field of a named Lagrangian.
  SODESystem sode(const std::string& name) const;
  int dimension_of(const std::string& name) const;
};

/// Parses a configuration document. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc);

/// The built-in fixture pack overlaid with the file at `path`, if given:
/// named entries replace same-named ones, scalars and the task list replace
/// the built-in values. The environment variable HERGLOTZ_SEED overrides
/// every seed.
RunConfig load_config(const std::optional<std::string>& path);

/// The built-in fixture pack as a configuration document.
const nlohmann::json& builtin_fixtures();

}  // namespace herglotz
