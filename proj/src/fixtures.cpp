#include "herglotz/config.hpp"

namespace herglotz {

namespace {

// Lagrangians whose expression references `zeta` are written in the chart of
// an action function and are only usable as lagrangian-bar.
constexpr const char* kFixtures = R"json(
{
  "seed": 1,
  "output_dir": "herglotz-out",
  "tolerances": {"pass_tol": 1e-8, "fail_tol": 1e-4, "det_tol": 1e-10},

  "lagrangians": {
    "free": {"n": 1, "expr": "0.5*v1^2", "initial_state": {"q": [0], "v": [1], "z": 0}},
    "damped": {"n": 1, "expr": "0.5*v1^2 - gam*z", "params": {"gam": 0.1},
               "initial_state": {"q": [0], "v": [2], "z": 0}, "expected_accelerations": ["-gam*v1"]},
    "damped_stiff": {"n": 1, "expr": "0.5*v1^2 - gam*z", "params": {"gam": 25},
                     "initial_state": {"q": [0], "v": [2], "z": 0.5}, "expected_accelerations": ["-gam*v1"]},
    "parachute": {"n": 1, "expr": "0.5*v1^2 - m*g/(2*gam)*(exp(2*gam*q1) - 1) + 2*gam*v1*z",
                  "params": {"m": 1, "gam": 1, "g": 9.8},
                  "initial_state": {"q": [0], "v": [2], "z": 0},
                  "expected_accelerations": ["gam*v1^2 - g"]},
    "parachute_bar_f2": {"n": 1,
                         "expr": "0.5*v1^2 + (2*q1 - 2*gam*q1^2 + 2*gam*zeta)*v1 - m*g/(2*gam)*(exp(2*gam*q1) - 1)",
                         "params": {"m": 1, "gam": 1, "g": 9.8}},
    "oscillator": {"n": 1, "expr": "0.5*v1^2 - 0.5*q1^2", "initial_state": {"q": [1], "v": [0], "z": 0},
            "expected_accelerations": ["-q1"]},
    "oscillator_bar": {"n": 1, "expr": "2*(0.5*v1^2 - 0.5*q1^2) + cos(q1)*v1"},
    "drag": {"n": 1, "expr": "0.5*v1^2 - gam*z", "params": {"gam": 0.3},
            "initial_state": {"q": [0], "v": [1], "z": 0}, "expected_accelerations": ["-gam*v1"]},
    "drag_bar1": {"n": 1, "expr": "0.5*v1^2 - gam*zeta", "params": {"gam": 0.3}},
    "drag_bar2": {"n": 1, "expr": "(0.5 - gam)*v1^2 - gam*zeta", "params": {"gam": 0.3}},
    "drag_bar3": {"n": 1, "expr": "0.5*v1^2 - 2*gam*v1^3 - gam*zeta", "params": {"gam": 0.3}},
    "drag_gam05": {"n": 1, "expr": "0.5*v1^2 - gam*z", "params": {"gam": 0.5},
                  "initial_state": {"q": [0], "v": [1], "z": 0}},
    "drag_bar2_gam05": {"n": 1, "expr": "(0.5 - gam)*v1^2 - gam*zeta", "params": {"gam": 0.5}},
    "coupled2": {"n": 2, "expr": "0.5*v1^2 + 0.5*v2^2 + k*q1*q2 - gam*z*(1 + 0.1*v1^2)",
                 "params": {"k": 0.5, "gam": 0.1}, "initial_state": {"q": [0, 1], "v": [1, 0], "z": 0}},
    "magnetic": {"n": 3, "expr": "0.5*(v1^2 + v2^2 + v3^2) + 0.5*B*(q1*v2 - q2*v1) - gam*z",
                 "params": {"B": 1, "gam": 0.2}, "initial_state": {"q": [0, 0, 0], "v": [1, 0, 0.5], "z": 0}}
  },

  "hamiltonians": {
    "flip_H": {"n": 1, "eta": ["-v1", "0", "1"], "H": "v1*q1 + z"},
    "flip_Hbar": {"n": 1, "eta": ["v1", "0", "1"], "H": "z - v1*q1"},
    "darboux_H3": {"n": 1, "eta": ["-v1", "0", "1"], "H": "v1*q1 + z + 3"},
    "reeb_H2": {"n": 1, "eta": ["-v1", "0", "1"], "H": "2"},
    "reeb_Hbar": {"n": 1, "eta": ["0.5*v1", "0", "-0.5"], "H": "-1"}
  },

  "sodes": {
    "parachute_sode": {"from_lagrangian": "parachute"},
    "parachute_sode_perturbed": {"from_lagrangian": "parachute", "acceleration_offsets": [0.1]},
    "drag_sode": {"from_lagrangian": "drag"},
    "drag_sode_perturbed": {"from_lagrangian": "drag", "acceleration_offsets": [0.1]},
    "hs_xi": {"n": 1, "accelerations": ["-gam*v1"], "z_rate": "-gam*v1^2", "params": {"gam": 0.3}},
    "hs_xihat": {"n": 1, "accelerations": ["-gam*v1"], "z_rate": "0", "params": {"gam": 0.3}}
  },

  "action_functions": {
    "zplusv": {"n": 1, "expr": "z + v1"},
    "zplusv2": {"n": 1, "expr": "z + v1^2"},
    "zplusv3": {"n": 1, "expr": "z + v1^3"},
    "z_plus_q2": {"n": 1, "expr": "z + q1^2"},
    "z2_plus_sinq": {"n": 1, "expr": "2*z + sin(q1)"},
    "z_minus_half_v2": {"n": 1, "expr": "z - 0.5*v1^2"}
  },

  "sample_plans": {
    "default": {"mode": "seeded-random", "count": 200, "box": [-1, 1]},
    "box100": {"mode": "seeded-random", "count": 100, "box": [-1, 1]},
    "grid5": {"mode": "grid", "count": 5, "box": [-1, 1]},
    "flip_zero": {"mode": "points", "points": [{"q": [1], "v": [1], "z": -1}]}
  },

  "tasks": [
    {"name": "parachute-simulate", "command": "simulate", "args": {"system": "parachute", "t": 5, "dt": 0.001}},
    {"name": "parachute-herglotz", "command": "herglotz", "args": {"lagrangian": "parachute", "plan": "box100"}},
    {"name": "flip-dynamical", "command": "check-dynamical",
     "args": {"system-a": "flip_H", "system-b": "flip_Hbar", "plan": "box100"}},
    {"name": "flip-conformal", "command": "check-conformal",
     "args": {"system-a": "flip_H", "system-b": "flip_Hbar", "plan": "box100"}},
    {"name": "flip-zero-set", "command": "check-zero-set",
     "args": {"system-a": "flip_H", "system-b": "flip_Hbar", "plan": "box100"}},
    {"name": "flip-zero-set-point", "command": "check-zero-set",
     "args": {"system-a": "flip_H", "system-b": "flip_Hbar", "plan": "flip_zero"}},
    {"name": "reeb-normalization", "command": "check-conformal",
     "args": {"system-a": "reeb_H2", "system-b": "reeb_Hbar", "plan": "box100"}},
    {"name": "drag-eq-n1", "command": "check-eq",
     "args": {"lagrangian": "drag", "lagrangian-bar": "drag_bar1", "zeta": "zplusv"}},
    {"name": "drag-eq-n2", "command": "check-eq",
     "args": {"lagrangian": "drag", "lagrangian-bar": "drag_bar2", "zeta": "zplusv2"}},
    {"name": "drag-eq-n3", "command": "check-eq",
     "args": {"lagrangian": "drag", "lagrangian-bar": "drag_bar3", "zeta": "zplusv3"}},
    {"name": "drag-eq-n2-gam05", "command": "check-eq",
     "args": {"lagrangian": "drag_gam05", "lagrangian-bar": "drag_bar2_gam05", "zeta": "zplusv2"}},
    {"name": "oscillator-strong", "command": "check-strong-eq",
     "args": {"lagrangian": "oscillator", "lagrangian-bar": "oscillator_bar", "zeta": "z2_plus_sinq"}},
    {"name": "parachute-strong", "command": "check-strong-eq",
     "args": {"lagrangian": "parachute", "lagrangian-bar": "parachute_bar_f2", "zeta": "z_plus_q2"}},
    {"name": "drag-strong-n1", "command": "check-strong-eq",
     "args": {"lagrangian": "drag", "lagrangian-bar": "drag_bar1", "zeta": "zplusv"}},
    {"name": "horizontal", "command": "check-horizontal",
     "args": {"field": "hs_xi", "field-bar": "hs_xihat", "zeta": "z_minus_half_v2"}},
    {"name": "parachute-projectable", "command": "check-projectable", "args": {"field": "parachute"}},
    {"name": "parachute-inverse", "command": "check-inverse", "args": {"sode": "parachute_sode"}},
    {"name": "parachute-inverse-perturbed", "command": "check-inverse", "args": {"sode": "parachute_sode_perturbed"}},
    {"name": "drag-inverse-ext", "command": "check-inverse-ext", "args": {"sode": "drag_sode", "zeta": "z"}},
    {"name": "parachute-di-ei", "command": "check-di-ei", "args": {"sode": "parachute_sode"}},
    {"name": "parachute-legendre", "command": "legendre", "args": {"lagrangian": "parachute"}},
    {"name": "parachute-stationarity", "command": "stationarity", "args": {"lagrangian": "parachute"}}
  ]
}
)json";

}  // namespace

const nlohmann::json& builtin_fixtures() {
  static const nlohmann::json doc = nlohmann::json::parse(kFixtures);
  return doc;
}

}  // namespace herglotz
