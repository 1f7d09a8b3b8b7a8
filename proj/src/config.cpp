// Copyright 2026 The bhastlo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bhastlo/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "bhastlo/cutoff.hpp"
#include "bhastlo/error.hpp"
#include "bhastlo/hopping.hpp"

namespace bhastlo {

namespace {

using json = nlohmann::json;

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  fail(ErrorKind::Schema, path + ": " + what);
}

// Strict object reader: every key must be consumed exactly once.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) schema(path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) schema(path_ + "." + key, "missing");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_number()) schema(where(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) schema(where(key), "must be finite");
    return x;
  }
  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : (seen_.insert(key), fallback);
  }
  std::optional<double> maybe_number(const std::string& key) {
    if (!has(key)) {
      seen_.insert(key);
      return std::nullopt;
    }
    return number(key);
  }

  long long integer(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_number_integer()) schema(where(key), "expected an integer");
    return v.get<long long>();
  }
  long long integer(const std::string& key, long long fallback) {
    return has(key) ? integer(key) : (seen_.insert(key), fallback);
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) {
      seen_.insert(key);
      return fallback;
    }
    const auto& v = raw(key);
    if (!v.is_boolean()) schema(where(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const auto& v = raw(key);
    if (!v.is_string()) schema(where(key), "expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : (seen_.insert(key), fallback);
  }

  std::vector<double> numbers(const std::string& key) {
    if (!has(key)) {
      seen_.insert(key);
      return {};
    }
    const auto& v = raw(key);
    if (!v.is_array()) schema(where(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) schema(where(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  Obj child(const std::string& key) { return Obj(raw(key), where(key)); }

  std::string where(const std::string& key) const { return path_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) schema(where(it.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

HoppingConfig parse_hopping(Obj o) {
  HoppingConfig h;
  const auto kind = o.string("kind");
  if (kind == "power_law") {
    h.kind = HoppingKind::PowerLaw;
    h.alpha = o.number("alpha");
    h.C_J = o.maybe_number("C_J");
    h.kappa_target = o.maybe_number("kappa_target");
    if (h.C_J.has_value() == h.kappa_target.has_value())
      schema(o.where("C_J"), "give exactly one of C_J and kappa_target");
    if (h.C_J && !(*h.C_J > 0.0)) schema(o.where("C_J"), "must be positive");
    if (h.kappa_target && !(*h.kappa_target > 0.0))
      schema(o.where("kappa_target"), "must be positive");
  } else if (kind == "nearest_neighbor") {
    h.kind = HoppingKind::NearestNeighbor;
    h.amplitude = o.number("amplitude");
  } else if (kind == "zero") {
    h.kind = HoppingKind::Zero;
  } else {
    schema(o.where("kind"), "expected power_law, nearest_neighbor or zero");
  }
  o.finish();
  return h;
}

PotentialConfig parse_potential(Obj o) {
  PotentialConfig p;
  p.kind = o.string("kind");
  if (p.kind == "bose_hubbard") {
    p.U = o.number("U");
    p.mu = o.number("mu", 0.0);
  } else if (p.kind == "polynomial") {
    p.coefficients = o.numbers("coefficients");
    if (p.coefficients.empty()) schema(o.where("coefficients"), "must not be empty");
  } else {
    schema(o.where("kind"), "expected bose_hubbard or polynomial");
  }
  o.finish();
  return p;
}

PropagatorConfig parse_propagator(Obj o) {
  PropagatorConfig p;
  const auto method = o.string("method", "krylov");
  if (method == "krylov") p.method = PropagatorMethod::Krylov;
  else if (method == "full_diagonalization") p.method = PropagatorMethod::FullDiagonalization;
  else schema(o.where("method"), "expected krylov or full_diagonalization");
  p.krylov_dim = static_cast<int>(o.integer("krylov_dim", p.krylov_dim));
  p.tol = o.number("tol", p.tol);
  p.leakage_threshold = o.number("leakage_threshold", p.leakage_threshold);
  p.max_halvings = static_cast<int>(o.integer("max_halvings", p.max_halvings));
  o.finish();
  return p;
}

SweepRule parse_sweep(Obj o) {
  SweepRule s;
  s.r = o.number("r", s.r);
  s.gaps = o.numbers("gaps");
  s.t_max = o.numbers("t_max");
  s.include_r0 = o.boolean("include_r0", s.include_r0);
  s.ratio_bound = o.number("ratio_bound", s.ratio_bound);
  o.finish();
  if (s.empty()) schema("config.sweep", "sweep rule has no gaps and no t_max ladder");
  for (double g : s.gaps)
    if (!(g > 0.0)) schema("config.sweep.gaps", "entries must be positive");
  for (double t : s.t_max)
    if (!(t > 0.0)) schema("config.sweep.t_max", "entries must be positive");
  return s;
}

ChecksConfig parse_checks(Obj o) {
  ChecksConfig c;
  c.commutator = o.boolean("commutator", c.commutator);
  c.cauchy_schwarz = o.boolean("cauchy_schwarz", c.cauchy_schwarz);
  if (o.has("transport")) {
    auto t = o.child("transport");
    c.transport_r1 = t.number("r1");
    c.transport_r2 = t.numbers("r2");
    t.finish();
    if (c.transport_r2.empty()) schema("config.checks.transport.r2", "must not be empty");
  }
  c.symmetrized_L = static_cast<int>(o.integer("symmetrized_L", c.symmetrized_L));
  if (c.symmetrized_L < 2) schema("config.checks.symmetrized_L", "must be >= 2");
  o.finish();
  return c;
}

RunConfig parse_root(const json& j) {
  Obj o(j, "config");
  RunConfig c;
  c.schema_version = static_cast<int>(o.integer("schema_version"));
  if (c.schema_version != kSchemaVersion)
    schema("config.schema_version", "unsupported version " + std::to_string(c.schema_version));
  c.name = o.string("name", c.name);
  {
    auto lat = o.child("lattice");
    c.d = static_cast<int>(lat.integer("d"));
    c.L = static_cast<int>(lat.integer("L"));
    lat.finish();
    if (c.d < 1) schema("config.lattice.d", "must be >= 1");
    if (c.L < 2) schema("config.lattice.L", "must be >= 2");
  }
  {
    auto b = o.child("basis");
    c.n_max = static_cast<int>(b.integer("n_max"));
    const auto kind = b.string("kind", "sector");
    if (kind == "sector") c.full_basis = false;
    else if (kind == "full") c.full_basis = true;
    else schema("config.basis.kind", "expected sector or full");
    const auto md = b.integer("max_dim", static_cast<long long>(kDefaultMaxDim));
    if (md < 1) schema("config.basis.max_dim", "must be positive");
    c.max_dim = static_cast<std::size_t>(md);
    b.finish();
    if (c.n_max < 1 || c.n_max > 255) schema("config.basis.n_max", "must be in [1, 255]");
  }
  c.hopping = parse_hopping(o.child("hopping"));
  c.potential = parse_potential(o.child("potential"));
  {
    auto s = o.child("initial_state");
    if (s.string("kind", "mott") != "mott") schema("config.initial_state.kind", "only mott is supported");
    c.nu = static_cast<int>(s.integer("nu"));
    c.lambda = s.number("lambda");
    s.finish();
    if (c.nu < 0) schema("config.initial_state.nu", "must be >= 0");
    if (!(c.lambda > 0.0)) schema("config.initial_state.lambda", "must be positive");
  }
  c.v = o.number("velocity");
  if (o.has("radii")) {
    const auto& arr = o.raw("radii");
    if (!arr.is_array()) schema("config.radii", "expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Obj p(arr[i], "config.radii[" + std::to_string(i) + "]");
      c.radii.push_back({p.number("R"), p.number("r")});
      p.finish();
    }
  }
  {
    auto t = o.child("time_grid");
    c.dt = t.number("dt");
    c.t_max = t.maybe_number("t_max");
    t.finish();
    if (!(c.dt > 0.0)) schema("config.time_grid.dt", "must be positive");
    if (c.t_max && !(*c.t_max > 0.0)) schema("config.time_grid.t_max", "must be positive");
  }
  if (o.has("propagator")) c.propagator = parse_propagator(o.child("propagator"));
  c.propagator.dt = c.dt;
  if (o.has("checks")) c.checks = parse_checks(o.child("checks"));
  if (o.has("sweep")) c.sweep = parse_sweep(o.child("sweep"));
  c.output_dir = o.string("output_dir", c.output_dir);
  o.finish();
  try {
    c.propagator.validate();
  } catch (const Error& e) {
    schema("config.propagator", e.what());
  }
  return c;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Schema, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_root(j);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_json(const RunConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["name"] = c.name;
  j["lattice"] = {{"d", c.d}, {"L", c.L}};
  j["basis"] = {{"n_max", c.n_max},
                {"kind", c.full_basis ? "full" : "sector"},
                {"max_dim", c.max_dim}};
  json h;
  switch (c.hopping.kind) {
    case HoppingKind::PowerLaw:
      h["kind"] = "power_law";
      h["alpha"] = c.hopping.alpha;
      h["C_J"] = c.hopping.C_J ? json(*c.hopping.C_J) : json(nullptr);
      h["kappa_target"] = c.hopping.kappa_target ? json(*c.hopping.kappa_target) : json(nullptr);
      break;
    case HoppingKind::NearestNeighbor:
      h["kind"] = "nearest_neighbor";
      h["amplitude"] = c.hopping.amplitude;
      break;
    case HoppingKind::Zero:
      h["kind"] = "zero";
      break;
  }
  j["hopping"] = h;
  if (c.potential.kind == "polynomial")
    j["potential"] = {{"kind", "polynomial"}, {"coefficients", c.potential.coefficients}};
  else
    j["potential"] = {{"kind", "bose_hubbard"}, {"U", c.potential.U}, {"mu", c.potential.mu}};
  j["initial_state"] = {{"kind", "mott"}, {"nu", c.nu}, {"lambda", c.lambda}};
  j["velocity"] = c.v;
  json radii = json::array();
  for (const auto& p : c.radii) radii.push_back({{"R", p.R}, {"r", p.r}});
  j["radii"] = radii;
  j["time_grid"] = {{"dt", c.dt}, {"t_max", c.t_max ? json(*c.t_max) : json(nullptr)}};
  j["propagator"] = {{"method", c.propagator.method == PropagatorMethod::Krylov
                                    ? "krylov"
                                    : "full_diagonalization"},
                     {"krylov_dim", c.propagator.krylov_dim},
                     {"tol", c.propagator.tol},
                     {"leakage_threshold", c.propagator.leakage_threshold},
                     {"max_halvings", c.propagator.max_halvings}};
  json checks = {{"commutator", c.checks.commutator},
                 {"cauchy_schwarz", c.checks.cauchy_schwarz},
                 {"symmetrized_L", c.checks.symmetrized_L}};
  checks["transport"] = c.checks.transport_r1
                            ? json{{"r1", *c.checks.transport_r1}, {"r2", c.checks.transport_r2}}
                            : json(nullptr);
  j["checks"] = checks;
  if (c.sweep)
    j["sweep"] = {{"r", c.sweep->r},
                  {"gaps", c.sweep->gaps},
                  {"t_max", c.sweep->t_max},
                  {"include_r0", c.sweep->include_r0},
                  {"ratio_bound", c.sweep->ratio_bound}};
  else
    j["sweep"] = nullptr;
  j["output_dir"] = c.output_dir;
  return j.dump(2) + "\n";
}

void check_regime(const RunConfig& c, double kappa) {
  if (c.hopping.kind == HoppingKind::PowerLaw) beta_of(c.hopping.alpha, c.d);
  if (c.nu > c.n_max)
    fail(ErrorKind::Regime, "Mott filling nu = " + std::to_string(c.nu) +
                                " exceeds n_max = " + std::to_string(c.n_max));
  for (const auto& p : c.radii) velocity_params(c.v, kappa, p.R, p.r);
  const TorusLattice lat(c.d, c.L);
  auto guard = [&](double t_end, const std::string& what) {
    if (!wrap_guard_ok(lat, c.v, t_end)) {
      std::ostringstream os;
      os << "wrap-around guard v t_max < L/2 - 1 violated for " << what << ": v t_max = "
         << c.v * t_end << ", L/2 - 1 = " << 0.5 * c.L - 1.0;
      fail(ErrorKind::Regime, os.str());
    }
  };
  for (const auto& p : c.radii) guard((p.R - p.r) / c.v, "R = " + format_double(p.R) +
                                                             ", r = " + format_double(p.r));
  if (c.t_max) guard(*c.t_max, "time_grid.t_max");
  if (c.sweep) {
    for (double g : c.sweep->gaps) {
      velocity_params(c.v, kappa, c.sweep->r + g, c.sweep->r);
      guard(g / c.v, "sweep gap " + format_double(g));
    }
    for (double t : c.sweep->t_max) guard(t, "sweep t_max " + format_double(t));
  }
}

}  // namespace bhastlo
