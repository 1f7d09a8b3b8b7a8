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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bhastlo/fock.hpp"
#include "bhastlo/propagator.hpp"
#include "bhastlo/verifier.hpp"

namespace bhastlo {

inline constexpr int kSchemaVersion = 1;

enum class HoppingKind { PowerLaw, NearestNeighbor, Zero };

struct HoppingConfig {
  HoppingKind kind = HoppingKind::PowerLaw;
  double alpha = 5.0;
  std::optional<double> C_J;
  std::optional<double> kappa_target;
  double amplitude = 0.0;  // nearest neighbor only
};

struct PotentialConfig {
  std::string kind = "bose_hubbard";
  double U = 1.0;
  double mu = 0.0;
  std::vector<double> coefficients;
};

struct SweepRule {
  double r = 1.0;
  std::vector<double> gaps;   // R - r ladder
  std::vector<double> t_max;  // R = r + v t_max ladder
  bool include_r0 = true;
  double ratio_bound = 1.0;

  bool empty() const { return gaps.empty() && t_max.empty(); }
};

struct ChecksConfig {
  bool commutator = true;
  bool cauchy_schwarz = true;
  std::optional<double> transport_r1;
  std::vector<double> transport_r2;
  int symmetrized_L = 32;
};

/// One experiment. Every field has a canonical JSON spelling; see
/// docs/config.md.
struct RunConfig {
  int schema_version = kSchemaVersion;
  std::string name = "run";
  int d = 1;
  int L = 10;
  int n_max = 3;
  bool full_basis = false;
  std::size_t max_dim = kDefaultMaxDim;
  HoppingConfig hopping;
  PotentialConfig potential;
  int nu = 1;
  double lambda = 3.0;
  double v = 0.4;
  std::vector<RadiusPair> radii;
  std::optional<double> t_max;  // defaults to the largest s
  double dt = 0.05;
  PropagatorConfig propagator;
  ChecksConfig checks;
  std::optional<SweepRule> sweep;
  std::string output_dir = "out";
};

/// Parses and schema-validates. Throws Error(Schema) on malformed input.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Canonical normal form: sorted keys, every field explicit, two-space
/// indentation, trailing newline.
std::string canonical_json(const RunConfig& cfg);

/// Regime preconditions that can be decided without a Fock space. Throws
/// Error(Regime) naming the violated inequality.
void check_regime(const RunConfig& cfg, double kappa);

}  // namespace bhastlo
