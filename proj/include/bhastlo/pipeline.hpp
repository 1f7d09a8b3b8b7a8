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

#include <string>
#include <vector>

#include "bhastlo/config.hpp"
#include "bhastlo/error.hpp"
#include "bhastlo/hopping.hpp"
#include "bhastlo/model.hpp"
#include "bhastlo/report.hpp"

namespace bhastlo {

enum class ExitCode : int {
  Ok = 0,
  HardFailure = 1,
  Schema = 2,
  Regime = 3,
  Capacity = 4,
  Internal = 5,
};

ExitCode exit_code_for(ErrorKind kind) noexcept;

struct ResolvedModel {
  TorusLattice lattice;
  HoppingMatrix hopping;
  PotentialSpec potential;
  FockBasis basis;
  SparseOperator hamiltonian;
  StateVector initial;
  int beta;
};

HoppingMatrix resolve_hopping(const RunConfig& cfg);
ResolvedModel resolve_model(const RunConfig& cfg);

struct RunOutcome {
  ExitCode code = ExitCode::Ok;
  std::string message;  // set on errors
  std::vector<CheckReport> reports;
  std::vector<std::string> written;  // output file paths
  std::string summary;
};

/// Evolves, verifies and writes trace.csv, profile.csv, report.csv and
/// summary.txt into cfg.output_dir. Never throws.
RunOutcome run_pipeline(const RunConfig& cfg);

/// Expands cfg.sweep into rungs sharing one evolution, evaluates them
/// concurrently and writes sweep_report.csv next to the run outputs.
RunOutcome sweep_pipeline(const RunConfig& cfg);

struct ConstantsQuery {
  int d = 1;
  int L = 16;
  double alpha = 5.0;
  double C_J = 1.0;
  double v = 1.0;
  double R = 2.0;
  double r = 0.0;
  double lambda = 1.0;
  double kappa_override = -1.0;  // negative: use the lattice kappa
};

/// Plain-text key = value listing. Throws Error(Parameter) for unusable
/// input; precondition failures are reported, not thrown.
std::string constants_report(const ConstantsQuery& q);

/// Writes via a temporary sibling and rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace bhastlo
