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
#include <functional>
#include <ostream>
#include <vector>

#include "bhastlo/fock.hpp"

namespace bhastlo {

enum class PropagatorMethod { Krylov, FullDiagonalization };

const char* to_string(PropagatorMethod method) noexcept;

struct PropagatorConfig {
  PropagatorMethod method = PropagatorMethod::Krylov;
  double dt = 0.05;
  int krylov_dim = 30;
  double tol = 1e-10;
  double leakage_threshold = 1e-6;
  int max_halvings = 20;

  void validate() const;
};

/// Largest dimension the dense eigendecomposition path accepts.
inline constexpr std::size_t kFullDiagonalizationMaxDim = 4096;

struct StepDiagnostics {
  double t = 0.0;
  double norm_drift = 0.0;    // |psi_t| - 1
  double energy = 0.0;        // <H>_t
  double energy_drift = 0.0;  // <H>_t - <H>_0
  double number_drift = 0.0;  // <N>_t - <N>_0 (0 without a basis)
  double leakage = 0.0;
  int substeps = 0;
  double error_estimate = 0.0;
};

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<StateVector> states;  // empty when states are not stored
  std::vector<StepDiagnostics> diagnostics;
  double max_leakage = 0.0;
  double max_norm_drift = 0.0;
  double max_energy_drift = 0.0;
  double max_number_drift = 0.0;
  bool reliable = true;  // false when leakage exceeded the threshold
};

/// Called once per grid time with the evolved state, before it is
/// discarded or stored.
using StepObserver =
    std::function<void(std::size_t step, double t, const StateVector& psi)>;

struct EvolveOptions {
  const FockBasis* basis = nullptr;  // enables leakage and <N> diagnostics
  StepObserver observer;
  bool store_states = true;
};

/// psi_t = exp(-i t H) psi_0 on a strictly increasing grid starting at 0.
/// The state is never renormalized; drift is reported per step.
EvolutionTrace evolve(const SparseOperator& H, const StateVector& psi0,
                      const std::vector<double>& times,
                      const PropagatorConfig& cfg,
                      const EvolveOptions& options = {});

/// exp(-i dt H) psi for either sign of dt.
StateVector propagate(const SparseOperator& H, const StateVector& psi,
                      double dt, const PropagatorConfig& cfg);

/// Probability weight on basis states whose maximal occupation is n_max.
double leakage(const StateVector& psi, const FockBasis& basis);

/// | exp(+iTH) exp(-iTH) psi0 - psi0 |, both legs on the cfg.dt grid.
double reversibility_check(const SparseOperator& H, const StateVector& psi0,
                           double T, const PropagatorConfig& cfg);

/// 0, dt, 2dt, ..., with the last point clamped to t_max.
std::vector<double> uniform_grid(double t_max, double dt);

/// Columns: t,norm_drift,energy,leakage.
void write_trace_csv(std::ostream& os, const EvolutionTrace& trace);

}  // namespace bhastlo
