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

#include <limits>
#include <string>
#include <vector>

#include "bhastlo/astlo.hpp"
#include "bhastlo/cutoff.hpp"
#include "bhastlo/fock.hpp"
#include "bhastlo/hopping.hpp"
#include "bhastlo/propagator.hpp"
#include "bhastlo/report.hpp"

namespace bhastlo {

inline constexpr double kHardTolerance = 1e-9;
inline constexpr double kStabilityFactor = 2.0;
inline constexpr double kTrendTolerance = 0.2;

struct StatsOptions {
  bool commutator_terms = true;
  bool cauchy_schwarz = true;
};

/// Everything the checks need from one state of a trajectory. Weighted
/// ASTLO expectations and their derivatives are linear in these.
struct TimeSample {
  double t = 0.0;
  std::vector<double> pairs;     // <n_x n_y>, row-major
  std::vector<double> currents;  // <i[H, n_0 n_x]>
  std::vector<Complex> term_I;   // empty when disabled
  std::vector<Complex> term_II;
  double cauchy_schwarz = std::numeric_limits<double>::quiet_NaN();
  double norm_drift = 0.0;
  double energy = 0.0;
  double leakage = 0.0;

  double n0_squared() const { return pairs[0]; }
};

struct TrajectoryStats {
  TorusLattice lattice{1, 2};
  std::vector<TimeSample> samples;
  double max_leakage = 0.0;
  double max_norm_drift = 0.0;
  double max_energy_drift = 0.0;
  double max_number_drift = 0.0;
  double leakage_threshold = 1e-6;
  bool reliable = true;
};

TimeSample measure_state(const SparseOperator& H, const HoppingMatrix& J,
                         const FockBasis& basis, const StateVector& psi,
                         double t, const StatsOptions& options = {});

/// Evolves psi0 over `times` and measures every grid state on the fly.
/// States are not kept unless `trace` asks for them via store_states.
TrajectoryStats simulate(const SparseOperator& H, const HoppingMatrix& J,
                         const FockBasis& basis, const StateVector& psi0,
                         const std::vector<double>& times,
                         const PropagatorConfig& cfg,
                         const StatsOptions& options = {},
                         EvolutionTrace* trace = nullptr,
                         bool store_states = false);

/// Measures an already computed trace that stored its states.
TrajectoryStats analyze_trace(const EvolutionTrace& trace,
                              const SparseOperator& H, const HoppingMatrix& J,
                              const FockBasis& basis, double leakage_threshold,
                              const StatsOptions& options = {});

/// Expectations of one scaled cutoff along the grid points t <= s.
struct AstloSeries {
  std::vector<double> t;
  std::vector<double> A;             // <A_ts>_t
  std::vector<double> A_prime;       // <A'_ts>_t
  std::vector<double> A_tilde;       // <A~'_ts>_t
  std::vector<double> derivative;    // d/dt <A_ts>_t
  std::vector<double> inner_ball;    // <n_0 N_{B_r}>_t
  std::vector<double> direct_commutator;  // <i[H, A_ts]>_t
  double outer_ball_0 = 0.0;         // <n_0 N_{B_R}>_0
  double outer_square_0 = 0.0;       // <N_{B_R}^2>_0
};

AstloSeries astlo_series(const TrajectoryStats& stats, const ScaledCutoff& sc);

/// Cumulative trapezoid integral, same length as the samples.
std::vector<double> cumulative_trapezoid(const std::vector<double>& t,
                                         const std::vector<double>& f);

struct RadiusPair {
  double R;
  double r;
};

/// Inner-ball bound, initial upper bound, and the integrated
/// (fundamental theorem of calculus) bound along t <= s.
CheckReport check_geometric_property(const TrajectoryStats& stats,
                                     const ScaledCutoff& sc, double lambda);

/// <i[H, A_ts]> against i (<I> + <II>) at every grid point.
CheckReport check_commutator_decomposition(const TrajectoryStats& stats,
                                           const ScaledCutoff& sc);

/// Smallest C >= 0 with
///   LHS <= ((2 kappa - v~)/s) <A'> + C <A~'>/s^2 + C R^d <n_0^2>/s^(beta+1)
/// over the grid; the A~' term is absent for beta = 1.
CheckReport check_differential_inequality_structure(const TrajectoryStats& stats,
                                                    const ScaledCutoff& sc,
                                                    int beta);

/// |<b_0^dag n_y b_x>| <= sqrt(<n_0 n_y><n_x n_y>) along the trajectory.
CheckReport check_cauchy_schwarz(const TrajectoryStats& stats);

struct TheoremCheckConfig {
  double v = 0.0;
  double kappa = 0.0;
  double lambda = 1.0;
  int beta = 1;
  std::vector<RadiusPair> pairs;
  double cutoff_sharpness = 1.0;
};

/// Fitted constant of the correlation bound per (R, r) plus the trend
/// verdict across R - r.
CheckReport check_theorem_bound(const TrajectoryStats& stats,
                                const TheoremCheckConfig& cfg);

/// Prop-style differential inequality for every pair, with the fitted C
/// judged for stability across the implied s values.
CheckReport check_differential_inequality_sweep(const TrajectoryStats& stats,
                                                const TheoremCheckConfig& cfg);

/// p = 2 particle transport bound with r1 fixed and r2 swept:
///   sup <N_{B_r1}^2>_t <= (1 + C/(r2-r1)) <N_{B_r2}^2>_0
///                         + C (r2-r1)^(2d-n) lambda^2,  n = floor(alpha-d-1).
CheckReport check_particle_transport(const TrajectoryStats& stats, double v,
                                     double kappa, double lambda, double alpha,
                                     double r1, const std::vector<double>& r2);

/// Smallest C_fit with
///   |chi(x) - chi(y)| <= (|x-y|/s) u(x) u(y)
///                        + C_fit (|x-y|/s)^2 (1_{|x|<=R} + 1_{|y|<=R})
/// over all site pairs and `time_samples` times in [0, s].
CheckReport check_symmetrized_expansion_first_order(const ScaledCutoff& sc,
                                                    const TorusLattice& lat,
                                                    int time_samples = 21);

/// The same fit on a ladder of R - r values, judged for stability.
CheckReport check_symmetrized_expansion_ladder(const TorusLattice& lat,
                                               double v, double kappa,
                                               double r,
                                               const std::vector<double>& gaps,
                                               double cutoff_sharpness = 1.0);

/// Minimum eigenvalue of n_x n_0 - b_x^dag n_0 b_x over all x.
CheckReport check_operator_inequality(const FockBasis& basis);

struct ScalingSweepResult {
  CheckReport exponent;  // exploratory
  CheckReport bound;     // hard
};

/// Rungs t_max with R = r + v t_max: sup_{t <= t_max} <n_0^2>_t /
/// (lambda^2 R^d) must stay below `ratio_bound`; the log-log slope of the
/// running sup against t is reported with its fit quality.
ScalingSweepResult scaling_sweep(const TrajectoryStats& stats, double v,
                                 double lambda, double r,
                                 const std::vector<double>& t_max,
                                 double ratio_bound);

/// Folds constants fitted on a ladder of `gaps` into one verdict: max/min
/// must stay within the stability factor (all zero counts as stable) and the
/// least-squares slope against the gap may not exceed the trend tolerance.
CheckReport fitted_stability(const std::string& name,
                             const std::vector<double>& gaps,
                             const std::vector<double>& constants);

/// The light-cone guard v t_max < L/2 - 1.
bool wrap_guard_ok(const TorusLattice& lat, double v, double t_max);

}  // namespace bhastlo
