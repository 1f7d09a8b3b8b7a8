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

#include <cmath>

#include "doctest.h"

#include "bhastlo/error.hpp"
#include "bhastlo/model.hpp"
#include "bhastlo/verifier.hpp"

using namespace bhastlo;

namespace {

struct Run {
  TorusLattice lat;
  FockBasis basis;
  HoppingMatrix J;
  SparseOperator H;
  TrajectoryStats stats;
};

Run make_run(int L, int n_max, int nu, HoppingMatrix J, double t_max,
             double leakage_threshold = 1e-6) {
  TorusLattice lat(1, L);
  FockBasis basis = FockBasis::fixed_number(lat, n_max, nu * L);
  SparseOperator H = assemble_hamiltonian(
      ModelSpec{lat, J, PotentialSpec::bose_hubbard(1.0, 0.0), n_max}, basis);
  PropagatorConfig cfg;
  cfg.dt = 0.05;
  cfg.leakage_threshold = leakage_threshold;
  auto stats = simulate(H, J, basis, mott_state(nu, basis), uniform_grid(t_max, cfg.dt), cfg);
  return Run{lat, std::move(basis), std::move(J), std::move(H), std::move(stats)};
}

Run frozen(int nu = 1) {
  TorusLattice lat(1, 9);
  return make_run(9, nu + 1, nu, build_zero_hopping(lat), 4.0);
}

ScaledCutoff cutoff(double v, double kappa, double R, double r) {
  const auto p = velocity_params(v, kappa, R, r);
  return ScaledCutoff(make_standard_cutoff(p.epsilon), p);
}

}  // namespace

TEST_CASE("frozen Mott dynamics keeps every chain static") {
  const auto run = frozen();
  const auto sc = cutoff(1.0, 0.0, 4.0, 1.0);
  const auto geo = check_geometric_property(run.stats, sc, 3.0);
  CHECK(geo.passed());
  for (const auto& row : geo.rows)
    if (row.label == "inner_ball_le_astlo") CHECK(row.lhs == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(check_commutator_decomposition(run.stats, sc).passed());
  const auto diff = check_differential_inequality_structure(run.stats, sc, 2);
  CHECK(diff.passed());
  CHECK(diff.constant("C") == 0.0);
  CHECK(check_cauchy_schwarz(run.stats).passed());
}

TEST_CASE("frozen dynamics fits zero constants") {
  const auto run = frozen();
  TheoremCheckConfig cfg;
  cfg.v = 1.0;
  cfg.kappa = 0.0;
  cfg.lambda = 3.0;
  cfg.beta = beta_of(5.0, 1);
  cfg.pairs = {{2.5, 1.0}, {4.0, 1.0}};
  const auto thm = check_theorem_bound(run.stats, cfg);
  CHECK(thm.passed());
  CHECK(thm.constant("C@pair(2.5,1)") == 0.0);
  CHECK(thm.constant("S@pair(4,1)") == doctest::Approx(3.0));
  CHECK(thm.constant("variation_ratio") == 1.0);
  const auto sweep = check_differential_inequality_sweep(run.stats, cfg);
  CHECK(sweep.passed());
  const auto pt = check_particle_transport(run.stats, 1.0, 0.0, 3.0, 5.0, 1.0, {2.5, 3.0});
  CHECK(pt.passed());
  CHECK(pt.constant("C@radii(1,3)") == 0.0);
}

TEST_CASE("r = 0 pair bounds the second moment of n_0") {
  const auto run = frozen(2);
  TheoremCheckConfig cfg;
  cfg.v = 1.0;
  cfg.lambda = 2.0;
  cfg.beta = 1;
  cfg.pairs = {{2.0, 0.0}};
  const auto rep = check_theorem_bound(run.stats, cfg);
  CHECK(rep.constant("S@pair(2,0)") == doctest::Approx(4.0));
  CHECK(rep.constant("C@pair(2,0)") == 0.0);
}

TEST_CASE("vacuum gives S = 0") {
  TorusLattice lat(1, 9);
  const auto run = make_run(9, 2, 0, build_nearest_neighbor(lat, 0.2), 4.0);
  TheoremCheckConfig cfg;
  cfg.v = 1.0;
  cfg.kappa = run.J.kappa();
  cfg.pairs = {{2.5, 1.0}, {4.0, 1.0}};
  const auto rep = check_theorem_bound(run.stats, cfg);
  CHECK(rep.passed());
  CHECK(rep.constant("S@pair(4,1)") == 0.0);
  CHECK(rep.constant("C@pair(4,1)") == 0.0);
}

TEST_CASE("t = 0 FTC row is the density bound") {
  const auto run = frozen();
  const auto sc = cutoff(1.0, 0.0, 4.0, 1.0);
  const auto geo = check_geometric_property(run.stats, sc, 3.0);
  bool seen = false;
  for (const auto& row : geo.rows)
    if (row.label == "ftc_bound" && row.t == 0.0) {
      CHECK(row.rhs == 36.0);
      seen = true;
    }
  CHECK(seen);
}

TEST_CASE("leading coefficient sign is reported, not assumed") {
  const auto run = frozen();
  const auto neg = check_differential_inequality_structure(run.stats, cutoff(0.4, 0.1, 3.0, 1.0), 1);
  CHECK(neg.diagnostics.front().second < 0.0);
  bool sign_seen = false;
  const auto pos = check_differential_inequality_structure(run.stats, cutoff(2.1, 1.0, 4.5, 1.0), 1);
  for (const auto& [k, v] : pos.diagnostics)
    if (k == "leading_coefficient_sign") {
      CHECK(v == 1.0);
      sign_seen = true;
    }
  CHECK(sign_seen);
}

TEST_CASE("evolved Bose-Hubbard trajectory satisfies the hard chain") {
  TorusLattice lat(1, 7);
  const auto J = build_power_law(lat, 1.5, 5.0);
  const double k = J.kappa();
  const auto run = make_run(7, 3, 1, J, 2.0, 1.0);
  const auto sc = cutoff(4.0 * k, k, 1.0 + 8.0 * k, 1.0);
  CHECK(check_geometric_property(run.stats, sc, 3.0).passed());
  const auto comm = check_commutator_decomposition(run.stats, sc);
  CHECK(comm.passed());
  CHECK(comm.worst_margin > -1e-12);
  CHECK(check_cauchy_schwarz(run.stats).passed());
  const auto diff = check_differential_inequality_structure(run.stats, sc, beta_of(5.0, 1));
  CHECK(std::isfinite(diff.constant("C")));
}

TEST_CASE("leakage gate skips the geometric chain") {
  TorusLattice lat(1, 7);
  const auto J = build_power_law(lat, 1.5, 5.0);
  const auto run = make_run(7, 2, 1, J, 1.0, 1e-12);
  REQUIRE_FALSE(run.stats.reliable);
  const auto rep = check_geometric_property(run.stats, cutoff(1.0, 0.0, 4.0, 1.0), 3.0);
  CHECK(rep.skipped());
}

TEST_CASE("analyze_trace matches streaming measurement") {
  TorusLattice lat(1, 5);
  const auto J = build_nearest_neighbor(lat, 0.3);
  const FockBasis basis = FockBasis::fixed_number(lat, 3, 5);
  const auto H = assemble_hamiltonian(
      ModelSpec{lat, J, PotentialSpec::bose_hubbard(1.0, 0.0), 3}, basis);
  PropagatorConfig cfg;
  EvolutionTrace trace;
  const auto a = simulate(H, J, basis, mott_state(1, basis), uniform_grid(0.5, 0.1), cfg, {},
                          &trace, true);
  const auto b = analyze_trace(trace, H, J, basis, cfg.leakage_threshold);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    CHECK(a.samples[k].pairs == b.samples[k].pairs);
    CHECK(a.samples[k].currents == b.samples[k].currents);
  }
}

TEST_CASE("symmetrized expansion on a 32-site ring") {
  TorusLattice lat(1, 32);
  const auto sc = cutoff(0.4, 0.1, 5.4, 1.0);
  const auto rep = check_symmetrized_expansion_first_order(sc, lat);
  CHECK(rep.passed());
  const double C = rep.constant("C_fit");
  CHECK(std::isfinite(C));
  CHECK(C > 0.0);
  const auto ladder = check_symmetrized_expansion_ladder(lat, 0.4, 0.1, 1.0, {1.1, 2.2, 4.4});
  CHECK(std::isfinite(ladder.constant("variation_ratio")));
}

TEST_CASE("operator inequality on small bases") {
  for (int L : {2, 3})
    for (int n_max = 1; n_max <= 3; ++n_max) {
      const auto rep = check_operator_inequality(FockBasis::full(TorusLattice(1, L), n_max));
      CHECK(rep.passed());
      CHECK(rep.worst_margin >= -1e-10);
    }
}

TEST_CASE("fitted stability folds a ladder") {
  CHECK(fitted_stability("s", {1, 2, 4}, {0, 0, 0}).passed());
  CHECK(fitted_stability("s", {1, 2, 4}, {1.0, 1.1, 1.05}).passed());
  CHECK_FALSE(fitted_stability("s", {1, 2, 4}, {1.0, 1.0, 3.0}).passed());
  CHECK_FALSE(fitted_stability("s", {1, 2, 4}, {0.0, 1.0, 1.0}).passed());
  CHECK_FALSE(fitted_stability("s", {1, 2, 4}, {1.0, 1.5, 1.9}).passed());
  CHECK(fitted_stability("s", {1, 2}, {1.0, 0.9}).passed());
}

TEST_CASE("scaling sweep on frozen dynamics") {
  const auto run = frozen();
  const auto out = scaling_sweep(run.stats, 0.5, 3.0, 1.0, {1.0, 2.0, 4.0}, 1.0);
  CHECK(out.bound.passed());
  CHECK(out.exponent.constant("exponent") == doctest::Approx(0.0));
  CHECK(out.bound.constant("ratio@4") == doctest::Approx(1.0 / 27.0));
}

TEST_CASE("wrap guard") {
  TorusLattice lat(1, 11);
  CHECK(wrap_guard_ok(lat, 0.4, 11.0));
  CHECK_FALSE(wrap_guard_ok(lat, 0.4, 11.25));
}
