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

#include "bhastlo/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bhastlo/error.hpp"

namespace bhastlo {

PotentialSpec PotentialSpec::bose_hubbard(double U, double mu) {
  PotentialSpec p;
  p.kind = Kind::BoseHubbard;
  p.U = U;
  p.mu = mu;
  return p;
}

PotentialSpec PotentialSpec::polynomial(std::vector<double> coefficients) {
  PotentialSpec p;
  p.kind = Kind::Polynomial;
  p.coefficients = std::move(coefficients);
  return p;
}

double PotentialSpec::site_energy(int n) const {
  if (kind == Kind::BoseHubbard) return U * n * (n - 1.0) - mu * n;
  double e = 0.0;
  double power = 1.0;
  for (double c : coefficients) {
    e += c * power;
    power *= n;
  }
  return e;
}

std::vector<double> potential_diagonal(const PotentialSpec& potential,
                                       const FockBasis& basis) {
  std::vector<double> table(static_cast<std::size_t>(basis.n_max()) + 1);
  for (int n = 0; n <= basis.n_max(); ++n) table[n] = potential.site_energy(n);
  std::vector<double> diag(basis.dim(), 0.0);
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    double e = 0.0;
    for (std::uint8_t n : basis.occupations(k)) e += table[n];
    diag[k] = e;
  }
  return diag;
}

SparseOperator assemble_hamiltonian(const ModelSpec& spec,
                                    const FockBasis& basis) {
  if (!(spec.hopping.lattice() == spec.lattice) ||
      !(basis.lattice() == spec.lattice))
    fail(ErrorKind::Parameter, "hopping, basis and model lattices differ");
  if (basis.n_max() != spec.n_max)
    fail(ErrorKind::Parameter, "basis cutoff differs from model n_max");
  if (basis.dim() > spec.max_dim)
    fail(ErrorKind::Capacity, "basis dimension " + std::to_string(basis.dim()) +
                                  " exceeds configured maximum " +
                                  std::to_string(spec.max_dim));

  const std::size_t S = basis.sites();
  const auto diag = potential_diagonal(spec.potential, basis);
  // Nonzero couplings (to, from) only.
  std::vector<std::tuple<std::size_t, std::size_t, double>> couplings;
  for (std::size_t x = 0; x < S; ++x)
    for (std::size_t y = 0; y < S; ++y) {
      if (x == y) continue;
      const double J = spec.hopping(x, y);
      if (J != 0.0) couplings.emplace_back(x, y, J);
    }

  // Row k' collects <k'|J_{x,y} b_x^dag b_y|k> for every k reachable by one
  // hop; H is symmetric so we scan hops out of the row state and transpose.
  return SparseOperator::from_rows(basis.dim(), [&](std::size_t row, auto& out) {
    out.emplace_back(row, diag[row]);
    for (const auto& [x, y, J] : couplings) {
      // <row| b_x^dag b_y |k> = <k| b_y^dag b_x |row>, J real symmetric.
      if (auto h = basis.hop(row, x, y)) out.emplace_back(h->first, J * h->second);
    }
  });
}

StateVector mott_state(int nu, const FockBasis& basis) {
  if (nu < 0) fail(ErrorKind::Parameter, "Mott filling must be >= 0");
  if (nu > basis.n_max())
    fail(ErrorKind::OutOfCutoff, "Mott filling " + std::to_string(nu) +
                                     " exceeds n_max " +
                                     std::to_string(basis.n_max()));
  OccupationState occ{std::vector<int>(basis.sites(), nu)};
  return StateVector::basis_state(basis.dim(), basis.index_of(occ));
}

CheckReport check_controlled_density(const StateVector& psi, double lambda,
                                     const std::vector<double>& radii,
                                     const FockBasis& basis) {
  CheckReport report("controlled_density", Tier::Hard, 1e-9);
  report.set_parameter("lambda", lambda);
  report.notes.push_back(
      "radii r < 1 are not checked: at r = 0 the bound reads <N_{B_0}^p> <= 0");
  const auto& lat = basis.lattice();
  const int d = lat.dimension();
  double lambda_min = 0.0;
  for (double r : radii) {
    if (r < 1.0) {
      report.skip("radius " + format_double(r) + " < 1");
      return report;
    }
    const auto ball = lat.ball_indices(lat.origin(), r);
    const auto diag = number_diagonal(ball, basis);
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t k = 0; k < basis.dim(); ++k) {
      const double w = std::norm(psi[k]);
      m1 += w * diag[k];
      m2 += w * diag[k] * diag[k];
    }
    const double rd = std::pow(r, d);
    report.add_row("N_B_r^1 r=" + format_double(r), 0.0, m1, lambda * rd);
    report.add_row("N_B_r^2 r=" + format_double(r), 0.0, m2,
                   (lambda * rd) * (lambda * rd));
    lambda_min = std::max({lambda_min, m1 / rd, std::sqrt(m2) / rd});
  }
  report.set_constant("lambda_min", lambda_min);
  return report;
}

namespace {

std::vector<std::size_t> generator_offsets(const TorusLattice& lat) {
  std::vector<std::size_t> gens;
  for (int j = 0; j < lat.dimension(); ++j) {
    std::vector<int> plus(lat.dimension(), 0);
    std::vector<int> minus(lat.dimension(), 0);
    plus[j] = 1;
    minus[j] = -1;
    gens.push_back(lat.index_of(lat.wrap(plus)));
    gens.push_back(lat.index_of(lat.wrap(minus)));
  }
  return gens;
}

}  // namespace

double check_translation_invariance(const SparseOperator& op,
                                    const FockBasis& basis) {
  if (op.dim() != basis.dim())
    fail(ErrorKind::DimensionMismatch, "operator does not match basis");
  double worst = 0.0;
  auto rows = op.row_offsets();
  auto cols = op.columns();
  auto vals = op.values();
  for (std::size_t z : generator_offsets(basis.lattice())) {
    const auto perm = basis.translation_permutation(z);
    for (std::size_t r = 0; r < op.dim(); ++r)
      for (std::size_t p = rows[r]; p < rows[r + 1]; ++p)
        worst = std::max(worst, std::abs(op.at(perm[r], perm[cols[p]]) - vals[p]));
  }
  return worst;
}

double check_translation_invariance(const StateVector& psi,
                                    const FockBasis& basis) {
  if (psi.dim() != basis.dim())
    fail(ErrorKind::DimensionMismatch, "state does not match basis");
  double worst = 0.0;
  const double n2 = psi.norm() * psi.norm();
  for (std::size_t z : generator_offsets(basis.lattice())) {
    const auto perm = basis.translation_permutation(z);
    Complex overlap{0.0, 0.0};
    for (std::size_t k = 0; k < psi.dim(); ++k)
      overlap += std::conj(psi[perm[k]]) * psi[k];
    // min_theta ||a - e^{i theta} b||^2 = |a|^2 + |b|^2 - 2 |<a, b>|.
    worst = std::max(worst, std::sqrt(std::max(0.0, 2.0 * n2 - 2.0 * std::abs(overlap))));
  }
  return worst;
}

}  // namespace bhastlo
