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

#include <vector>

#include "bhastlo/fock.hpp"
#include "bhastlo/hopping.hpp"
#include "bhastlo/lattice.hpp"
#include "bhastlo/report.hpp"

namespace bhastlo {

/// On-site potential V = sum_x phi(n_x).
struct PotentialSpec {
  enum class Kind { BoseHubbard, Polynomial };

  Kind kind = Kind::BoseHubbard;
  double U = 0.0;
  double mu = 0.0;
  std::vector<double> coefficients;  // c_0..c_m for sum_k c_k n^k

  static PotentialSpec bose_hubbard(double U, double mu);
  static PotentialSpec polynomial(std::vector<double> coefficients);

  /// phi(n) for a single site.
  double site_energy(int n) const;
};

struct ModelSpec {
  TorusLattice lattice;
  HoppingMatrix hopping;
  PotentialSpec potential;
  int n_max;
  std::size_t max_dim = kDefaultMaxDim;
};

struct InitialStateSpec {
  int nu = 1;
  double lambda = 1.0;
};

/// Diagonal of V in the given basis.
std::vector<double> potential_diagonal(const PotentialSpec& potential,
                                       const FockBasis& basis);

/// H = sum_{x,y} J_{x,y} b_x^dagger b_y + V.
SparseOperator assemble_hamiltonian(const ModelSpec& spec,
                                    const FockBasis& basis);

/// Product state with nu bosons on every site.
StateVector mott_state(int nu, const FockBasis& basis);

/// Compares <N_{B_r}^p> against (lambda r^d)^p for p = 1, 2. Also reports
/// the smallest lambda for which every comparison holds.
CheckReport check_controlled_density(const StateVector& psi, double lambda,
                                     const std::vector<double>& radii,
                                     const FockBasis& basis);

/// max over the generators +-e_j of max_{k,l} |H(Tk, Tl) - H(k, l)|.
double check_translation_invariance(const SparseOperator& op,
                                    const FockBasis& basis);
/// max over the generators of min_theta ||T psi - e^{i theta} psi||.
double check_translation_invariance(const StateVector& psi,
                                    const FockBasis& basis);

}  // namespace bhastlo
