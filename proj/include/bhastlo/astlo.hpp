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

#include <ostream>
#include <vector>

#include "bhastlo/cutoff.hpp"
#include "bhastlo/fock.hpp"
#include "bhastlo/hopping.hpp"

namespace bhastlo {

enum class AstloVariant { Chi, ChiPrime, TildePrime };

const char* to_string(AstloVariant variant) noexcept;

/// Site weights of the chosen scaled cutoff at time t, by linear index.
std::vector<double> astlo_weights(const ScaledCutoff& sc, AstloVariant variant,
                                  double t, const TorusLattice& lat);

/// sum_x w(x) n_0 n_x, stored as its diagonal in the occupation basis.
class AstloObservable {
 public:
  AstloObservable(std::vector<double> weights, const FockBasis& basis,
                  AstloVariant variant = AstloVariant::Chi, double t = 0.0);

  AstloVariant variant() const noexcept { return variant_; }
  double time() const noexcept { return t_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& diagonal() const noexcept { return diagonal_; }

  double expectation(const StateVector& psi) const;
  SparseOperator as_operator() const;

 private:
  AstloVariant variant_;
  double t_;
  std::vector<double> weights_;
  std::vector<double> diagonal_;
};

AstloObservable build_astlo(const ScaledCutoff& sc, AstloVariant variant,
                            double t, const FockBasis& basis);

/// x -> <n_c n_{c+x}> around a center site c (the origin by default).
struct CorrelationProfile {
  double t = 0.0;
  std::vector<double> values;  // by linear index of x
};

CorrelationProfile correlation_profile(const StateVector& psi,
                                       const FockBasis& basis, double t = 0.0,
                                       std::size_t center = 0);

/// <n_0 N_{B_r}> = sum_{|x| <= r} profile(x).
double corr_with_ball(const CorrelationProfile& profile, double r,
                      const TorusLattice& lat);

/// Full matrix <n_x n_y>, row-major by linear indices.
std::vector<double> pair_correlations(const StateVector& psi,
                                      const FockBasis& basis);

/// c(x) = <i[H, n_0 n_x]> for every x, given phi = H psi.
std::vector<double> correlation_currents(const StateVector& psi,
                                         const StateVector& phi,
                                         const FockBasis& basis);

/// <i[H, D]> for a real diagonal D, given phi = H psi.
double diagonal_commutator(std::span<const double> diag, const StateVector& psi,
                           const StateVector& phi);

/// Per-site densities of the two hopping sums whose chi-weighted totals
/// make up the commutator:
///   I_z  = sum_x J_{x,z} <(b_x^dag b_z - b_z^dag b_x) n_0>
///   II_z = sum_{x != 0} J_{x,0} <n_z (b_x^dag b_0 - b_0^dag b_x)>
struct CommutatorDensities {
  std::vector<Complex> term_I;
  std::vector<Complex> term_II;
};

CommutatorDensities commutator_densities(const HoppingMatrix& J,
                                         const StateVector& psi,
                                         const FockBasis& basis);

struct CommutatorTerms {
  Complex term_I;
  Complex term_II;
};

/// chi_ts-weighted sums of the two hopping terms at time t.
CommutatorTerms commutator_terms(const HoppingMatrix& J, const ScaledCutoff& sc,
                                 double t, const StateVector& psi,
                                 const FockBasis& basis);

/// <i[H, A_ts]> from the explicit sparse commutator H A - A H.
Complex sparse_commutator_expectation(const SparseOperator& H,
                                      const AstloObservable& A,
                                      const StateVector& psi);

/// d/dt <A_ts>_t = < -(v_tilde/s) A'_ts + i[H, A_ts] >_t.
double heisenberg_derivative(const SparseOperator& H, const ScaledCutoff& sc,
                             double t, const StateVector& psi,
                             const FockBasis& basis);

/// max_{x,y} of |<b_0^dag n_y b_x>| - sqrt(<n_0 n_y><n_x n_y>), given the
/// pair-correlation matrix of the same state.
double cauchy_schwarz_residual(const StateVector& psi, const FockBasis& basis,
                               const std::vector<double>& pairs);

/// Columns: t,x,value with x the linear site index.
void write_profile_csv(std::ostream& os,
                       const std::vector<CorrelationProfile>& profiles);

}  // namespace bhastlo
