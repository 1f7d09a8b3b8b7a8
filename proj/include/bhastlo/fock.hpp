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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bhastlo/lattice.hpp"

namespace bhastlo {

using Complex = std::complex<double>;

inline constexpr std::size_t kDefaultMaxDim = 4'000'000;
inline constexpr double kPruneThreshold = 1e-15;

/// Occupation numbers indexed by linear site index.
struct OccupationState {
  std::vector<int> occ;

  friend bool operator==(const OccupationState&,
                         const OccupationState&) = default;
};

/// Truncated bosonic Fock basis with a hard per-site cutoff n_max.
///
/// The full basis is the mixed-radix enumeration in which site 0 is the
/// least significant digit, so the basis index of an occupation is
/// sum_i occ_i (n_max+1)^i. A fixed-N sector basis keeps the states of the
/// full basis with total boson number N, in increasing full-index order.
class FockBasis {
 public:
  static FockBasis full(const TorusLattice& lat, int n_max,
                        std::size_t max_dim = kDefaultMaxDim);
  static FockBasis fixed_number(const TorusLattice& lat, int n_max,
                                int total, std::size_t max_dim = kDefaultMaxDim);

  const TorusLattice& lattice() const noexcept { return lat_; }
  int n_max() const noexcept { return n_max_; }
  std::optional<int> sector() const noexcept { return sector_; }
  bool is_full() const noexcept { return !sector_.has_value(); }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t sites() const noexcept { return sites_; }

  std::size_t index_of(const OccupationState& state) const;
  OccupationState occ_of(std::size_t index) const;

  std::uint8_t occupation(std::size_t state, std::size_t site) const {
    return occ_[state * sites_ + site];
  }
  std::span<const std::uint8_t> occupations(std::size_t state) const {
    return {occ_.data() + state * sites_, sites_};
  }
  int total_number(std::size_t state) const;

  /// Full mixed-radix code of a basis state.
  std::uint64_t code(std::size_t state) const { return codes_[state]; }
  std::uint64_t radix_power(std::size_t site) const { return powers_[site]; }

  /// Basis index of a full code, or nullopt when the code is not in this
  /// basis (wrong sector).
  std::optional<std::size_t> find_code(std::uint64_t code) const;

  /// Moves one boson from `from` to `to` (from != to) under the truncated
  /// ladder action b_to^dagger b_from. Returns the target index and the
  /// amplitude sqrt(n_from) sqrt(n_to + 1), or nullopt when the result
  /// vanishes (empty source or saturated target).
  std::optional<std::pair<std::size_t, double>> hop(std::size_t state,
                                                    std::size_t from,
                                                    std::size_t to) const;

  /// Basis permutation induced by translating every site by the lattice
  /// vector with linear index `z`: occupation at x moves to x+z.
  std::vector<std::size_t> translation_permutation(std::size_t z) const;

 private:
  FockBasis(const TorusLattice& lat, int n_max);
  void build_lookup(std::size_t full_dim);

  TorusLattice lat_;
  int n_max_;
  std::optional<int> sector_;
  std::size_t sites_;
  std::size_t dim_ = 0;
  std::vector<std::uint64_t> powers_;
  std::vector<std::uint8_t> occ_;
  std::vector<std::uint64_t> codes_;
  std::vector<std::int32_t> dense_lookup_;  // empty => binary search
};

std::size_t basis_dim(const TorusLattice& lat, int n_max);

/// Normalized or unnormalized complex state over a basis.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(std::size_t dim) : amp_(dim, Complex{0.0, 0.0}) {}
  explicit StateVector(std::vector<Complex> amp) : amp_(std::move(amp)) {}

  static StateVector basis_state(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return amp_.size(); }
  Complex& operator[](std::size_t i) { return amp_[i]; }
  const Complex& operator[](std::size_t i) const { return amp_[i]; }
  std::span<Complex> amplitudes() noexcept { return amp_; }
  std::span<const Complex> amplitudes() const noexcept { return amp_; }
  std::vector<Complex>& data() noexcept { return amp_; }
  const std::vector<Complex>& data() const noexcept { return amp_; }

  double norm() const;
  void normalize();

 private:
  std::vector<Complex> amp_;
};

Complex inner(const StateVector& a, const StateVector& b);  // <a, b>
double distance(const StateVector& a, const StateVector& b);

struct Triplet {
  std::size_t row;
  std::size_t col;
  Complex value;
};

/// Square complex matrix in compressed row storage with sorted column
/// indices. Entries with magnitude <= 1e-15 are pruned at construction.
class SparseOperator {
 public:
  using RowFill = std::function<void(std::size_t row,
                                     std::vector<std::pair<std::size_t, Complex>>&)>;

  SparseOperator() = default;
  explicit SparseOperator(std::size_t dim);

  static SparseOperator identity(std::size_t dim);
  static SparseOperator diagonal(std::span<const double> entries);
  static SparseOperator from_triplets(std::size_t dim,
                                      std::vector<Triplet> triplets);
  /// Builds row by row; `fill` may emit duplicate columns, which are summed.
  static SparseOperator from_rows(std::size_t dim, const RowFill& fill);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t nnz() const noexcept { return values_.size(); }
  std::span<const std::size_t> row_offsets() const noexcept { return row_ptr_; }
  std::span<const std::uint32_t> columns() const noexcept { return cols_; }
  std::span<const Complex> values() const noexcept { return values_; }

  Complex at(std::size_t row, std::size_t col) const;

  void apply(std::span<const Complex> in, std::span<Complex> out) const;
  StateVector apply(const StateVector& psi) const;

  SparseOperator adjoint() const;
  SparseOperator scaled(Complex factor) const;
  double max_abs() const;
  bool is_diagonal() const;

  Eigen::MatrixXcd to_dense() const;

  friend SparseOperator operator*(const SparseOperator& a,
                                  const SparseOperator& b);
  friend SparseOperator operator+(const SparseOperator& a,
                                  const SparseOperator& b);
  friend SparseOperator operator-(const SparseOperator& a,
                                  const SparseOperator& b);

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> cols_;
  std::vector<Complex> values_;
};

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);

/// b_x; requires a full basis since b_x leaves every number sector.
SparseOperator annihilation_op(const Site& x, const FockBasis& basis);
/// b_x^dagger with b^dagger |n_max> = 0.
SparseOperator creation_op(const Site& x, const FockBasis& basis);
SparseOperator number_op(const Site& x, const FockBasis& basis);
/// b_to^dagger b_from as a single truncated hop (number conserving).
SparseOperator hop_op(const Site& to, const Site& from,
                      const FockBasis& basis);
/// N_X = sum_{x in X} n_x.
SparseOperator number_restricted(std::span<const Site> X,
                                 const FockBasis& basis);
SparseOperator total_number_op(const FockBasis& basis);

/// Diagonal of N_X as a dense array.
std::vector<double> number_diagonal(std::span<const std::size_t> sites,
                                    const FockBasis& basis);

Complex expectation(const SparseOperator& op, const StateVector& psi);
/// <psi, D psi> for a diagonal given as a dense array.
double diagonal_expectation(std::span<const double> diag,
                            const StateVector& psi);

/// Maps a state between a full basis and a sector basis of the same
/// lattice and cutoff. Weight outside the target basis is dropped.
StateVector change_basis(const StateVector& psi, const FockBasis& from,
                         const FockBasis& to);

}  // namespace bhastlo
