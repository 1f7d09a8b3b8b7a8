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

#include "bhastlo/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "bhastlo/error.hpp"

namespace bhastlo {

namespace {

constexpr std::size_t kDenseLookupLimit = std::size_t{1} << 27;

std::uint64_t checked_full_dim(std::size_t sites, int n_max) {
  std::uint64_t dim = 1;
  const std::uint64_t radix = static_cast<std::uint64_t>(n_max) + 1;
  for (std::size_t i = 0; i < sites; ++i) {
    if (dim > std::numeric_limits<std::uint64_t>::max() / radix)
      return std::numeric_limits<std::uint64_t>::max();
    dim *= radix;
  }
  return dim;
}

// Number of ways to place `total` bosons on `sites` sites with cutoff.
std::uint64_t sector_count(std::size_t sites, int n_max, int total) {
  std::vector<std::uint64_t> ways(static_cast<std::size_t>(total) + 1, 0);
  ways[0] = 1;
  for (std::size_t s = 0; s < sites; ++s) {
    std::vector<std::uint64_t> next(ways.size(), 0);
    for (int n = 0; n <= total; ++n) {
      if (ways[n] == 0) continue;
      for (int k = 0; k <= n_max && n + k <= total; ++k) {
        std::uint64_t add = ways[n];
        next[n + k] = next[n + k] > std::numeric_limits<std::uint64_t>::max() - add
                          ? std::numeric_limits<std::uint64_t>::max()
                          : next[n + k] + add;
      }
    }
    ways = std::move(next);
  }
  return ways[total];
}

void require_capacity(std::uint64_t dim, std::size_t max_dim) {
  if (dim > max_dim)
    fail(ErrorKind::Capacity, "basis dimension " +
                                  (dim == std::numeric_limits<std::uint64_t>::max()
                                       ? std::string("(overflow)")
                                       : std::to_string(dim)) +
                                  " exceeds configured maximum " +
                                  std::to_string(max_dim));
}

}  // namespace

FockBasis::FockBasis(const TorusLattice& lat, int n_max)
    : lat_(lat), n_max_(n_max), sites_(lat.site_count()) {
  if (n_max < 1) fail(ErrorKind::Parameter, "n_max must be >= 1");
  if (n_max > 255) fail(ErrorKind::Parameter, "n_max must be <= 255");
  powers_.resize(sites_);
  std::uint64_t p = 1;
  for (std::size_t i = 0; i < sites_; ++i) {
    powers_[i] = p;
    if (i + 1 < sites_) {
      if (p > std::numeric_limits<std::uint64_t>::max() /
                  (static_cast<std::uint64_t>(n_max) + 1))
        fail(ErrorKind::Capacity, "occupation code overflows 64 bits");
      p *= static_cast<std::uint64_t>(n_max) + 1;
    }
  }
}

FockBasis FockBasis::full(const TorusLattice& lat, int n_max,
                          std::size_t max_dim) {
  FockBasis b(lat, n_max);
  const std::uint64_t dim = checked_full_dim(b.sites_, n_max);
  require_capacity(dim, max_dim);
  b.dim_ = static_cast<std::size_t>(dim);
  b.occ_.assign(b.dim_ * b.sites_, 0);
  b.codes_.resize(b.dim_);
  for (std::size_t k = 0; k < b.dim_; ++k) {
    b.codes_[k] = k;
    std::size_t rest = k;
    for (std::size_t s = 0; s < b.sites_; ++s) {
      b.occ_[k * b.sites_ + s] = static_cast<std::uint8_t>(rest % (n_max + 1));
      rest /= (n_max + 1);
    }
  }
  return b;
}

FockBasis FockBasis::fixed_number(const TorusLattice& lat, int n_max,
                                  int total, std::size_t max_dim) {
  if (total < 0) fail(ErrorKind::Parameter, "sector boson number must be >= 0");
  FockBasis b(lat, n_max);
  b.sector_ = total;
  const std::uint64_t dim = sector_count(b.sites_, n_max, total);
  require_capacity(dim, max_dim);
  if (dim == 0) fail(ErrorKind::Parameter, "empty number sector");
  b.dim_ = static_cast<std::size_t>(dim);
  b.occ_.reserve(b.dim_ * b.sites_);
  b.codes_.reserve(b.dim_);

  // Most significant site first with ascending values gives ascending codes.
  std::vector<std::uint8_t> current(b.sites_, 0);
  const std::size_t S = b.sites_;
  std::function<void(std::size_t, int, std::uint64_t)> place =
      [&](std::size_t remaining_sites, int left, std::uint64_t code) {
        if (remaining_sites == 0) {
          if (left != 0) return;
          b.occ_.insert(b.occ_.end(), current.begin(), current.end());
          b.codes_.push_back(code);
          return;
        }
        const std::size_t site = remaining_sites - 1;
        // Bosons the lower sites can still absorb.
        const int capacity = static_cast<int>(site) * n_max;
        for (int n = 0; n <= std::min(n_max, left); ++n) {
          if (left - n > capacity) continue;
          current[site] = static_cast<std::uint8_t>(n);
          place(site, left - n, code + static_cast<std::uint64_t>(n) * b.powers_[site]);
        }
        current[site] = 0;
      };
  place(S, total, 0);
  b.build_lookup(static_cast<std::size_t>(
      std::min<std::uint64_t>(checked_full_dim(S, n_max),
                              std::numeric_limits<std::size_t>::max())));
  return b;
}

void FockBasis::build_lookup(std::size_t full_dim) {
  if (full_dim > kDenseLookupLimit) return;
  dense_lookup_.assign(full_dim, -1);
  for (std::size_t k = 0; k < dim_; ++k)
    dense_lookup_[codes_[k]] = static_cast<std::int32_t>(k);
}

std::size_t basis_dim(const TorusLattice& lat, int n_max) {
  const std::uint64_t dim = checked_full_dim(lat.site_count(), n_max);
  if (dim > std::numeric_limits<std::size_t>::max())
    fail(ErrorKind::Capacity, "basis dimension overflows");
  return static_cast<std::size_t>(dim);
}

int FockBasis::total_number(std::size_t state) const {
  int n = 0;
  for (std::uint8_t o : occupations(state)) n += o;
  return n;
}

std::optional<std::size_t> FockBasis::find_code(std::uint64_t code) const {
  if (!sector_) {
    if (code < dim_) return static_cast<std::size_t>(code);
    return std::nullopt;
  }
  if (!dense_lookup_.empty()) {
    if (code >= dense_lookup_.size()) return std::nullopt;
    const std::int32_t k = dense_lookup_[code];
    if (k < 0) return std::nullopt;
    return static_cast<std::size_t>(k);
  }
  auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
  if (it == codes_.end() || *it != code) return std::nullopt;
  return static_cast<std::size_t>(it - codes_.begin());
}

std::size_t FockBasis::index_of(const OccupationState& state) const {
  if (state.occ.size() != sites_)
    fail(ErrorKind::Parameter, "occupation has wrong number of sites");
  std::uint64_t code = 0;
  for (std::size_t s = 0; s < sites_; ++s) {
    const int n = state.occ[s];
    if (n < 0 || n > n_max_)
      fail(ErrorKind::OutOfCutoff, "occupation " + std::to_string(n) +
                                       " at site " + std::to_string(s) +
                                       " outside [0, " +
                                       std::to_string(n_max_) + "]");
    code += static_cast<std::uint64_t>(n) * powers_[s];
  }
  auto k = find_code(code);
  if (!k) fail(ErrorKind::Parameter, "occupation is not in the number sector");
  return *k;
}

OccupationState FockBasis::occ_of(std::size_t index) const {
  if (index >= dim_)
    fail(ErrorKind::Parameter, "basis index " + std::to_string(index) +
                                   " out of range");
  OccupationState s;
  s.occ.assign(occupations(index).begin(), occupations(index).end());
  return s;
}

std::optional<std::pair<std::size_t, double>> FockBasis::hop(
    std::size_t state, std::size_t from, std::size_t to) const {
  const std::uint8_t* occ = occ_.data() + state * sites_;
  const int nf = occ[from];
  const int nt = occ[to];
  if (nf == 0 || nt >= n_max_) return std::nullopt;
  const std::uint64_t target = codes_[state] - powers_[from] + powers_[to];
  auto k = find_code(target);
  if (!k) return std::nullopt;
  return std::pair{*k, std::sqrt(static_cast<double>(nf)) *
                           std::sqrt(static_cast<double>(nt + 1))};
}

std::vector<std::size_t> FockBasis::translation_permutation(
    std::size_t z) const {
  std::vector<std::size_t> target_site(sites_);
  for (std::size_t x = 0; x < sites_; ++x) target_site[x] = lat_.sum_index(x, z);
  std::vector<std::size_t> perm(dim_);
  for (std::size_t k = 0; k < dim_; ++k) {
    std::uint64_t code = 0;
    for (std::size_t x = 0; x < sites_; ++x)
      code += static_cast<std::uint64_t>(occupation(k, x)) * powers_[target_site[x]];
    auto j = find_code(code);
    if (!j) fail(ErrorKind::Internal, "translation left the basis");
    perm[k] = *j;
  }
  return perm;
}

// ---------------------------------------------------------------------------

StateVector StateVector::basis_state(std::size_t dim, std::size_t index) {
  if (index >= dim) fail(ErrorKind::Parameter, "basis index out of range");
  StateVector psi(dim);
  psi[index] = 1.0;
  return psi;
}

double StateVector::norm() const {
  double sq = 0.0;
  for (const Complex& a : amp_) sq += std::norm(a);
  return std::sqrt(sq);
}

void StateVector::normalize() {
  const double n = norm();
  if (n == 0.0) fail(ErrorKind::NotNormalized, "cannot normalize a zero vector");
  for (Complex& a : amp_) a /= n;
}

Complex inner(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim())
    fail(ErrorKind::DimensionMismatch, "inner product of vectors of different size");
  Complex sum{0.0, 0.0};
  for (std::size_t i = 0; i < a.dim(); ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

double distance(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim())
    fail(ErrorKind::DimensionMismatch, "distance of vectors of different size");
  double sq = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) sq += std::norm(a[i] - b[i]);
  return std::sqrt(sq);
}

// ---------------------------------------------------------------------------

SparseOperator::SparseOperator(std::size_t dim)
    : dim_(dim), row_ptr_(dim + 1, 0) {}

SparseOperator SparseOperator::identity(std::size_t dim) {
  std::vector<double> ones(dim, 1.0);
  return diagonal(ones);
}

SparseOperator SparseOperator::diagonal(std::span<const double> entries) {
  SparseOperator op(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (std::abs(entries[i]) > kPruneThreshold) {
      op.cols_.push_back(static_cast<std::uint32_t>(i));
      op.values_.push_back(entries[i]);
    }
    op.row_ptr_[i + 1] = op.values_.size();
  }
  return op;
}

SparseOperator SparseOperator::from_triplets(std::size_t dim,
                                             std::vector<Triplet> triplets) {
  for (const Triplet& t : triplets)
    if (t.row >= dim || t.col >= dim)
      fail(ErrorKind::DimensionMismatch, "triplet index out of range");
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseOperator op(dim);
  std::size_t i = 0;
  for (std::size_t r = 0; r < dim; ++r) {
    while (i < triplets.size() && triplets[i].row == r) {
      const std::size_t c = triplets[i].col;
      Complex v{0.0, 0.0};
      while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c)
        v += triplets[i++].value;
      if (std::abs(v) > kPruneThreshold) {
        op.cols_.push_back(static_cast<std::uint32_t>(c));
        op.values_.push_back(v);
      }
    }
    op.row_ptr_[r + 1] = op.values_.size();
  }
  return op;
}

SparseOperator SparseOperator::from_rows(std::size_t dim, const RowFill& fill) {
  if (dim > std::numeric_limits<std::uint32_t>::max())
    fail(ErrorKind::Capacity, "operator dimension exceeds 32-bit column index");
  std::vector<std::pair<std::size_t, Complex>> row;
  auto compact = [&row]() {
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t w = 0;
    for (std::size_t i = 0; i < row.size();) {
      const std::size_t c = row[i].first;
      Complex v{0.0, 0.0};
      while (i < row.size() && row[i].first == c) v += row[i++].second;
      if (std::abs(v) > kPruneThreshold) row[w++] = {c, v};
    }
    row.resize(w);
  };

  // Counting pass keeps the final arrays at their exact size.
  SparseOperator op(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    row.clear();
    fill(r, row);
    compact();
    op.row_ptr_[r + 1] = op.row_ptr_[r] + row.size();
  }
  op.cols_.resize(op.row_ptr_[dim]);
  op.values_.resize(op.row_ptr_[dim]);
  for (std::size_t r = 0; r < dim; ++r) {
    row.clear();
    fill(r, row);
    compact();
    if (row.size() != op.row_ptr_[r + 1] - op.row_ptr_[r])
      fail(ErrorKind::Internal, "row fill is not deterministic");
    std::size_t p = op.row_ptr_[r];
    for (const auto& [c, v] : row) {
      if (c >= dim) fail(ErrorKind::DimensionMismatch, "column index out of range");
      op.cols_[p] = static_cast<std::uint32_t>(c);
      op.values_[p++] = v;
    }
  }
  return op;
}

Complex SparseOperator::at(std::size_t row, std::size_t col) const {
  if (row >= dim_ || col >= dim_)
    fail(ErrorKind::DimensionMismatch, "matrix index out of range");
  auto begin = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row]);
  auto end = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[row + 1]);
  auto it = std::lower_bound(begin, end, static_cast<std::uint32_t>(col));
  if (it == end || *it != col) return {0.0, 0.0};
  return values_[static_cast<std::size_t>(it - cols_.begin())];
}

void SparseOperator::apply(std::span<const Complex> in,
                           std::span<Complex> out) const {
  if (in.size() != dim_ || out.size() != dim_)
    fail(ErrorKind::DimensionMismatch, "operator/vector dimension mismatch");
  const std::uint32_t* cols = cols_.data();
  const Complex* vals = values_.data();
  for (std::size_t r = 0; r < dim_; ++r) {
    Complex acc{0.0, 0.0};
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
      acc += vals[p] * in[cols[p]];
    out[r] = acc;
  }
}

StateVector SparseOperator::apply(const StateVector& psi) const {
  StateVector out(dim_);
  apply(psi.amplitudes(), out.amplitudes());
  return out;
}

SparseOperator SparseOperator::adjoint() const {
  SparseOperator t(dim_);
  std::vector<std::size_t> counts(dim_ + 1, 0);
  for (std::uint32_t c : cols_) ++counts[c + 1];
  for (std::size_t i = 0; i < dim_; ++i) counts[i + 1] += counts[i];
  t.row_ptr_ = counts;
  t.cols_.resize(cols_.size());
  t.values_.resize(values_.size());
  std::vector<std::size_t> next(counts.begin(), counts.end() - 1);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      const std::size_t q = next[cols_[p]]++;
      t.cols_[q] = static_cast<std::uint32_t>(r);
      t.values_[q] = std::conj(values_[p]);
    }
  return t;
}

SparseOperator SparseOperator::scaled(Complex factor) const {
  SparseOperator out = *this;
  for (Complex& v : out.values_) v *= factor;
  if (std::abs(factor) <= kPruneThreshold) return SparseOperator(dim_);
  return out;
}

double SparseOperator::max_abs() const {
  double m = 0.0;
  for (const Complex& v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool SparseOperator::is_diagonal() const {
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
      if (cols_[p] != r) return false;
  return true;
}

Eigen::MatrixXcd SparseOperator::to_dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim_),
                                              static_cast<Eigen::Index>(dim_));
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols_[p])) = values_[p];
  return m;
}

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim_ != b.dim_)
    fail(ErrorKind::DimensionMismatch, "operator product dimension mismatch");
  const std::size_t n = a.dim_;
  std::vector<Complex> acc(n, Complex{0.0, 0.0});
  std::vector<char> used(n, 0);
  std::vector<std::size_t> touched;
  return SparseOperator::from_rows(n, [&](std::size_t r, auto& row) {
    touched.clear();
    for (std::size_t p = a.row_ptr_[r]; p < a.row_ptr_[r + 1]; ++p) {
      const std::size_t k = a.cols_[p];
      for (std::size_t q = b.row_ptr_[k]; q < b.row_ptr_[k + 1]; ++q) {
        const std::size_t c = b.cols_[q];
        if (!used[c]) {
          used[c] = 1;
          touched.push_back(c);
        }
        acc[c] += a.values_[p] * b.values_[q];
      }
    }
    for (std::size_t c : touched) {
      row.emplace_back(c, acc[c]);
      acc[c] = Complex{0.0, 0.0};
      used[c] = 0;
    }
  });
}

namespace {

SparseOperator combine(const SparseOperator& a, const SparseOperator& b,
                       double sign) {
  if (a.dim() != b.dim())
    fail(ErrorKind::DimensionMismatch, "operator sum dimension mismatch");
  return SparseOperator::from_rows(a.dim(), [&](std::size_t r, auto& row) {
    auto ra = a.row_offsets();
    for (std::size_t p = ra[r]; p < ra[r + 1]; ++p)
      row.emplace_back(a.columns()[p], a.values()[p]);
    auto rb = b.row_offsets();
    for (std::size_t p = rb[r]; p < rb[r + 1]; ++p)
      row.emplace_back(b.columns()[p], sign * b.values()[p]);
  });
}

}  // namespace

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
  return combine(a, b, 1.0);
}

SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) {
  return combine(a, b, -1.0);
}

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) {
  return a * b - b * a;
}

// ---------------------------------------------------------------------------

SparseOperator annihilation_op(const Site& x, const FockBasis& basis) {
  if (!basis.is_full())
    fail(ErrorKind::Parameter,
         "ladder operators require the full (all-sector) basis");
  const std::size_t site = basis.lattice().index_of(x);
  return SparseOperator::from_rows(basis.dim(), [&](std::size_t r, auto& row) {
    // <r| b |k> nonzero for k = r + e_site.
    const int n = basis.occupation(r, site);
    if (n >= basis.n_max()) return;
    const std::size_t k = r + static_cast<std::size_t>(basis.radix_power(site));
    row.emplace_back(k, std::sqrt(static_cast<double>(n + 1)));
  });
}

SparseOperator creation_op(const Site& x, const FockBasis& basis) {
  return annihilation_op(x, basis).adjoint();
}

SparseOperator number_op(const Site& x, const FockBasis& basis) {
  const std::size_t site = basis.lattice().index_of(x);
  std::vector<std::size_t> one{site};
  auto diag = number_diagonal(one, basis);
  return SparseOperator::diagonal(diag);
}

SparseOperator hop_op(const Site& to, const Site& from,
                      const FockBasis& basis) {
  const std::size_t t = basis.lattice().index_of(to);
  const std::size_t f = basis.lattice().index_of(from);
  if (t == f) return number_op(to, basis);
  std::vector<Triplet> trip;
  for (std::size_t k = 0; k < basis.dim(); ++k)
    if (auto h = basis.hop(k, f, t)) trip.push_back({h->first, k, h->second});
  return SparseOperator::from_triplets(basis.dim(), std::move(trip));
}

SparseOperator number_restricted(std::span<const Site> X,
                                 const FockBasis& basis) {
  std::vector<std::size_t> idx;
  for (const Site& s : X) idx.push_back(basis.lattice().index_of(s));
  auto diag = number_diagonal(idx, basis);
  return SparseOperator::diagonal(diag);
}

SparseOperator total_number_op(const FockBasis& basis) {
  std::vector<std::size_t> all(basis.sites());
  std::iota(all.begin(), all.end(), 0);
  auto diag = number_diagonal(all, basis);
  return SparseOperator::diagonal(diag);
}

std::vector<double> number_diagonal(std::span<const std::size_t> sites,
                                    const FockBasis& basis) {
  std::vector<double> diag(basis.dim(), 0.0);
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    int n = 0;
    for (std::size_t s : sites) n += basis.occupation(k, s);
    diag[k] = n;
  }
  return diag;
}

Complex expectation(const SparseOperator& op, const StateVector& psi) {
  if (op.dim() != psi.dim())
    fail(ErrorKind::DimensionMismatch,
         "expectation: operator dim " + std::to_string(op.dim()) +
             " vs state dim " + std::to_string(psi.dim()));
  auto rows = op.row_offsets();
  auto cols = op.columns();
  auto vals = op.values();
  Complex sum{0.0, 0.0};
  for (std::size_t r = 0; r < op.dim(); ++r) {
    Complex acc{0.0, 0.0};
    for (std::size_t p = rows[r]; p < rows[r + 1]; ++p) acc += vals[p] * psi[cols[p]];
    sum += std::conj(psi[r]) * acc;
  }
  return sum;
}

double diagonal_expectation(std::span<const double> diag,
                            const StateVector& psi) {
  if (diag.size() != psi.dim())
    fail(ErrorKind::DimensionMismatch, "diagonal/state dimension mismatch");
  double sum = 0.0;
  for (std::size_t k = 0; k < diag.size(); ++k) sum += diag[k] * std::norm(psi[k]);
  return sum;
}

StateVector change_basis(const StateVector& psi, const FockBasis& from,
                         const FockBasis& to) {
  if (psi.dim() != from.dim())
    fail(ErrorKind::DimensionMismatch, "state does not belong to source basis");
  if (!(from.lattice() == to.lattice()) || from.n_max() != to.n_max())
    fail(ErrorKind::Parameter, "bases differ in lattice or cutoff");
  StateVector out(to.dim());
  for (std::size_t k = 0; k < from.dim(); ++k) {
    if (psi[k] == Complex{0.0, 0.0}) continue;
    if (auto j = to.find_code(from.code(k))) out[*j] = psi[k];
  }
  return out;
}

}  // namespace bhastlo
