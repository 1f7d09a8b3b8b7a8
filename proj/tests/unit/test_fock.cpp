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
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"

#include "bhastlo/error.hpp"
#include "bhastlo/fock.hpp"

using namespace bhastlo;

namespace {

double max_abs(const Eigen::MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("basis enumeration") {
  TorusLattice tri(1, 3);
  const auto basis = FockBasis::full(tri, 2);
  CHECK(basis.dim() == 27);
  CHECK(basis_dim(tri, 2) == 27);
  CHECK(basis.index_of(OccupationState{{0, 0, 0}}) == 0);
  CHECK(basis.occ_of(0) == OccupationState{{0, 0, 0}});
  CHECK(basis.index_of(OccupationState{{1, 1, 1}}) == 13);
  CHECK_THROWS_AS(basis.index_of(OccupationState{{3, 0, 0}}), Error);

  std::mt19937 rng(3);
  std::uniform_int_distribution<int> occ(0, 2);
  for (int trial = 0; trial < 100; ++trial) {
    OccupationState s{{occ(rng), occ(rng), occ(rng)}};
    CHECK(basis.occ_of(basis.index_of(s)) == s);
  }
  for (std::size_t k = 0; k < basis.dim(); ++k)
    CHECK(basis.index_of(basis.occ_of(k)) == k);
}

TEST_CASE("number sectors") {
  TorusLattice line(1, 8);
  const auto sector = FockBasis::fixed_number(line, 3, 8);
  CHECK(sector.dim() == 3823);
  const auto full = FockBasis::full(line, 3);
  for (std::size_t k = 1; k < sector.dim(); ++k)
    CHECK(sector.code(k - 1) < sector.code(k));
  for (std::size_t k = 0; k < sector.dim(); k += 17) {
    const auto s = sector.occ_of(k);
    CHECK(sector.index_of(s) == k);
    CHECK(sector.total_number(k) == 8);
    CHECK(full.index_of(s) == sector.code(k));
  }
  CHECK_THROWS_AS(sector.index_of(OccupationState{{0, 0, 0, 0, 0, 0, 0, 0}}), Error);
  CHECK_THROWS_AS(FockBasis::full(line, 3, 1000), Error);
}

TEST_CASE("ladder operators on one site") {
  TorusLattice pair(1, 2);
  const auto basis = FockBasis::full(pair, 3);
  const Site x = pair.site({0});
  const auto b = annihilation_op(x, basis);
  const auto bd = creation_op(x, basis);
  const std::size_t one = basis.index_of(OccupationState{{1, 0}});
  const std::size_t two = basis.index_of(OccupationState{{2, 0}});
  const auto out = bd.apply(StateVector::basis_state(basis.dim(), one));
  CHECK(std::abs(out[two] - Complex(std::sqrt(2.0), 0.0)) < 1e-15);
  CHECK(b.apply(StateVector::basis_state(basis.dim(), 0)).norm() == 0.0);
  const std::size_t top = basis.index_of(OccupationState{{3, 0}});
  CHECK(bd.apply(StateVector::basis_state(basis.dim(), top)).norm() == 0.0);

  CHECK(max_abs((bd * b).to_dense() - number_op(x, basis).to_dense()) < 1e-12);
  CHECK(max_abs(bd.to_dense() - b.to_dense().adjoint()) == 0.0);
  CHECK_THROWS_AS(annihilation_op(x, FockBasis::fixed_number(pair, 3, 2)), Error);
}

TEST_CASE("truncated commutation relations") {
  TorusLattice tri(1, 3);
  const int n_max = 3;
  const auto basis = FockBasis::full(tri, n_max);
  for (std::size_t x = 0; x < 3; ++x) {
    const Site sx = tri.site_at(x);
    // Projector onto n_x <= n_max - 1.
    std::vector<double> keep(basis.dim());
    for (std::size_t k = 0; k < basis.dim(); ++k)
      keep[k] = basis.occupation(k, x) < n_max ? 1.0 : 0.0;
    const auto P = SparseOperator::diagonal(keep).to_dense();
    for (std::size_t y = 0; y < 3; ++y) {
      const Site sy = tri.site_at(y);
      const auto bx = annihilation_op(sx, basis);
      const auto by = annihilation_op(sy, basis);
      const auto ccr = commutator(bx, creation_op(sy, basis)).to_dense();
      Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
      if (x == y) expected.setIdentity();
      CHECK(max_abs(P * (ccr - expected) * P) < 1e-12);
      CHECK(commutator(bx, by).max_abs() < 1e-12);
      CHECK(commutator(number_op(sx, basis), number_op(sy, basis)).max_abs() == 0.0);
    }
  }
}

TEST_CASE("number operators") {
  TorusLattice tri(1, 3);
  const auto basis = FockBasis::full(tri, 2);
  const auto mott = StateVector::basis_state(basis.dim(), 13);
  CHECK(expectation(total_number_op(basis), mott).real() == doctest::Approx(3.0));
  CHECK(number_restricted({}, basis).max_abs() == 0.0);

  TorusLattice line(1, 6);
  const auto big = FockBasis::full(line, 2);
  const auto ball = line.ball(line.origin(), 1.0);
  const auto N = number_restricted(ball, big);
  CHECK(N.is_diagonal());
  for (std::size_t k = 0; k < big.dim(); ++k) {
    const auto occ = big.occ_of(k).occ;
    CHECK(N.at(k, k).real() == occ[5] + occ[0] + occ[1]);
  }
}

TEST_CASE("expectations") {
  TorusLattice tri(1, 3);
  const auto basis = FockBasis::full(tri, 2);
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  std::vector<Complex> amp(basis.dim());
  for (auto& a : amp) a = {g(rng), g(rng)};
  StateVector psi(std::move(amp));
  psi.normalize();
  CHECK(expectation(SparseOperator::identity(basis.dim()), psi).real() ==
        doctest::Approx(1.0).epsilon(1e-14));

  std::vector<Triplet> t;
  for (std::size_t i = 0; i < basis.dim(); ++i)
    for (std::size_t j = i; j < basis.dim(); j += 3) {
      const Complex v(g(rng), i == j ? 0.0 : g(rng));
      t.push_back({i, j, v});
      if (i != j) t.push_back({j, i, std::conj(v)});
    }
  const auto herm = SparseOperator::from_triplets(basis.dim(), t);
  CHECK(std::abs(expectation(herm, psi).imag()) < 1e-12);

  const auto mott2 = StateVector::basis_state(basis.dim(), basis.index_of(OccupationState{{2, 2, 2}}));
  CHECK(expectation(number_op(tri.origin(), basis), mott2).real() == 2.0);
  CHECK_THROWS_AS(expectation(herm, StateVector(4)), Error);
}

TEST_CASE("positivity of number products") {
  TorusLattice tri(1, 3);
  const auto basis = FockBasis::full(tri, 3);
  const auto n0 = number_op(tri.origin(), basis);
  for (std::size_t x = 0; x < 3; ++x) {
    const auto prod = (n0 * number_op(tri.site_at(x), basis)).to_dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(prod);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
  }
}

TEST_CASE("sparse algebra") {
  const auto I = SparseOperator::identity(4);
  std::vector<Triplet> t{{0, 1, {1.0, 2.0}}, {1, 0, {1.0, -2.0}}, {2, 3, {1e-17, 0}},
                         {3, 3, {0.5, 0}}, {3, 3, {0.25, 0}}};
  const auto A = SparseOperator::from_triplets(4, t);
  CHECK(A.nnz() == 3);
  CHECK(A.at(3, 3) == Complex(0.75, 0));
  CHECK(max_abs((A * I).to_dense() - A.to_dense()) == 0.0);
  CHECK(max_abs((A + A).to_dense() - A.scaled(2.0).to_dense()) == 0.0);
  CHECK((A - A).nnz() == 0);
  CHECK(max_abs(A.adjoint().to_dense() - A.to_dense().adjoint()) == 0.0);
  CHECK_THROWS_AS(A * SparseOperator::identity(3), Error);
}

TEST_CASE("translation permutation") {
  TorusLattice line(1, 4);
  const auto basis = FockBasis::full(line, 2);
  const auto perm = basis.translation_permutation(1);
  const std::size_t k = basis.index_of(OccupationState{{2, 1, 0, 0}});
  CHECK(basis.occ_of(perm[k]) == OccupationState{{0, 2, 1, 0}});
}

TEST_CASE("basis change round trip") {
  TorusLattice line(1, 4);
  const auto full = FockBasis::full(line, 2);
  const auto sector = FockBasis::fixed_number(line, 2, 4);
  const std::size_t mott = full.index_of(OccupationState{{1, 1, 1, 1}});
  const auto in_sector = change_basis(StateVector::basis_state(full.dim(), mott), full, sector);
  CHECK(in_sector.dim() == sector.dim());
  CHECK(in_sector[sector.index_of(OccupationState{{1, 1, 1, 1}})] == Complex(1.0, 0.0));
  const auto back = change_basis(in_sector, sector, full);
  CHECK(back[mott] == Complex(1.0, 0.0));
  CHECK(back.norm() == 1.0);
}
