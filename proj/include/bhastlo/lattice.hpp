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
#include <cstdint>
#include <span>
#include <vector>

namespace bhastlo {

/// A lattice point: d coordinates, each reduced modulo L.
struct Site {
  std::vector<int> coords;

  friend bool operator==(const Site&, const Site&) = default;
};

/// Discrete torus Lambda_L in Z^d with the minimal-image Euclidean metric.
///
/// Sites are addressed by a mixed-radix linear index in which the first
/// coordinate is the most significant digit, so increasing index order is
/// lexicographic order of the reduced coordinates.
class TorusLattice {
 public:
  TorusLattice(int d, int L);

  int dimension() const noexcept { return d_; }
  int side() const noexcept { return L_; }
  std::size_t site_count() const noexcept { return count_; }

  Site origin() const;
  Site site(std::initializer_list<int> coords) const;
  Site site_at(std::size_t index) const;
  std::size_t index_of(const Site& s) const;

  /// Reduces arbitrary integer coordinates modulo L.
  Site wrap(std::span<const int> coords) const;

  /// Signed minimal-image displacement b - a, each component in
  /// (-L/2, L/2].
  std::vector<int> displacement(const Site& a, const Site& b) const;

  double distance(const Site& a, const Site& b) const;
  double distance(std::size_t a, std::size_t b) const;
  /// Linear index of the reduced displacement b - a.
  std::size_t offset_index(std::size_t a, std::size_t b) const;
  /// Linear index of a + b (coordinate-wise sum mod L).
  std::size_t sum_index(std::size_t a, std::size_t b) const;
  double norm(std::size_t x) const { return distance_from_origin_.at(x); }
  double norm(const Site& x) const { return distance(origin(), x); }

  Site translate(const Site& x, const Site& z) const;
  Site negate(const Site& z) const;

  /// Sites within `radius` of `center`, ordered lexicographically by their
  /// signed displacement from the center.
  std::vector<Site> ball(const Site& center, double radius) const;
  std::vector<std::size_t> ball_indices(const Site& center,
                                        double radius) const;

  /// Largest minimal-image distance between two sites.
  double diameter() const;

  void require_valid(const Site& s) const;

  friend bool operator==(const TorusLattice& a, const TorusLattice& b) {
    return a.d_ == b.d_ && a.L_ == b.L_;
  }

 private:
  int d_;
  int L_;
  std::size_t count_;
  std::vector<double> distance_from_origin_;  // by linear index
};

double torus_distance(const Site& a, const Site& b, const TorusLattice& lat);
std::vector<Site> ball(const Site& center, double radius,
                       const TorusLattice& lat);
Site translate(const Site& x, const Site& z, const TorusLattice& lat);

}  // namespace bhastlo
