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

#include "bhastlo/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bhastlo/error.hpp"

namespace bhastlo {

namespace {

int reduce(int c, int L) {
  int m = c % L;
  return m < 0 ? m + L : m;
}

// Minimal-image representative of a coordinate difference in (-L/2, L/2].
int minimal_image(int delta, int L) {
  int m = reduce(delta, L);
  if (2 * m > L) m -= L;
  return m;
}

}  // namespace

TorusLattice::TorusLattice(int d, int L) : d_(d), L_(L), count_(1) {
  if (d < 1) fail(ErrorKind::Parameter, "lattice dimension d must be >= 1");
  if (L < 2) fail(ErrorKind::Parameter, "lattice side L must be >= 2");
  for (int k = 0; k < d; ++k) {
    if (count_ > std::numeric_limits<std::size_t>::max() / L)
      fail(ErrorKind::Capacity, "lattice site count overflows");
    count_ *= static_cast<std::size_t>(L);
  }
  distance_from_origin_.resize(count_);
  for (std::size_t i = 0; i < count_; ++i) {
    Site s = site_at(i);
    double sq = 0.0;
    for (int c : s.coords) {
      double m = minimal_image(c, L_);
      sq += m * m;
    }
    distance_from_origin_[i] = std::sqrt(sq);
  }
}

Site TorusLattice::origin() const { return Site{std::vector<int>(d_, 0)}; }

Site TorusLattice::site(std::initializer_list<int> coords) const {
  Site s{std::vector<int>(coords)};
  require_valid(s);
  return s;
}

Site TorusLattice::site_at(std::size_t index) const {
  if (index >= count_)
    fail(ErrorKind::InvalidSite, "site index " + std::to_string(index) +
                                     " out of range");
  Site s{std::vector<int>(d_, 0)};
  for (int k = d_ - 1; k >= 0; --k) {
    s.coords[k] = static_cast<int>(index % L_);
    index /= L_;
  }
  return s;
}

std::size_t TorusLattice::index_of(const Site& s) const {
  require_valid(s);
  std::size_t idx = 0;
  for (int c : s.coords) idx = idx * L_ + static_cast<std::size_t>(c);
  return idx;
}

Site TorusLattice::wrap(std::span<const int> coords) const {
  if (static_cast<int>(coords.size()) != d_)
    fail(ErrorKind::InvalidSite, "coordinate count does not match dimension");
  Site s{std::vector<int>(d_)};
  for (int k = 0; k < d_; ++k) s.coords[k] = reduce(coords[k], L_);
  return s;
}

void TorusLattice::require_valid(const Site& s) const {
  if (static_cast<int>(s.coords.size()) != d_)
    fail(ErrorKind::InvalidSite, "site has " +
                                     std::to_string(s.coords.size()) +
                                     " coordinates, lattice has d=" +
                                     std::to_string(d_));
  for (int c : s.coords)
    if (c < 0 || c >= L_)
      fail(ErrorKind::InvalidSite, "site coordinate " + std::to_string(c) +
                                       " outside [0, " + std::to_string(L_) +
                                       ")");
}

std::vector<int> TorusLattice::displacement(const Site& a,
                                            const Site& b) const {
  require_valid(a);
  require_valid(b);
  std::vector<int> out(d_);
  for (int k = 0; k < d_; ++k)
    out[k] = minimal_image(b.coords[k] - a.coords[k], L_);
  return out;
}

double TorusLattice::distance(const Site& a, const Site& b) const {
  require_valid(a);
  require_valid(b);
  std::size_t idx = 0;
  for (int k = 0; k < d_; ++k)
    idx = idx * L_ + static_cast<std::size_t>(reduce(b.coords[k] - a.coords[k], L_));
  return distance_from_origin_[idx];
}

double TorusLattice::distance(std::size_t a, std::size_t b) const {
  return distance_from_origin_[offset_index(a, b)];
}

std::size_t TorusLattice::offset_index(std::size_t a, std::size_t b) const {
  if (a >= count_ || b >= count_)
    fail(ErrorKind::InvalidSite, "site index out of range");
  std::size_t idx = 0;
  std::size_t scale = 1;
  for (int k = 0; k < d_; ++k) {
    int ca = static_cast<int>(a % L_);
    int cb = static_cast<int>(b % L_);
    idx += scale * static_cast<std::size_t>(reduce(cb - ca, L_));
    scale *= L_;
    a /= L_;
    b /= L_;
  }
  return idx;
}

std::size_t TorusLattice::sum_index(std::size_t a, std::size_t b) const {
  if (a >= count_ || b >= count_)
    fail(ErrorKind::InvalidSite, "site index out of range");
  std::size_t idx = 0;
  std::size_t scale = 1;
  for (int k = 0; k < d_; ++k) {
    int ca = static_cast<int>(a % L_);
    int cb = static_cast<int>(b % L_);
    idx += scale * static_cast<std::size_t>((ca + cb) % L_);
    scale *= L_;
    a /= L_;
    b /= L_;
  }
  return idx;
}

Site TorusLattice::translate(const Site& x, const Site& z) const {
  require_valid(x);
  require_valid(z);
  Site out{std::vector<int>(d_)};
  for (int k = 0; k < d_; ++k) out.coords[k] = (x.coords[k] + z.coords[k]) % L_;
  return out;
}

Site TorusLattice::negate(const Site& z) const {
  require_valid(z);
  Site out{std::vector<int>(d_)};
  for (int k = 0; k < d_; ++k) out.coords[k] = reduce(-z.coords[k], L_);
  return out;
}

std::vector<Site> TorusLattice::ball(const Site& center, double radius) const {
  require_valid(center);
  if (radius < 0.0) fail(ErrorKind::Parameter, "ball radius must be >= 0");
  struct Entry {
    std::vector<int> disp;
    Site site;
  };
  std::vector<Entry> found;
  for (std::size_t i = 0; i < count_; ++i) {
    if (distance_from_origin_[i] > radius) continue;
    Site offset = site_at(i);
    Site y = translate(center, offset);
    std::vector<int> disp(d_);
    for (int k = 0; k < d_; ++k) disp[k] = minimal_image(offset.coords[k], L_);
    found.push_back({std::move(disp), std::move(y)});
  }
  std::sort(found.begin(), found.end(),
            [](const Entry& a, const Entry& b) { return a.disp < b.disp; });
  std::vector<Site> out;
  out.reserve(found.size());
  for (auto& e : found) out.push_back(std::move(e.site));
  return out;
}

std::vector<std::size_t> TorusLattice::ball_indices(const Site& center,
                                                    double radius) const {
  std::vector<std::size_t> out;
  for (const Site& s : ball(center, radius)) out.push_back(index_of(s));
  return out;
}

double TorusLattice::diameter() const {
  return *std::max_element(distance_from_origin_.begin(),
                           distance_from_origin_.end());
}

double torus_distance(const Site& a, const Site& b, const TorusLattice& lat) {
  return lat.distance(a, b);
}

std::vector<Site> ball(const Site& center, double radius,
                       const TorusLattice& lat) {
  return lat.ball(center, radius);
}

Site translate(const Site& x, const Site& z, const TorusLattice& lat) {
  return lat.translate(x, z);
}

}  // namespace bhastlo
