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

#include "bhastlo/hopping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bhastlo/error.hpp"

namespace bhastlo {

HoppingMatrix::HoppingMatrix(TorusLattice lat, std::vector<double> kernel,
                             double alpha)
    : HoppingMatrix(lat, std::move(kernel), alpha, -1.0) {}

HoppingMatrix::HoppingMatrix(TorusLattice lat, std::vector<double> kernel,
                             double alpha, double C_J)
    : lat_(std::move(lat)), kernel_(std::move(kernel)), alpha_(alpha) {
  const std::size_t n = lat_.site_count();
  if (kernel_.size() != n)
    fail(ErrorKind::Parameter, "hopping kernel must have one entry per site");
  if (kernel_[0] != 0.0)
    fail(ErrorKind::Parameter, "hopping kernel must vanish at zero displacement");
  for (std::size_t z = 0; z < n; ++z) {
    std::size_t mz = lat_.offset_index(z, 0);
    if (std::abs(kernel_[z] - kernel_[mz]) > 0.0)
      fail(ErrorKind::Parameter, "hopping kernel is not symmetric");
  }
  C_J_ = C_J < 0.0 ? decay_certificate() : C_J;
}

double HoppingMatrix::moment(int k) const {
  if (k < 1) fail(ErrorKind::Parameter, "moment order must be >= 1");
  double sum = 0.0;
  for (std::size_t y = 0; y < kernel_.size(); ++y)
    sum += std::abs(kernel_[y]) * std::pow(lat_.norm(y), k);
  return sum;
}

double HoppingMatrix::decay_certificate() const {
  double worst = 0.0;
  for (std::size_t y = 0; y < kernel_.size(); ++y) {
    if (kernel_[y] == 0.0) continue;
    worst = std::max(worst,
                     std::abs(kernel_[y]) * std::pow(1.0 + lat_.norm(y), alpha_));
  }
  return worst;
}

bool HoppingMatrix::is_zero() const {
  return std::all_of(kernel_.begin(), kernel_.end(),
                     [](double v) { return v == 0.0; });
}

HoppingMatrix build_power_law(const TorusLattice& lat, double C_J,
                              double alpha) {
  if (!(C_J > 0.0)) fail(ErrorKind::Parameter, "C_J must be positive");
  const int d = lat.dimension();
  std::vector<double> kernel(lat.site_count(), 0.0);
  for (std::size_t y = 1; y < kernel.size(); ++y)
    kernel[y] = C_J * std::pow(1.0 + lat.norm(y), -alpha);
  HoppingMatrix J(lat, std::move(kernel), alpha, C_J);
  if (alpha <= 3.0 * d + 1.0) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " <= 3d+1 = " << 3 * d + 1
        << ": outside the regime of the ballistic bound";
    J.warnings_.push_back(msg.str());
  }
  return J;
}

HoppingMatrix build_nearest_neighbor(const TorusLattice& lat,
                                     double amplitude) {
  std::vector<double> kernel(lat.site_count(), 0.0);
  for (std::size_t y = 1; y < kernel.size(); ++y)
    if (std::abs(lat.norm(y) - 1.0) < 1e-12) kernel[y] = amplitude;
  return HoppingMatrix(lat, std::move(kernel),
                       std::numeric_limits<double>::infinity(),
                       std::abs(amplitude));
}

HoppingMatrix build_zero_hopping(const TorusLattice& lat) {
  return HoppingMatrix(lat, std::vector<double>(lat.site_count(), 0.0),
                       std::numeric_limits<double>::infinity(), 0.0);
}

double power_law_cj_for_kappa(const TorusLattice& lat, double alpha,
                              double kappa_target) {
  if (!(kappa_target > 0.0))
    fail(ErrorKind::Parameter, "kappa target must be positive");
  return kappa_target / build_power_law(lat, 1.0, alpha).kappa();
}

double moment(const HoppingMatrix& J, int k) { return J.moment(k); }
double kappa(const HoppingMatrix& J) { return J.kappa(); }

int beta_of(double alpha, int d) {
  if (!(alpha > d + 1.0)) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " must exceed d+1 = " << d + 1;
    fail(ErrorKind::Regime, msg.str());
  }
  return static_cast<int>(std::floor(alpha - d - 1.0));
}

}  // namespace bhastlo
