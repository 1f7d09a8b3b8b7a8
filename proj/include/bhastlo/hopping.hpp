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

#include <string>
#include <vector>

#include "bhastlo/lattice.hpp"

namespace bhastlo {

/// Translation-invariant, real, symmetric hopping matrix stored by
/// displacement: J(x, y) = kernel[offset_index(x, y)].
class HoppingMatrix {
 public:
  /// Validates symmetry and a vanishing diagonal. `C_J` is taken to be the
  /// decay certificate sup |J|(1+|x-y|)^alpha when not supplied.
  HoppingMatrix(TorusLattice lat, std::vector<double> kernel, double alpha);
  HoppingMatrix(TorusLattice lat, std::vector<double> kernel, double alpha,
                double C_J);

  const TorusLattice& lattice() const noexcept { return lat_; }
  const std::vector<double>& kernel() const noexcept { return kernel_; }
  double C_J() const noexcept { return C_J_; }
  double alpha() const noexcept { return alpha_; }
  const std::vector<std::string>& warnings() const noexcept {
    return warnings_;
  }

  double operator()(std::size_t x, std::size_t y) const {
    return kernel_[lat_.offset_index(x, y)];
  }

  /// kappa^(k) = sum_y |J_{0,y}| |y|^k.
  double moment(int k) const;
  double kappa() const { return moment(1); }

  /// max over pairs of |J_{x,y}| (1+|x-y|)^alpha.
  double decay_certificate() const;

  bool is_zero() const;

 private:
  TorusLattice lat_;
  std::vector<double> kernel_;
  double alpha_;
  double C_J_;
  std::vector<std::string> warnings_;

  friend HoppingMatrix build_power_law(const TorusLattice&, double, double);
};

/// J_{x,y} = C_J (1+|x-y|)^-alpha off the diagonal, saturating the decay
/// bound. Below alpha = 3d+1 a warning is recorded, not raised.
HoppingMatrix build_power_law(const TorusLattice& lat, double C_J,
                              double alpha);

/// J_{x,y} = amplitude when |x-y| == 1, else 0.
HoppingMatrix build_nearest_neighbor(const TorusLattice& lat, double amplitude);

HoppingMatrix build_zero_hopping(const TorusLattice& lat);

/// C_J for which the power-law kernel has first moment `kappa_target`.
double power_law_cj_for_kappa(const TorusLattice& lat, double alpha,
                              double kappa_target);

double moment(const HoppingMatrix& J, int k);
double kappa(const HoppingMatrix& J);

/// floor(alpha - d - 1); requires alpha > d + 1.
int beta_of(double alpha, int d);

}  // namespace bhastlo
