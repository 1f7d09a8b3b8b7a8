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

#include <functional>
#include <memory>
#include <string>

#include "bhastlo/lattice.hpp"
#include "bhastlo/report.hpp"

namespace bhastlo {

/// A member (or candidate member) of the class C_eps of smooth steps:
/// f = 0 on (-inf, eps/2], f = 1 on [eps, inf), f' >= 0 supported in
/// (eps/2, eps) with smooth sqrt(f').
class CutoffFunction {
 public:
  using Eval = std::function<double(double)>;

  CutoffFunction(double epsilon, std::string name, Eval f, Eval df,
                 Eval sqrt_df);

  double epsilon() const noexcept { return epsilon_; }
  const std::string& name() const noexcept { return name_; }

  double value(double u) const { return f_(u); }
  double derivative(double u) const { return df_(u); }
  double sqrt_derivative(double u) const { return sqrt_df_(u); }
  double operator()(double u) const { return f_(u); }

 private:
  double epsilon_;
  std::string name_;
  Eval f_;
  Eval df_;
  Eval sqrt_df_;
};

/// f(u) = int_{-inf}^u g / int g with the bump
/// g = exp(-sharpness / (w (1 - w))), w = (u - eps/2) / (eps/2) in (0,1).
/// sharpness = 4 / eps^2 reproduces exp(-1/((u-eps/2)(eps-u))) exactly;
/// the default sharpness = 1 is the same bump in normalized coordinates.
CutoffFunction make_standard_cutoff(double epsilon, double sharpness = 1.0);

struct VelocityParams {
  double v;
  double kappa;
  double v_tilde;
  double epsilon;
  double R;
  double r;
  double s;
};

/// Derives v_tilde = (kappa+v)/2, eps = v - v_tilde and s = (R-r)/v.
/// Requires v > 2 kappa, R > r >= 0 and R - r > max(v, 1).
VelocityParams velocity_params(double v, double kappa, double R, double r);

/// chi_ts(x) = chi((R - v_tilde t - |x|) / s) for a base cutoff chi, plus
/// the companion cutoff chi~ used by the second-order ASTLO.
struct ScaledCutoff {
  CutoffFunction base;
  CutoffFunction tilde;
  VelocityParams params;

  ScaledCutoff(CutoffFunction base_, VelocityParams params_);
  ScaledCutoff(CutoffFunction base_, CutoffFunction tilde_,
               VelocityParams params_);

  double argument(double t, double norm_x) const {
    return (params.R - params.v_tilde * t - norm_x) / params.s;
  }
  double chi(double t, double norm_x) const { return base.value(argument(t, norm_x)); }
  double chi_prime(double t, double norm_x) const {
    return base.derivative(argument(t, norm_x));
  }
  double u(double t, double norm_x) const {
    return base.sqrt_derivative(argument(t, norm_x));
  }
  double tilde_prime(double t, double norm_x) const {
    return tilde.derivative(argument(t, norm_x));
  }
};

double eval_scaled(const ScaledCutoff& sc, double t, const Site& x,
                   const TorusLattice& lat);
double eval_scaled_prime(const ScaledCutoff& sc, double t, const Site& x,
                         const TorusLattice& lat);

/// Samples f, f' and sqrt(f') on a uniform grid over [0, 2 eps] and checks
/// every clause of the class definition plus the indicator sandwich
/// 1_{u >= eps} <= f(u) <= 1_{u >= eps/2}. Smoothness is proxied by
/// finite-difference derivatives of f and sqrt(f') up to order 4 that must
/// not grow under grid refinement.
CheckReport verify_class_membership(const CutoffFunction& f, int grid_n);

struct CombinedCutoff {
  CutoffFunction f3;
  double C_tilde;
  double worst_margin;  // min over grid of C_tilde f3 - (f1 + f2)
};

/// Returns f3 (the standard cutoff) and the smallest sampled C~ with
/// f1 + f2 <= C~ f3, using 0/0 = 0.
CombinedCutoff combine_cutoffs(const CutoffFunction& f1,
                               const CutoffFunction& f2, int grid_n = 10000);

}  // namespace bhastlo
