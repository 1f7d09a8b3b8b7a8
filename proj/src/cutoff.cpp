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

#include "bhastlo/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bhastlo/error.hpp"

namespace bhastlo {

CutoffFunction::CutoffFunction(double epsilon, std::string name, Eval f,
                               Eval df, Eval sqrt_df)
    : epsilon_(epsilon),
      name_(std::move(name)),
      f_(std::move(f)),
      df_(std::move(df)),
      sqrt_df_(std::move(sqrt_df)) {
  if (!(epsilon > 0.0)) fail(ErrorKind::Parameter, "cutoff epsilon must be positive");
}

namespace {

struct Bump {
  double epsilon;
  double sharpness;
  double half_mass;  // int_0^{1/2} h(w) dw

  // Bump rescaled by exp(4 k) so its peak is 1 and nothing underflows.
  double h(double w) const {
    if (w <= 0.0 || w >= 1.0) return 0.0;
    return std::exp(-sharpness * (1.0 / (w * (1.0 - w)) - 4.0));
  }

  double integral(double a, double b) const {
    if (b <= a) return 0.0;
    auto fn = [this](double w) { return h(w); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        fn, a, b, 8, 1e-13);
  }
};

}  // namespace

CutoffFunction make_standard_cutoff(double epsilon, double sharpness) {
  if (!(epsilon > 0.0)) fail(ErrorKind::Parameter, "cutoff epsilon must be positive");
  if (!(sharpness > 0.0)) fail(ErrorKind::Parameter, "bump sharpness must be positive");
  auto bump = std::make_shared<Bump>(Bump{epsilon, sharpness, 0.0});
  bump->half_mass = bump->integral(0.0, 0.5);
  if (!(bump->half_mass > 0.0))
    fail(ErrorKind::Parameter, "bump normalization underflows");
  const double half = epsilon / 2.0;
  const double mass = 2.0 * bump->half_mass;

  auto f = [bump, half, mass](double u) {
    const double w = (u - half) / half;
    if (w <= 0.0) return 0.0;
    if (w >= 1.0) return 1.0;
    if (w <= 0.5) return bump->integral(0.0, w) / mass;
    return 1.0 - bump->integral(w, 1.0) / mass;
  };
  auto df = [bump, half, mass](double u) {
    const double w = (u - half) / half;
    return bump->h(w) / (mass * half);
  };
  auto sqrt_df = [bump, half, mass](double u) {
    const double w = (u - half) / half;
    if (w <= 0.0 || w >= 1.0) return 0.0;
    return std::exp(-0.5 * bump->sharpness * (1.0 / (w * (1.0 - w)) - 4.0)) /
           std::sqrt(mass * half);
  };
  std::ostringstream name;
  name << "standard_bump(eps=" << epsilon << ",sharpness=" << sharpness << ")";
  return CutoffFunction(epsilon, name.str(), f, df, sqrt_df);
}

VelocityParams velocity_params(double v, double kappa, double R, double r) {
  if (!(kappa >= 0.0)) fail(ErrorKind::Regime, "kappa must be >= 0");
  if (!(v > 2.0 * kappa)) {
    std::ostringstream msg;
    msg << "v > 2κ violated: v = " << v << ", 2κ = " << 2.0 * kappa;
    fail(ErrorKind::Regime, msg.str());
  }
  if (!(r >= 0.0)) fail(ErrorKind::Regime, "r >= 0 violated");
  if (!(R > r)) fail(ErrorKind::Regime, "R > r violated");
  if (!(R - r > std::max(v, 1.0))) {
    std::ostringstream msg;
    msg << "R - r > max{v, 1} violated: R - r = " << R - r
        << ", max{v, 1} = " << std::max(v, 1.0);
    fail(ErrorKind::Regime, msg.str());
  }
  VelocityParams p{};
  p.v = v;
  p.kappa = kappa;
  p.v_tilde = 0.5 * (kappa + v);
  p.epsilon = v - p.v_tilde;
  p.R = R;
  p.r = r;
  p.s = (R - r) / v;
  return p;
}

ScaledCutoff::ScaledCutoff(CutoffFunction base_, VelocityParams params_)
    : base(base_), tilde(make_standard_cutoff(base_.epsilon())), params(params_) {}

ScaledCutoff::ScaledCutoff(CutoffFunction base_, CutoffFunction tilde_,
                           VelocityParams params_)
    : base(std::move(base_)), tilde(std::move(tilde_)), params(params_) {
  if (std::abs(base.epsilon() - params.epsilon) > 1e-12 * std::max(1.0, params.epsilon) ||
      std::abs(tilde.epsilon() - params.epsilon) > 1e-12 * std::max(1.0, params.epsilon))
    fail(ErrorKind::Parameter, "cutoff epsilon does not match v - v_tilde");
}

double eval_scaled(const ScaledCutoff& sc, double t, const Site& x,
                   const TorusLattice& lat) {
  return sc.chi(t, lat.norm(x));
}

double eval_scaled_prime(const ScaledCutoff& sc, double t, const Site& x,
                         const TorusLattice& lat) {
  return sc.chi_prime(t, lat.norm(x));
}

namespace {

// max_i |Delta^k g_i| / h^k over a sampled array with spacing h.
double max_finite_difference(const std::vector<double>& g, double h, int k) {
  std::vector<double> diff = g;
  for (int order = 0; order < k; ++order) {
    for (std::size_t i = 0; i + 1 < diff.size(); ++i) diff[i] = diff[i + 1] - diff[i];
    diff.pop_back();
  }
  double m = 0.0;
  for (double v : diff) m = std::max(m, std::abs(v));
  return m / std::pow(h, k);
}

std::vector<double> every_other(const std::vector<double>& g) {
  std::vector<double> out;
  for (std::size_t i = 0; i < g.size(); i += 2) out.push_back(g[i]);
  return out;
}

constexpr double kRefinementGrowthLimit = 1.5;

}  // namespace

CheckReport verify_class_membership(const CutoffFunction& f, int grid_n) {
  CheckReport report("cutoff_class_membership", Tier::Hard, 1e-12);
  report.set_parameter("cutoff", f.name());
  report.set_parameter("grid_n", static_cast<double>(grid_n));
  if (grid_n < 100) {
    report.fail("grid_n must be >= 100");
    return report;
  }
  const double eps = f.epsilon();
  const double h = 2.0 * eps / (grid_n - 1);
  std::vector<double> u(grid_n), fv(grid_n), dv(grid_n), sv(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    u[i] = i * h;
    fv[i] = f.value(u[i]);
    dv[i] = f.derivative(u[i]);
    sv[i] = f.sqrt_derivative(u[i]);
  }

  double min_f = 0.0, max_f_minus_1 = 0.0, left = 0.0, right = 0.0;
  double min_df = 0.0, off_support = 0.0, monotone = 0.0;
  double sandwich_lo = 0.0, sandwich_hi = 0.0, sqrt_consistency = 0.0;
  double max_df = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    min_f = std::min(min_f, fv[i]);
    max_f_minus_1 = std::max(max_f_minus_1, fv[i] - 1.0);
    if (u[i] <= eps / 2.0) left = std::max(left, std::abs(fv[i]));
    if (u[i] >= eps) right = std::max(right, std::abs(fv[i] - 1.0));
    min_df = std::min(min_df, dv[i]);
    if (u[i] <= eps / 2.0 || u[i] >= eps)
      off_support = std::max(off_support, std::abs(dv[i]));
    if (i + 1 < grid_n) monotone = std::min(monotone, f.value(u[i + 1]) - fv[i]);
    const double lo = u[i] >= eps ? 1.0 : 0.0;
    const double hi = u[i] >= eps / 2.0 ? 1.0 : 0.0;
    sandwich_lo = std::max(sandwich_lo, lo - fv[i]);
    sandwich_hi = std::max(sandwich_hi, fv[i] - hi);
    sqrt_consistency = std::max(sqrt_consistency, std::abs(sv[i] * sv[i] - dv[i]));
    max_df = std::max(max_df, dv[i]);
  }
  report.add_row("f >= 0", 0.0, -min_f, 0.0);
  report.add_row("f <= 1", 0.0, max_f_minus_1, 0.0);
  report.add_row("f == 0 on (-inf, eps/2]", 0.0, left, 0.0);
  report.add_row("f == 1 on [eps, inf)", 0.0, right, 0.0);
  report.add_row("f' >= 0", 0.0, -min_df, 0.0);
  report.add_row("supp f' in (eps/2, eps)", 0.0, off_support, 0.0);
  report.add_row("f nondecreasing", 0.0, -monotone, 0.0);
  report.add_row("1_{u>=eps} <= f", 0.0, sandwich_lo, 0.0);
  report.add_row("f <= 1_{u>=eps/2}", 0.0, sandwich_hi, 0.0);
  report.add_row("sqrt(f')^2 == f'", 0.0, sqrt_consistency,
                 1e-12 * std::max(1.0, max_df));

  // f' must be the derivative of f: centered differences, O(h^2) error.
  double fd_error = 0.0;
  for (int i = 1; i + 1 < grid_n; ++i)
    fd_error = std::max(fd_error, std::abs((fv[i + 1] - fv[i - 1]) / (2.0 * h) - dv[i]));
  report.add_row("f' matches finite differences of f", 0.0, fd_error,
                 1e-3 * std::max(1.0, max_df));

  // Smoothness proxy: derivative bounds must not blow up as h halves.
  for (const auto& [label, g] :
       {std::pair<const char*, const std::vector<double>*>{"f", &fv},
        std::pair<const char*, const std::vector<double>*>{"sqrt(f')", &sv}}) {
    const auto coarse = every_other(*g);
    for (int k = 1; k <= 4; ++k) {
      const double fine_bound = max_finite_difference(*g, h, k);
      const double coarse_bound = max_finite_difference(coarse, 2.0 * h, k);
      std::ostringstream name;
      name << "D^" << k << ' ' << label << " stable under refinement";
      report.set_diagnostic(std::string("max |D^") + std::to_string(k) + " " + label + "|",
                            fine_bound);
      // fine <= growth_limit * coarse, expressed as lhs <= rhs.
      report.add_row(name.str(), 0.0, fine_bound,
                     kRefinementGrowthLimit * coarse_bound);
    }
  }
  return report;
}

CombinedCutoff combine_cutoffs(const CutoffFunction& f1,
                               const CutoffFunction& f2, int grid_n) {
  if (std::abs(f1.epsilon() - f2.epsilon()) > 1e-12 * std::max(1.0, f1.epsilon()))
    fail(ErrorKind::Parameter, "combine_cutoffs requires equal epsilon");
  if (grid_n < 2) fail(ErrorKind::Parameter, "grid_n must be >= 2");
  CutoffFunction f3 = make_standard_cutoff(f1.epsilon());
  const double eps = f1.epsilon();
  const double h = 2.0 * eps / (grid_n - 1);
  double C = 0.0;
  std::vector<double> sum(grid_n), base(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    const double u = i * h;
    sum[i] = f1.value(u) + f2.value(u);
    base[i] = f3.value(u);
    if (sum[i] == 0.0) continue;
    if (base[i] == 0.0) {
      C = std::numeric_limits<double>::infinity();
      continue;
    }
    C = std::max(C, sum[i] / base[i]);
  }
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_n; ++i)
    worst = std::min(worst, (sum[i] == 0.0 ? 0.0 : C * base[i]) - sum[i]);
  return {f3, C, worst};
}

}  // namespace bhastlo
