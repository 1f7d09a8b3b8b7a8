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

#include "bhastlo/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "bhastlo/error.hpp"

namespace bhastlo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTimeSlack = 1e-12;

std::string label_of(const std::string& prefix, double a, double b) {
  std::ostringstream os;
  os << prefix << "(" << format_short(a) << "," << format_short(b) << ")";
  return os.str();
}

double ball_sum(const std::vector<double>& row0,
                const std::vector<std::size_t>& ball) {
  double s = 0.0;
  for (auto x : ball) s += row0[x];
  return s;
}

double ball_square(const std::vector<double>& pairs, std::size_t n,
                   const std::vector<std::size_t>& ball) {
  double s = 0.0;
  for (auto x : ball)
    for (auto y : ball) s += pairs[x * n + y];
  return s;
}

void attach_diagnostics(CheckReport& rep, const TrajectoryStats& stats) {
  rep.set_diagnostic("max_leakage", stats.max_leakage);
  rep.set_diagnostic("max_norm_drift", stats.max_norm_drift);
  rep.set_diagnostic("max_energy_drift", stats.max_energy_drift);
}

bool gate(CheckReport& rep, const TrajectoryStats& stats) {
  attach_diagnostics(rep, stats);
  if (stats.reliable) return true;
  std::ostringstream os;
  os << "trajectory unreliable: leakage " << format_short(stats.max_leakage)
     << " exceeds " << format_short(stats.leakage_threshold);
  rep.skip(os.str());
  return false;
}

// Largest member over grid points t <= t_end; every_other keeps even steps.
double sup_until(const std::vector<double>& t, const std::vector<double>& f,
                 double t_end, bool every_other = false) {
  double best = -kInf;
  for (std::size_t k = 0; k < t.size(); k += every_other ? 2 : 1) {
    if (t[k] > t_end + kTimeSlack) break;
    best = std::max(best, f[k]);
  }
  return best;
}

double relative_change(double fine, double coarse) {
  if (fine == coarse) return 0.0;
  return std::abs(fine - coarse) / std::max(std::abs(fine), 1e-300);
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit fit;
  const double n = static_cast<double>(x.size());
  if (x.size() < 2) return fit;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - fit.intercept - fit.slope * x[i];
    sse += e * e;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  if (x.size() > 2) fit.slope_stderr = std::sqrt(sse / (n - 2.0) / sxx);
  return fit;
}

void fold_stability(CheckReport& rep, const CheckReport& stab,
                    const std::string& reason) {
  if (stab.skipped()) {
    rep.notes.push_back("stability not assessed: fewer than two rungs");
    return;
  }
  for (const auto& row : stab.rows) rep.add_row(row.label, row.t, row.lhs, row.rhs);
  if (stab.verdict == Verdict::Fail) rep.fail(reason);
  rep.set_constant("variation_ratio", stab.constant("variation_ratio"));
  rep.set_constant("relative_trend", stab.constant("relative_trend"));
}

}  // namespace

bool wrap_guard_ok(const TorusLattice& lat, double v, double t_max) {
  return v * t_max < 0.5 * lat.side() - 1.0;
}

TimeSample measure_state(const SparseOperator& H, const HoppingMatrix& J,
                         const FockBasis& basis, const StateVector& psi,
                         double t, const StatsOptions& options) {
  TimeSample s;
  s.t = t;
  const StateVector phi = H.apply(psi);
  s.pairs = pair_correlations(psi, basis);
  s.currents = correlation_currents(psi, phi, basis);
  if (options.commutator_terms) {
    auto dens = commutator_densities(J, psi, basis);
    s.term_I = std::move(dens.term_I);
    s.term_II = std::move(dens.term_II);
  }
  if (options.cauchy_schwarz) s.cauchy_schwarz = cauchy_schwarz_residual(psi, basis, s.pairs);
  s.norm_drift = psi.norm() - 1.0;
  s.energy = inner(psi, phi).real();
  s.leakage = leakage(psi, basis);
  return s;
}

namespace {

TrajectoryStats finish_stats(const EvolutionTrace& trace, const FockBasis& basis,
                             std::vector<TimeSample> samples,
                             double leakage_threshold) {
  TrajectoryStats stats;
  stats.lattice = basis.lattice();
  stats.samples = std::move(samples);
  stats.max_leakage = trace.max_leakage;
  stats.max_norm_drift = trace.max_norm_drift;
  stats.max_energy_drift = trace.max_energy_drift;
  stats.max_number_drift = trace.max_number_drift;
  stats.leakage_threshold = leakage_threshold;
  stats.reliable = stats.max_leakage <= leakage_threshold;
  return stats;
}

}  // namespace

TrajectoryStats simulate(const SparseOperator& H, const HoppingMatrix& J,
                         const FockBasis& basis, const StateVector& psi0,
                         const std::vector<double>& times,
                         const PropagatorConfig& cfg,
                         const StatsOptions& options, EvolutionTrace* trace,
                         bool store_states) {
  std::vector<TimeSample> samples;
  samples.reserve(times.size());
  EvolveOptions eo;
  eo.basis = &basis;
  eo.store_states = store_states;
  eo.observer = [&](std::size_t, double t, const StateVector& psi) {
    samples.push_back(measure_state(H, J, basis, psi, t, options));
  };
  EvolutionTrace local = evolve(H, psi0, times, cfg, eo);
  TrajectoryStats stats = finish_stats(local, basis, std::move(samples), cfg.leakage_threshold);
  if (trace) *trace = std::move(local);
  return stats;
}

TrajectoryStats analyze_trace(const EvolutionTrace& trace,
                              const SparseOperator& H, const HoppingMatrix& J,
                              const FockBasis& basis, double leakage_threshold,
                              const StatsOptions& options) {
  if (trace.states.size() != trace.times.size())
    fail(ErrorKind::Parameter, "trace does not carry its states");
  std::vector<TimeSample> samples;
  samples.reserve(trace.states.size());
  for (std::size_t k = 0; k < trace.states.size(); ++k)
    samples.push_back(measure_state(H, J, basis, trace.states[k], trace.times[k], options));
  return finish_stats(trace, basis, std::move(samples), leakage_threshold);
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& t,
                                         const std::vector<double>& f) {
  if (t.size() != f.size()) fail(ErrorKind::DimensionMismatch, "trapezoid operands differ in size");
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t k = 1; k < t.size(); ++k)
    out[k] = out[k - 1] + 0.5 * (t[k] - t[k - 1]) * (f[k] + f[k - 1]);
  return out;
}

AstloSeries astlo_series(const TrajectoryStats& stats, const ScaledCutoff& sc) {
  if (stats.samples.empty()) fail(ErrorKind::Parameter, "empty trajectory");
  const auto& lat = stats.lattice;
  const std::size_t n = lat.site_count();
  const auto& p = sc.params;
  const auto inner = lat.ball_indices(lat.origin(), p.r);
  const auto outer = lat.ball_indices(lat.origin(), p.R);
  AstloSeries out;
  for (const auto& smp : stats.samples) {
    if (smp.t > p.s + kTimeSlack) break;
    const auto chi = astlo_weights(sc, AstloVariant::Chi, smp.t, lat);
    const auto chip = astlo_weights(sc, AstloVariant::ChiPrime, smp.t, lat);
    const auto tilp = astlo_weights(sc, AstloVariant::TildePrime, smp.t, lat);
    double a = 0.0, ap = 0.0, at = 0.0, comm = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      a += chi[x] * smp.pairs[x];
      ap += chip[x] * smp.pairs[x];
      at += tilp[x] * smp.pairs[x];
      comm += chi[x] * smp.currents[x];
    }
    out.t.push_back(smp.t);
    out.A.push_back(a);
    out.A_prime.push_back(ap);
    out.A_tilde.push_back(at);
    out.direct_commutator.push_back(comm);
    out.derivative.push_back(-(p.v_tilde / p.s) * ap + comm);
    out.inner_ball.push_back(ball_sum(smp.pairs, inner));
  }
  const auto& first = stats.samples.front();
  out.outer_ball_0 = ball_sum(first.pairs, outer);
  out.outer_square_0 = ball_square(first.pairs, n, outer);
  return out;
}

CheckReport check_geometric_property(const TrajectoryStats& stats,
                                     const ScaledCutoff& sc, double lambda) {
  CheckReport rep("geometric_property", Tier::Hard, kHardTolerance);
  const auto& p = sc.params;
  rep.set_parameter("R", p.R);
  rep.set_parameter("r", p.r);
  rep.set_parameter("s", p.s);
  rep.set_parameter("lambda", lambda);
  if (!gate(rep, stats)) return rep;
  const auto series = astlo_series(stats, sc);
  const double bound0 = lambda * lambda * std::pow(p.R, stats.lattice.dimension());
  rep.set_constant("lambda2_Rd", bound0);
  if (series.t.back() < p.s - kTimeSlack)
    rep.notes.push_back("trajectory ends at t = " + format_short(series.t.back()) +
                        " before s = " + format_short(p.s));

  for (std::size_t k = 0; k < series.t.size(); ++k)
    rep.add_row("inner_ball_le_astlo", series.t[k], series.inner_ball[k], series.A[k]);
  rep.add_row("initial_astlo_le_density", 0.0, series.A.front(), bound0);

  const auto integral = cumulative_trapezoid(series.t, series.derivative);
  for (std::size_t k = 0; k < series.t.size(); ++k)
    rep.add_row("ftc_bound", series.t[k], series.inner_ball[k], bound0 + integral[k]);

  // Richardson: compare against the trapezoid rule on every other point.
  std::vector<double> t2, f2;
  for (std::size_t k = 0; k < series.t.size(); k += 2) {
    t2.push_back(series.t[k]);
    f2.push_back(series.derivative[k]);
  }
  const auto coarse = cumulative_trapezoid(t2, f2);
  double richardson = 0.0;
  for (std::size_t j = 0; j < t2.size(); ++j)
    richardson = std::max(richardson, std::abs(integral[2 * j] - coarse[j]) / 3.0);
  rep.set_diagnostic("trapezoid_richardson_error", richardson);
  // The integrand is exact, so the FTC identity holds up to quadrature error.
  double ftc_residual = 0.0;
  for (std::size_t k = 0; k < series.t.size(); ++k)
    ftc_residual = std::max(ftc_residual,
                            std::abs(series.A[k] - series.A.front() - integral[k]));
  rep.set_diagnostic("ftc_identity_residual", ftc_residual);
  return rep;
}

CheckReport check_commutator_decomposition(const TrajectoryStats& stats,
                                           const ScaledCutoff& sc) {
  CheckReport rep("commutator_decomposition", Tier::Hard, kHardTolerance);
  rep.set_parameter("R", sc.params.R);
  rep.set_parameter("r", sc.params.r);
  attach_diagnostics(rep, stats);
  const auto& lat = stats.lattice;
  const std::size_t n = lat.site_count();
  double literal_sign = 0.0;
  for (const auto& smp : stats.samples) {
    if (smp.t > sc.params.s + kTimeSlack) break;
    if (smp.term_I.size() != n || smp.term_II.size() != n)
      fail(ErrorKind::Parameter, "trajectory was measured without commutator terms");
    const auto chi = astlo_weights(sc, AstloVariant::Chi, smp.t, lat);
    double direct = 0.0;
    Complex sum{0.0, 0.0};
    for (std::size_t x = 0; x < n; ++x) {
      direct += chi[x] * smp.currents[x];
      sum += chi[x] * (smp.term_I[x] + smp.term_II[x]);
    }
    const Complex decomposed = Complex(0.0, 1.0) * sum;
    rep.add_row("residual", smp.t, std::abs(Complex(direct, 0.0) - decomposed), 0.0);
    literal_sign = std::max(literal_sign, std::abs(Complex(direct, 0.0) + decomposed));
  }
  rep.set_diagnostic("opposite_sign_residual", literal_sign);
  return rep;
}

CheckReport check_differential_inequality_structure(const TrajectoryStats& stats,
                                                    const ScaledCutoff& sc,
                                                    int beta) {
  CheckReport rep("differential_inequality", Tier::Fitted, kHardTolerance);
  const auto& p = sc.params;
  const int d = stats.lattice.dimension();
  rep.set_parameter("R", p.R);
  rep.set_parameter("r", p.r);
  rep.set_parameter("s", p.s);
  rep.set_parameter("beta", static_cast<double>(beta));
  const double lead = (2.0 * p.kappa - p.v_tilde) / p.s;
  rep.set_diagnostic("leading_coefficient", lead);
  rep.set_diagnostic("leading_coefficient_sign", lead < 0.0 ? -1.0 : (lead > 0.0 ? 1.0 : 0.0));
  if (!gate(rep, stats)) return rep;
  const auto series = astlo_series(stats, sc);
  const double Rd = std::pow(p.R, d);
  std::vector<double> a(series.t.size()), b(series.t.size());
  double C = 0.0;
  for (std::size_t k = 0; k < series.t.size(); ++k) {
    if (series.A_prime[k] < -kHardTolerance)
      fail(ErrorKind::Internal, "negative <A'> at t = " + format_short(series.t[k]));
    a[k] = lead * series.A_prime[k];
    b[k] = (beta >= 2 ? series.A_tilde[k] / (p.s * p.s) : 0.0) +
           Rd * stats.samples[k].n0_squared() / std::pow(p.s, beta + 1);
    const double excess = series.derivative[k] - a[k];
    if (excess <= 0.0) continue;
    C = b[k] > 0.0 ? std::max(C, excess / b[k]) : kInf;
  }
  rep.set_constant("C", C);
  if (!std::isfinite(C)) {
    rep.fail("no finite constant fits the remainder");
    return rep;
  }
  for (std::size_t k = 0; k < series.t.size(); ++k)
    rep.add_row("heisenberg_derivative", series.t[k], series.derivative[k], a[k] + C * b[k]);
  return rep;
}

CheckReport check_cauchy_schwarz(const TrajectoryStats& stats) {
  CheckReport rep("cauchy_schwarz", Tier::Hard, kHardTolerance);
  attach_diagnostics(rep, stats);
  for (const auto& smp : stats.samples) {
    if (std::isnan(smp.cauchy_schwarz))
      fail(ErrorKind::Parameter, "trajectory was measured without Cauchy-Schwarz residuals");
    rep.add_row("hop_correlation", smp.t, smp.cauchy_schwarz, 0.0);
  }
  return rep;
}

CheckReport fitted_stability(const std::string& name,
                             const std::vector<double>& gaps,
                             const std::vector<double>& constants) {
  CheckReport rep(name, Tier::Fitted, 0.0);
  if (gaps.size() != constants.size())
    fail(ErrorKind::DimensionMismatch, "one constant per ladder rung required");
  for (std::size_t i = 0; i < gaps.size(); ++i)
    rep.set_constant("C@" + format_short(gaps[i]),
                     constants[i]);
  if (constants.size() < 2) {
    rep.skip("fewer than two ladder rungs");
    return rep;
  }
  const double hi = *std::max_element(constants.begin(), constants.end());
  const double lo = *std::min_element(constants.begin(), constants.end());
  double ratio = 1.0;
  if (!std::isfinite(hi) || std::isnan(hi) || std::isnan(lo)) ratio = kInf;
  else if (hi > 0.0) ratio = lo > 0.0 ? hi / lo : kInf;
  rep.set_constant("variation_ratio", ratio);
  rep.add_row("variation_ratio", 0.0, ratio, kStabilityFactor);

  double trend = 0.0;
  if (std::isfinite(ratio) && hi > 0.0) {
    const auto fit = fit_line(gaps, constants);
    double mean = 0.0;
    for (double c : constants) mean += c;
    mean /= static_cast<double>(constants.size());
    const auto [gmin, gmax] = std::minmax_element(gaps.begin(), gaps.end());
    trend = fit.slope * (*gmax - *gmin) / mean;
  } else if (!std::isfinite(ratio)) {
    trend = kInf;
  }
  rep.set_constant("relative_trend", trend);
  rep.add_row("relative_trend", 0.0, trend, kTrendTolerance);
  return rep;
}

CheckReport check_theorem_bound(const TrajectoryStats& stats,
                                const TheoremCheckConfig& cfg) {
  CheckReport rep("theorem_bound", Tier::Fitted, 0.0);
  rep.set_parameter("v", cfg.v);
  rep.set_parameter("lambda", cfg.lambda);
  rep.set_parameter("beta", static_cast<double>(cfg.beta));
  rep.notes.push_back("C is fitted; boundedness across R - r is the verdict");
  rep.notes.push_back("sup over the closed grid interval v t <= R - r");
  if (!gate(rep, stats)) return rep;
  const auto& lat = stats.lattice;
  const int d = lat.dimension();
  const double pow_gap = static_cast<double>(cfg.beta - 2 * d);
  std::vector<double> gaps, constants;
  double worst_grid_change = 0.0;
  for (const auto& pr : cfg.pairs) {
    const std::string tag = label_of("pair", pr.R, pr.r);
    try {
      velocity_params(cfg.v, cfg.kappa, pr.R, pr.r);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Regime) throw;
      rep.notes.push_back(tag + " skipped: " + e.what());
      continue;
    }
    const double gap = pr.R - pr.r;
    const double t_end = gap / cfg.v;
    if (!wrap_guard_ok(lat, cfg.v, t_end)) {
      rep.notes.push_back(tag + " skipped: wrap-around guard v t < L/2 - 1 violated");
      continue;
    }
    if (stats.samples.back().t < t_end - kTimeSlack) {
      rep.notes.push_back(tag + " skipped: trajectory shorter than (R - r)/v");
      continue;
    }
    const auto ball = lat.ball_indices(lat.origin(), pr.r);
    std::vector<double> t, f;
    for (const auto& smp : stats.samples) {
      t.push_back(smp.t);
      f.push_back(ball_sum(smp.pairs, ball));
    }
    const double S = sup_until(t, f, t_end);
    worst_grid_change = std::max(worst_grid_change, relative_change(S, sup_until(t, f, t_end, true)));
    const double base = std::pow(pr.R, d) * cfg.lambda * cfg.lambda;
    const double weight = base * (1.0 / gap + std::pow(gap, -pow_gap));
    const double C = S <= base ? 0.0 : (S - base) / weight;
    rep.set_constant("S@" + tag, S);
    rep.set_constant("C@" + tag, C);
    rep.add_row(tag, t_end, S, base + C * weight);
    gaps.push_back(gap);
    constants.push_back(C);
  }
  rep.set_diagnostic("sup_change_under_dt_doubling", worst_grid_change);
  if (gaps.empty()) {
    rep.skip("no admissible (R, r) pair");
    return rep;
  }
  fold_stability(rep, fitted_stability("theorem_bound", gaps, constants), "fitted C not stable across R - r");
  return rep;
}

CheckReport check_differential_inequality_sweep(const TrajectoryStats& stats,
                                                const TheoremCheckConfig& cfg) {
  CheckReport rep("differential_inequality_sweep", Tier::Fitted, 0.0);
  rep.notes.push_back("C is fitted per s; stability across s is the verdict");
  if (!gate(rep, stats)) return rep;
  std::vector<double> gaps, constants;
  for (const auto& pr : cfg.pairs) {
    const std::string tag = label_of("pair", pr.R, pr.r);
    VelocityParams vp{};
    try {
      vp = velocity_params(cfg.v, cfg.kappa, pr.R, pr.r);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Regime) throw;
      rep.notes.push_back(tag + " skipped: " + e.what());
      continue;
    }
    if (stats.samples.back().t < vp.s - kTimeSlack) {
      rep.notes.push_back(tag + " skipped: trajectory shorter than s");
      continue;
    }
    const ScaledCutoff sc(make_standard_cutoff(vp.epsilon, cfg.cutoff_sharpness), vp);
    const auto one = check_differential_inequality_structure(stats, sc, cfg.beta);
    const double C = one.constant("C");
    rep.set_constant("C@" + tag, C);
    rep.set_constant("s@" + tag, vp.s);
    for (const auto& row : one.rows) rep.add_row(tag + ":" + row.label, row.t, row.lhs, row.rhs);
    gaps.push_back(pr.R - pr.r);
    constants.push_back(C);
  }
  if (gaps.empty()) {
    rep.skip("no admissible (R, r) pair");
    return rep;
  }
  fold_stability(rep, fitted_stability("differential_inequality_sweep", gaps, constants), "fitted C not stable across s");
  return rep;
}

CheckReport check_particle_transport(const TrajectoryStats& stats, double v,
                                     double kappa, double lambda, double alpha,
                                     double r1, const std::vector<double>& r2) {
  CheckReport rep("particle_transport", Tier::Fitted, 0.0);
  const auto& lat = stats.lattice;
  const int d = lat.dimension();
  const int p = 2;
  const int n = static_cast<int>(std::floor(alpha - d - 1.0));
  rep.set_parameter("p", static_cast<double>(p));
  rep.set_parameter("r1", r1);
  rep.set_parameter("n", static_cast<double>(n));
  rep.notes.push_back("sup over the closed grid interval t <= (r2 - r1)/v");
  if (!(v > kappa)) {
    rep.skip("v > kappa violated");
    return rep;
  }
  if (!(alpha > std::max(1.5 * d * p + 1.0, 2.0 * d + 1.0))) {
    rep.skip("alpha > max(3dp/2 + 1, 2d + 1) violated");
    return rep;
  }
  if (!gate(rep, stats)) return rep;
  const std::size_t sites = lat.site_count();
  const auto inner = lat.ball_indices(lat.origin(), r1);
  std::vector<double> t, q;
  for (const auto& smp : stats.samples) {
    t.push_back(smp.t);
    q.push_back(ball_square(smp.pairs, sites, inner));
  }
  std::vector<double> gaps, constants;
  for (double outer_r : r2) {
    const double gap = outer_r - r1;
    const std::string tag = label_of("radii", r1, outer_r);
    if (!(gap > std::max(r1, 1.0))) {
      rep.notes.push_back(tag + " skipped: r2 - r1 > max(r1, 1) violated");
      continue;
    }
    const double t_end = gap / v;
    if (!wrap_guard_ok(lat, v, t_end)) {
      rep.notes.push_back(tag + " skipped: wrap-around guard v t < L/2 - 1 violated");
      continue;
    }
    if (t.back() < t_end - kTimeSlack) {
      rep.notes.push_back(tag + " skipped: trajectory shorter than (r2 - r1)/v");
      continue;
    }
    const double Q0 = ball_square(stats.samples.front().pairs, sites,
                                  lat.ball_indices(lat.origin(), outer_r));
    const double S = sup_until(t, q, t_end);
    const double weight = Q0 / gap + std::pow(gap, 2.0 * d - n) * lambda * lambda;
    const double C = S <= Q0 ? 0.0 : (S - Q0) / weight;
    rep.set_constant("S@" + tag, S);
    rep.set_constant("C@" + tag, C);
    rep.add_row(tag, t_end, S, Q0 + C * weight);
    gaps.push_back(gap);
    constants.push_back(C);
  }
  if (gaps.empty()) {
    rep.skip("no admissible r2");
    return rep;
  }
  fold_stability(rep, fitted_stability("particle_transport", gaps, constants), "fitted C not stable across r2 - r1");
  return rep;
}

CheckReport check_symmetrized_expansion_first_order(const ScaledCutoff& sc,
                                                    const TorusLattice& lat,
                                                    int time_samples) {
  if (time_samples < 2) fail(ErrorKind::Parameter, "need at least two time samples");
  CheckReport rep("symmetrized_expansion", Tier::Fitted, 0.0);
  const auto& p = sc.params;
  rep.set_parameter("R", p.R);
  rep.set_parameter("r", p.r);
  rep.set_parameter("s", p.s);
  const std::size_t n = lat.site_count();
  double C = 0.0;
  struct Need {
    double t, lhs, first, second;
  };
  std::vector<Need> rows;
  for (int j = 0; j < time_samples; ++j) {
    const double t = p.s * j / (time_samples - 1);
    std::vector<double> chi(n), u(n), nx(n);
    for (std::size_t x = 0; x < n; ++x) {
      nx[x] = lat.norm(x);
      chi[x] = sc.chi(t, nx[x]);
      u[x] = sc.u(t, nx[x]);
    }
    Need worst{t, 0.0, 0.0, 0.0};
    double worst_excess = -kInf;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        const double dist = lat.distance(x, y);
        const double lhs = std::abs(chi[x] - chi[y]);
        const double first = dist / p.s * u[x] * u[y];
        const double ind = (nx[x] <= p.R ? 1.0 : 0.0) + (nx[y] <= p.R ? 1.0 : 0.0);
        const double second = dist * dist / (p.s * p.s) * ind;
        const double excess = lhs - first;
        if (excess > 0.0) C = second > 0.0 ? std::max(C, excess / second) : kInf;
        if (excess > worst_excess) {
          worst_excess = excess;
          worst = {t, lhs, first, second};
        }
      }
    rows.push_back(worst);
  }
  rep.set_constant("C_fit", C);
  if (!std::isfinite(C)) {
    rep.fail("no finite constant fits the expansion");
    return rep;
  }
  for (const auto& w : rows) rep.add_row("worst_pair", w.t, w.lhs, w.first + C * w.second);
  return rep;
}

CheckReport check_symmetrized_expansion_ladder(const TorusLattice& lat,
                                               double v, double kappa,
                                               double r,
                                               const std::vector<double>& gaps,
                                               double cutoff_sharpness) {
  CheckReport rep("symmetrized_expansion_ladder", Tier::Fitted, 0.0);
  std::vector<double> used, constants;
  for (double gap : gaps) {
    VelocityParams vp{};
    try {
      vp = velocity_params(v, kappa, r + gap, r);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Regime) throw;
      rep.notes.push_back("gap " + format_short(gap) + " skipped: " + e.what());
      continue;
    }
    const ScaledCutoff sc(make_standard_cutoff(vp.epsilon, cutoff_sharpness), vp);
    const auto one = check_symmetrized_expansion_first_order(sc, lat);
    rep.set_constant("C_fit@" + format_short(gap), one.constant("C_fit"));
    used.push_back(gap);
    constants.push_back(one.constant("C_fit"));
  }
  if (used.empty()) {
    rep.skip("no admissible gap");
    return rep;
  }
  fold_stability(rep, fitted_stability("symmetrized_expansion_ladder", used, constants), "C_fit not stable across R - r");
  return rep;
}

CheckReport check_operator_inequality(const FockBasis& basis) {
  if (!basis.is_full()) fail(ErrorKind::Parameter, "operator inequality needs the full basis");
  CheckReport rep("operator_inequality", Tier::Hard, 1e-10);
  const auto& lat = basis.lattice();
  rep.set_parameter("sites", static_cast<double>(basis.sites()));
  rep.set_parameter("n_max", static_cast<double>(basis.n_max()));
  const Site origin = lat.origin();
  const auto n0 = number_op(origin, basis);
  for (std::size_t x = 0; x < lat.site_count(); ++x) {
    const Site sx = lat.site_at(x);
    const auto nx = number_op(sx, basis);
    const auto bx = annihilation_op(sx, basis);
    const auto bdx = creation_op(sx, basis);
    const Eigen::MatrixXcd M = (nx * n0 - bdx * (n0 * bx)).to_dense();
    const Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    rep.add_row("min_eigenvalue@" + std::to_string(x), 0.0, 0.0, es.eigenvalues().minCoeff());
    rep.set_diagnostic("hermiticity@" + std::to_string(x), (M - M.adjoint()).cwiseAbs().maxCoeff());
  }
  return rep;
}

ScalingSweepResult scaling_sweep(const TrajectoryStats& stats, double v,
                                 double lambda, double r,
                                 const std::vector<double>& t_max,
                                 double ratio_bound) {
  ScalingSweepResult out{CheckReport("scaling_exponent", Tier::Exploratory, 0.0),
                         CheckReport("scaling_bound", Tier::Hard, kHardTolerance)};
  auto& ex = out.exponent;
  auto& hb = out.bound;
  hb.set_parameter("ratio_bound", ratio_bound);
  if (t_max.empty()) fail(ErrorKind::Parameter, "empty t_max ladder");
  if (!gate(hb, stats)) {
    ex.skip("trajectory unreliable");
    return out;
  }
  const int d = stats.lattice.dimension();
  std::vector<double> t, q;
  for (const auto& smp : stats.samples) {
    t.push_back(smp.t);
    q.push_back(smp.n0_squared());
  }
  double worst_grid_change = 0.0;
  for (double tm : t_max) {
    const std::string tag = "t_max=" + format_short(tm);
    if (t.back() < tm - kTimeSlack) {
      hb.fail(tag + ": trajectory shorter than t_max");
      continue;
    }
    if (!wrap_guard_ok(stats.lattice, v, tm)) {
      hb.fail(tag + ": wrap-around guard v t < L/2 - 1 violated");
      continue;
    }
    const double R = r + v * tm;
    const double sup = sup_until(t, q, tm);
    worst_grid_change = std::max(worst_grid_change, relative_change(sup, sup_until(t, q, tm, true)));
    const double ratio = sup / (lambda * lambda * std::pow(R, d));
    hb.set_constant("ratio@" + format_short(tm), ratio);
    hb.add_row(tag, tm, ratio, ratio_bound);
  }
  hb.set_diagnostic("sup_change_under_dt_doubling", worst_grid_change);

  std::vector<double> lx, ly;
  double running = -kInf;
  for (std::size_t k = 0; k < t.size(); ++k) {
    running = std::max(running, q[k]);
    if (t[k] <= 0.0 || t[k] > t_max.back() + kTimeSlack || running <= 0.0) continue;
    lx.push_back(std::log(t[k]));
    ly.push_back(std::log(running));
  }
  const auto fit = fit_line(lx, ly);
  ex.set_constant("exponent", fit.slope);
  ex.set_constant("exponent_stderr", fit.slope_stderr);
  ex.set_constant("r_squared", fit.r_squared);
  ex.set_diagnostic("points", static_cast<double>(lx.size()));
  ex.notes.push_back(fit.r_squared >= 0.9 ? "fit non-degenerate (R^2 >= 0.9)"
                                          : "fit degenerate (R^2 < 0.9)");
  return out;
}

}  // namespace bhastlo
