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

#include "bhastlo/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "bhastlo/astlo.hpp"
#include "bhastlo/error.hpp"
#include "bhastlo/verifier.hpp"

namespace bhastlo {

namespace fs = std::filesystem;

ExitCode exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Schema:
    case ErrorKind::Parameter:
    case ErrorKind::Io: return ExitCode::Schema;
    case ErrorKind::Regime: return ExitCode::Regime;
    case ErrorKind::Capacity: return ExitCode::Capacity;
    default: return ExitCode::Internal;
  }
}

HoppingMatrix resolve_hopping(const RunConfig& cfg) {
  const TorusLattice lat(cfg.d, cfg.L);
  const auto& h = cfg.hopping;
  switch (h.kind) {
    case HoppingKind::PowerLaw: {
      const double cj = h.C_J ? *h.C_J : power_law_cj_for_kappa(lat, h.alpha, *h.kappa_target);
      return build_power_law(lat, cj, h.alpha);
    }
    case HoppingKind::NearestNeighbor: return build_nearest_neighbor(lat, h.amplitude);
    case HoppingKind::Zero: return build_zero_hopping(lat);
  }
  fail(ErrorKind::Internal, "unknown hopping kind");
}

namespace {

// Finite-range kernels have every moment; any beta is admissible.
int beta_for(const RunConfig& cfg) {
  if (cfg.hopping.kind == HoppingKind::PowerLaw) return beta_of(cfg.hopping.alpha, cfg.d);
  return 2 * cfg.d + 1;
}

PotentialSpec potential_of(const RunConfig& cfg) {
  if (cfg.potential.kind == "polynomial") return PotentialSpec::polynomial(cfg.potential.coefficients);
  return PotentialSpec::bose_hubbard(cfg.potential.U, cfg.potential.mu);
}

}  // namespace

ResolvedModel resolve_model(const RunConfig& cfg) {
  TorusLattice lat(cfg.d, cfg.L);
  HoppingMatrix J = resolve_hopping(cfg);
  const int beta = beta_for(cfg);
  PotentialSpec pot = potential_of(cfg);
  if (cfg.nu > cfg.n_max)
    fail(ErrorKind::Regime, "Mott filling nu exceeds n_max");
  FockBasis basis = cfg.full_basis
                        ? FockBasis::full(lat, cfg.n_max, cfg.max_dim)
                        : FockBasis::fixed_number(lat, cfg.n_max,
                                                  cfg.nu * static_cast<int>(lat.site_count()),
                                                  cfg.max_dim);
  SparseOperator H = assemble_hamiltonian(ModelSpec{lat, J, pot, cfg.n_max, cfg.max_dim}, basis);
  StateVector psi0 = mott_state(cfg.nu, basis);
  return ResolvedModel{lat, std::move(J), std::move(pot), std::move(basis), std::move(H),
                       std::move(psi0), beta};
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) fail(ErrorKind::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) fail(ErrorKind::Io, "cannot rename " + tmp.string() + ": " + ec.message());
}

namespace {

constexpr const char* kTierNote =
    "tiers: hard checks are unconditional inequalities (margin >= -tol); fitted checks "
    "report the smallest constant that makes a bound with unspecified C hold, and pass "
    "when that constant stays within 2x across a ladder";

std::vector<double> density_radii(const RunConfig& cfg, const std::vector<RadiusPair>& pairs) {
  std::vector<double> radii;
  for (int k = 1; k <= cfg.L / 2; ++k) radii.push_back(k);
  for (const auto& p : pairs) {
    if (p.R >= 1.0) radii.push_back(p.R);
    if (p.r >= 1.0) radii.push_back(p.r);
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  return radii;
}

CheckReport leakage_report(const TrajectoryStats& stats, double t_end) {
  CheckReport rep("truncation_leakage", Tier::Hard, 0.0);
  rep.add_row("max_leakage", t_end, stats.max_leakage, stats.leakage_threshold);
  rep.set_diagnostic("max_norm_drift", stats.max_norm_drift);
  rep.set_diagnostic("max_energy_drift", stats.max_energy_drift);
  rep.set_diagnostic("max_number_drift", stats.max_number_drift);
  return rep;
}

ScaledCutoff cutoff_for(const RunConfig& cfg, double kappa, const RadiusPair& p) {
  const auto vp = velocity_params(cfg.v, kappa, p.R, p.r);
  return ScaledCutoff(make_standard_cutoff(vp.epsilon), vp);
}

std::vector<std::string> header_lines(const RunConfig& cfg, const ResolvedModel& m,
                                      const TrajectoryStats& stats, double t_end) {
  std::vector<std::string> h;
  auto kv = [&](const std::string& k, const std::string& v) { h.push_back(k + " = " + v); };
  kv("name", cfg.name);
  kv("lattice", "d=" + std::to_string(cfg.d) + " L=" + std::to_string(cfg.L));
  kv("basis", std::string(cfg.full_basis ? "full" : "sector") + " n_max=" +
                  std::to_string(cfg.n_max) + " dim=" + std::to_string(m.basis.dim()));
  kv("kappa", format_double(m.hopping.kappa()));
  kv("C_J", format_double(m.hopping.C_J()));
  kv("alpha", format_double(m.hopping.alpha()));
  kv("beta", std::to_string(m.beta));
  kv("v", format_double(cfg.v));
  kv("lambda", format_double(cfg.lambda));
  kv("grid", "dt=" + format_double(cfg.dt) + " t_max=" + format_double(t_end));
  kv("propagator", to_string(cfg.propagator.method));
  kv("max_leakage", format_double(stats.max_leakage));
  kv("max_norm_drift", format_double(stats.max_norm_drift));
  kv("max_energy_drift", format_double(stats.max_energy_drift));
  kv("max_number_drift", format_double(stats.max_number_drift));
  for (const auto& w : m.hopping.warnings()) kv("warning", w);
  h.push_back(kTierNote);
  return h;
}

std::string profile_csv(const TrajectoryStats& stats) {
  std::vector<CorrelationProfile> profiles;
  const std::size_t n = stats.lattice.site_count();
  for (const auto& s : stats.samples)
    profiles.push_back({s.t, std::vector<double>(s.pairs.begin(), s.pairs.begin() + n)});
  std::ostringstream os;
  write_profile_csv(os, profiles);
  return os.str();
}

std::string trace_csv(const EvolutionTrace& trace) {
  std::ostringstream os;
  write_trace_csv(os, trace);
  return os.str();
}

std::string report_csv(const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  write_report_csv(os, reports);
  return os.str();
}

std::string summary_text(const std::vector<CheckReport>& reports,
                         const std::vector<std::string>& header) {
  std::ostringstream os;
  write_summary(os, reports, header);
  return os.str();
}

std::string output_path(const RunConfig& cfg, const char* file) {
  return (fs::path(cfg.output_dir) / file).string();
}

void emit(RunOutcome& out, const std::string& path, const std::string& contents) {
  write_file_atomic(path, contents);
  out.written.push_back(path);
}

template <class Body>
RunOutcome guarded(Body&& body) {
  RunOutcome out;
  try {
    body(out);
  } catch (const Error& e) {
    out.code = exit_code_for(e.kind());
    out.message = std::string(to_string(e.kind())) + " error: " + e.what();
  } catch (const std::bad_alloc&) {
    out.code = ExitCode::Capacity;
    out.message = "capacity error: out of memory";
  } catch (const std::exception& e) {
    out.code = ExitCode::Internal;
    out.message = std::string("internal error: ") + e.what();
  }
  return out;
}

struct Prepared {
  ResolvedModel model;
  double kappa;
  CheckReport density;
};

Prepared prepare(const RunConfig& cfg, const std::vector<RadiusPair>& pairs) {
  check_regime(cfg, resolve_hopping(cfg).kappa());
  ResolvedModel m = resolve_model(cfg);
  const double kappa = m.hopping.kappa();
  CheckReport density = check_controlled_density(m.initial, cfg.lambda,
                                                 density_radii(cfg, pairs), m.basis);
  return Prepared{std::move(m), kappa, std::move(density)};
}

TrajectoryStats evolve_stats(const RunConfig& cfg, const ResolvedModel& m, double t_end,
                             EvolutionTrace& trace) {
  StatsOptions so{cfg.checks.commutator, cfg.checks.cauchy_schwarz};
  PropagatorConfig pc = cfg.propagator;
  pc.dt = cfg.dt;
  return simulate(m.hamiltonian, m.hopping, m.basis, m.initial, uniform_grid(t_end, cfg.dt), pc,
                  so, &trace, false);
}

void finish(RunOutcome& out, const RunConfig& cfg, const std::vector<std::string>& header,
            const EvolutionTrace& trace, const TrajectoryStats& stats) {
  emit(out, output_path(cfg, "trace.csv"), trace_csv(trace));
  emit(out, output_path(cfg, "profile.csv"), profile_csv(stats));
  emit(out, output_path(cfg, "report.csv"), report_csv(out.reports));
  out.summary = summary_text(out.reports, header);
  emit(out, output_path(cfg, "summary.txt"), out.summary);
  out.code = all_hard_passed(out.reports) ? ExitCode::Ok : ExitCode::HardFailure;
}

}  // namespace

RunOutcome run_pipeline(const RunConfig& cfg) {
  return guarded([&](RunOutcome& out) {
    if (cfg.radii.empty()) fail(ErrorKind::Schema, "config.radii: run needs at least one (R, r) pair");
    auto prep = prepare(cfg, cfg.radii);
    const auto& m = prep.model;
    double t_end = 0.0;
    for (const auto& p : cfg.radii) t_end = std::max(t_end, (p.R - p.r) / cfg.v);
    if (cfg.checks.transport_r1)
      for (double r2 : cfg.checks.transport_r2)
        t_end = std::max(t_end, (r2 - *cfg.checks.transport_r1) / cfg.v);
    if (cfg.t_max) t_end = *cfg.t_max;

    EvolutionTrace trace;
    const auto stats = evolve_stats(cfg, m, t_end, trace);

    auto& reps = out.reports;
    reps.push_back(std::move(prep.density));
    reps.push_back(leakage_report(stats, t_end));
    const TorusLattice sym_lat(cfg.d, cfg.checks.symmetrized_L);
    for (const auto& p : cfg.radii) {
      const auto sc = cutoff_for(cfg, prep.kappa, p);
      const std::string tag = "(R=" + format_short(p.R) + ",r=" + format_short(p.r) + ")";
      auto add = [&](CheckReport rep) {
        rep.name += tag;
        reps.push_back(std::move(rep));
      };
      add(check_geometric_property(stats, sc, cfg.lambda));
      if (cfg.checks.commutator) add(check_commutator_decomposition(stats, sc));
      add(check_differential_inequality_structure(stats, sc, m.beta));
      add(check_symmetrized_expansion_first_order(sc, sym_lat));
    }
    if (cfg.checks.cauchy_schwarz) reps.push_back(check_cauchy_schwarz(stats));
    TheoremCheckConfig tc;
    tc.v = cfg.v;
    tc.kappa = prep.kappa;
    tc.lambda = cfg.lambda;
    tc.beta = m.beta;
    tc.pairs = cfg.radii;
    reps.push_back(check_theorem_bound(stats, tc));
    if (cfg.checks.transport_r1)
      reps.push_back(check_particle_transport(stats, cfg.v, prep.kappa, cfg.lambda,
                                              m.hopping.alpha(), *cfg.checks.transport_r1,
                                              cfg.checks.transport_r2));
    finish(out, cfg, header_lines(cfg, m, stats, t_end), trace, stats);
  });
}

namespace {

std::string sweep_csv(const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  os << "check,quantity,rung,value\n";
  for (const auto& rep : reports)
    for (const auto& [key, value] : rep.constants) {
      const auto at = key.find('@');
      const std::string quantity = key.substr(0, at);
      const std::string rung = at == std::string::npos ? "all" : key.substr(at + 1);
      os << rep.name << ',' << quantity << ",\"" << rung << "\"," << format_double(value) << '\n';
    }
  return os.str();
}

}  // namespace

RunOutcome sweep_pipeline(const RunConfig& cfg) {
  return guarded([&](RunOutcome& out) {
    if (!cfg.sweep || cfg.sweep->empty()) fail(ErrorKind::Schema, "config.sweep: empty sweep rule");
    const auto& rule = *cfg.sweep;
    std::vector<RadiusPair> rungs;
    for (double g : rule.gaps) rungs.push_back({rule.r + g, rule.r});
    auto prep = prepare(cfg, rungs);
    const auto& m = prep.model;
    double t_end = 0.0;
    for (double g : rule.gaps) t_end = std::max(t_end, g / cfg.v);
    for (double t : rule.t_max) t_end = std::max(t_end, t);
    if (cfg.t_max) t_end = std::max(t_end, *cfg.t_max);

    EvolutionTrace trace;
    const auto stats = evolve_stats(cfg, m, t_end, trace);

    auto& reps = out.reports;
    reps.push_back(std::move(prep.density));
    reps.push_back(leakage_report(stats, t_end));

    // Rungs are pure functions of the shared trajectory.
    std::vector<std::future<std::vector<CheckReport>>> pending;
    for (const auto& p : rungs)
      pending.push_back(std::async(std::launch::async, [&, p] {
        const auto sc = cutoff_for(cfg, prep.kappa, p);
        const std::string tag = "(R=" + format_short(p.R) + ",r=" + format_short(p.r) + ")";
        std::vector<CheckReport> local;
        local.push_back(check_geometric_property(stats, sc, cfg.lambda));
        if (cfg.checks.commutator) local.push_back(check_commutator_decomposition(stats, sc));
        for (auto& rep : local) rep.name += tag;
        return local;
      }));
    for (auto& f : pending)
      for (auto& rep : f.get()) reps.push_back(std::move(rep));
    if (cfg.checks.cauchy_schwarz) reps.push_back(check_cauchy_schwarz(stats));

    if (!rungs.empty()) {
      TheoremCheckConfig tc;
      tc.v = cfg.v;
      tc.kappa = prep.kappa;
      tc.lambda = cfg.lambda;
      tc.beta = m.beta;
      tc.pairs = rungs;
      reps.push_back(check_theorem_bound(stats, tc));
      if (rule.include_r0) {
        auto r0 = tc;
        r0.pairs.clear();
        for (double g : rule.gaps) r0.pairs.push_back({g, 0.0});
        auto rep = check_theorem_bound(stats, r0);
        rep.name = "theorem_bound_r0";
        reps.push_back(std::move(rep));
      }
      reps.push_back(check_differential_inequality_sweep(stats, tc));
      double r1 = rule.r;
      std::vector<double> r2;
      for (double g : rule.gaps) r2.push_back(rule.r + g);
      if (cfg.checks.transport_r1) {
        r1 = *cfg.checks.transport_r1;
        r2 = cfg.checks.transport_r2;
      }
      reps.push_back(check_particle_transport(stats, cfg.v, prep.kappa, cfg.lambda,
                                              m.hopping.alpha(), r1, r2));
      reps.push_back(check_symmetrized_expansion_ladder(TorusLattice(cfg.d, cfg.checks.symmetrized_L),
                                                        cfg.v, prep.kappa, rule.r, rule.gaps));
    }
    if (!rule.t_max.empty()) {
      auto sw = scaling_sweep(stats, cfg.v, cfg.lambda, rule.r, rule.t_max, rule.ratio_bound);
      reps.push_back(std::move(sw.bound));
      reps.push_back(std::move(sw.exponent));
    }
    auto header = header_lines(cfg, m, stats, t_end);
    {
      std::ostringstream os;
      os << "sweep: r=" << format_short(rule.r) << " gaps=";
      for (double g : rule.gaps) os << format_short(g) << ' ';
      os << "t_max=";
      for (double t : rule.t_max) os << format_short(t) << ' ';
      header.insert(header.begin() + 1, os.str());
    }
    finish(out, cfg, header, trace, stats);
    emit(out, output_path(cfg, "sweep_report.csv"), sweep_csv(reps));
  });
}

std::string constants_report(const ConstantsQuery& q) {
  if (q.d < 1) fail(ErrorKind::Parameter, "d must be >= 1");
  if (q.L < 2) fail(ErrorKind::Parameter, "L must be >= 2");
  if (!(q.C_J > 0.0)) fail(ErrorKind::Parameter, "C_J must be positive");
  if (!(q.lambda > 0.0)) fail(ErrorKind::Parameter, "lambda must be positive");
  std::ostringstream os;
  auto kv = [&](const std::string& k, double v) { os << k << " = " << format_short(v) << '\n'; };
  auto verdict = [&](const std::string& k, bool ok, const std::string& why = "") {
    os << k << " = " << (ok ? "ok" : "violated") << (why.empty() || ok ? "" : " (" + why + ")")
       << '\n';
  };
  const TorusLattice lat(q.d, q.L);
  int beta = 0;
  bool beta_ok = true;
  std::string beta_msg;
  try {
    beta = beta_of(q.alpha, q.d);
  } catch (const Error& e) {
    beta_ok = false;
    beta_msg = e.what();
  }
  const auto J = build_power_law(lat, q.C_J, q.alpha);
  const double kappa = q.kappa_override >= 0.0 ? q.kappa_override : J.kappa();
  kv("kappa", kappa);
  if (q.kappa_override >= 0.0) kv("kappa_lattice", J.kappa());
  if (beta_ok) {
    os << "beta = " << beta << '\n';
    for (int k = 1; k <= beta + 1; ++k) kv("kappa^(" + std::to_string(k) + ")", J.moment(k));
  } else {
    verdict("alpha > d + 1", false, beta_msg);
  }
  if (!(q.alpha > 3.0 * q.d + 1.0))
    os << "warning = alpha <= 3d + 1; the differential inequality needs alpha > 3d + 1\n";
  for (const auto& w : J.warnings()) os << "warning = " << w << '\n';
  const double vt = 0.5 * (kappa + q.v);
  kv("v_tilde", vt);
  kv("epsilon", q.v - vt);
  kv("s", (q.R - q.r) / q.v);
  kv("R^d lambda^2", std::pow(q.R, q.d) * q.lambda * q.lambda);
  verdict("v > 2kappa", q.v > 2.0 * kappa, "v = " + format_short(q.v) + ", 2kappa = " + format_short(2.0 * kappa));
  verdict("r >= 0", q.r >= 0.0);
  verdict("R > r", q.R > q.r);
  verdict("R - r > max{v, 1}", q.R - q.r > std::max(q.v, 1.0));
  verdict("v t_max < L/2 - 1", wrap_guard_ok(lat, q.v, (q.R - q.r) / q.v));
  return os.str();
}

}  // namespace bhastlo
