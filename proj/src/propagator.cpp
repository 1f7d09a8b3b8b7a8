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

#include "bhastlo/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "bhastlo/error.hpp"
#include "bhastlo/report.hpp"

namespace bhastlo {

const char* to_string(PropagatorMethod method) noexcept {
  switch (method) {
    case PropagatorMethod::Krylov: return "krylov";
    case PropagatorMethod::FullDiagonalization: return "full_diagonalization";
  }
  return "unknown";
}

void PropagatorConfig::validate() const {
  if (!(dt > 0.0)) fail(ErrorKind::Parameter, "propagator dt must be positive");
  if (krylov_dim < 2) fail(ErrorKind::Parameter, "krylov_dim must be >= 2");
  if (!(tol > 0.0)) fail(ErrorKind::Parameter, "propagator tol must be positive");
  if (!(leakage_threshold >= 0.0))
    fail(ErrorKind::Parameter, "leakage_threshold must be >= 0");
  if (max_halvings < 0) fail(ErrorKind::Parameter, "max_halvings must be >= 0");
}

namespace {

using CVec = std::vector<Complex>;

Complex dot(const CVec& a, const CVec& b) {
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm2(const CVec& a) {
  double s = 0.0;
  for (const auto& z : a) s += std::norm(z);
  return std::sqrt(s);
}

// exp(-i h T) e_1 for the tridiagonal Lanczos matrix T.
struct TridiagonalExp {
  Eigen::VectorXd evals;
  Eigen::MatrixXd evecs;

  TridiagonalExp(const std::vector<double>& alpha, const std::vector<double>& beta,
                 int m) {
    Eigen::VectorXd diag(m), off(std::max(m - 1, 0));
    for (int i = 0; i < m; ++i) diag(i) = alpha[i];
    for (int i = 0; i + 1 < m; ++i) off(i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    if (m == 1) {
      evals = diag;
      evecs = Eigen::MatrixXd::Identity(1, 1);
    } else {
      es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
      evals = es.eigenvalues();
      evecs = es.eigenvectors();
    }
  }

  Eigen::VectorXcd apply(double h) const {
    const int m = static_cast<int>(evals.size());
    Eigen::VectorXcd c(m);
    for (int k = 0; k < m; ++k)
      c(k) = std::exp(Complex(0.0, -h * evals(k))) * evecs(0, k);
    return evecs.cast<Complex>() * c;
  }
};

struct KrylovStats {
  int substeps = 0;
  double error = 0.0;
};

// Advances psi by `interval` with adaptive Lanczos substeps. The local
// error budget of a substep of length h is tol * |h| / |interval|.
void krylov_advance(const SparseOperator& H, CVec& psi, double interval,
                    const PropagatorConfig& cfg, KrylovStats& stats) {
  if (H.nnz() == 0) return;
  const std::size_t n = psi.size();
  const int m_max = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(cfg.krylov_dim), std::max<std::size_t>(n, 1)));
  std::vector<CVec> V;
  CVec w(n);
  double remaining = interval;
  double h = interval;
  while (remaining != 0.0) {
    if (std::abs(h) > std::abs(remaining)) h = remaining;
    const double beta0 = norm2(psi);
    if (beta0 == 0.0) return;

    V.assign(1, CVec(n));
    for (std::size_t i = 0; i < n; ++i) V[0][i] = psi[i] / beta0;
    std::vector<double> alpha, beta;
    auto budget = [&](double step) { return cfg.tol * std::abs(step / interval); };
    auto estimate = [&](const TridiagonalExp& te, double step, int m, double b) {
      return beta0 * b * std::abs(te.apply(step)(m - 1));
    };

    bool breakdown = false;
    bool converged = false;
    double err = 0.0;
    double last_beta = 0.0;
    int m = 0;
    for (int j = 0; j < m_max; ++j) {
      H.apply(V[j], w);
      const double a = dot(V[j], w).real();
      alpha.push_back(a);
      for (std::size_t i = 0; i < n; ++i) w[i] -= a * V[j][i];
      if (j > 0)
        for (std::size_t i = 0; i < n; ++i) w[i] -= beta[j - 1] * V[j - 1][i];
      for (int pass = 0; pass < 2; ++pass)
        for (int k = 0; k <= j; ++k) {
          const Complex c = dot(V[k], w);
          for (std::size_t i = 0; i < n; ++i) w[i] -= c * V[k][i];
        }
      last_beta = norm2(w);
      m = j + 1;
      const double scale = std::abs(a) + (j > 0 ? beta[j - 1] : 0.0) + 1.0;
      if (last_beta <= 1e-14 * scale || m == static_cast<int>(n)) {
        breakdown = true;
        err = 0.0;
        break;
      }
      TridiagonalExp te(alpha, beta, m);
      err = estimate(te, h, m, last_beta);
      if (err <= budget(h)) {
        converged = true;
        break;
      }
      if (j + 1 < m_max) {
        beta.push_back(last_beta);
        V.emplace_back(n);
        for (std::size_t i = 0; i < n; ++i) V[j + 1][i] = w[i] / last_beta;
      }
    }

    TridiagonalExp te(alpha, beta, m);
    if (!breakdown && !converged) {
      int halvings = 0;
      while (err > budget(h)) {
        if (++halvings > cfg.max_halvings) {
          std::ostringstream msg;
          msg << "Krylov step did not reach tol " << cfg.tol << " after "
              << cfg.max_halvings << " halvings";
          fail(ErrorKind::Propagation, msg.str());
        }
        h /= 2.0;
        err = estimate(te, h, m, last_beta);
      }
    }

    const Eigen::VectorXcd y = te.apply(h);
    std::fill(psi.begin(), psi.end(), Complex{0.0, 0.0});
    for (int k = 0; k < m; ++k) {
      const Complex c = beta0 * y(k);
      for (std::size_t i = 0; i < n; ++i) psi[i] += c * V[k][i];
    }
    remaining -= h;
    if (std::abs(remaining) < 1e-15 * std::abs(interval)) remaining = 0.0;
    stats.substeps += 1;
    stats.error += err;
  }
}

// Dense spectral decomposition H = U diag(lambda) U^dagger.
struct DenseSpectrum {
  Eigen::VectorXd evals;
  Eigen::MatrixXcd evecs;

  explicit DenseSpectrum(const SparseOperator& H) {
    if (H.dim() > kFullDiagonalizationMaxDim) {
      std::ostringstream msg;
      msg << "full diagonalization requires dim <= " << kFullDiagonalizationMaxDim
          << ", got " << H.dim();
      fail(ErrorKind::Capacity, msg.str());
    }
    bool real = true;
    for (const auto& v : H.values()) real = real && v.imag() == 0.0;
    const Eigen::MatrixXcd dense = H.to_dense();
    if (real) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense.real());
      evals = es.eigenvalues();
      evecs = es.eigenvectors().cast<Complex>();
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
      evals = es.eigenvalues();
      evecs = es.eigenvectors();
    }
  }

  CVec apply(const CVec& psi, double t) const {
    if (evals.size() > 0 && evals.cwiseAbs().maxCoeff() == 0.0) return psi;
    const Eigen::Map<const Eigen::VectorXcd> p(psi.data(), static_cast<Eigen::Index>(psi.size()));
    Eigen::VectorXcd c = evecs.adjoint() * p;
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(Complex(0.0, -t * evals(k)));
    const Eigen::VectorXcd out = evecs * c;
    return CVec(out.data(), out.data() + out.size());
  }
};

double energy_of(const SparseOperator& H, const CVec& psi, CVec& scratch) {
  H.apply(psi, scratch);
  return dot(psi, scratch).real();
}

double number_of(const FockBasis& basis, const CVec& psi) {
  double s = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k)
    s += std::norm(psi[k]) * basis.total_number(k);
  return s;
}

}  // namespace

double leakage(const StateVector& psi, const FockBasis& basis) {
  if (psi.dim() != basis.dim())
    fail(ErrorKind::DimensionMismatch, "state does not match basis");
  double weight = 0.0;
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const auto occ = basis.occupations(k);
    const bool saturated = std::any_of(occ.begin(), occ.end(), [&](std::uint8_t n) {
      return n == basis.n_max();
    });
    if (saturated) weight += std::norm(psi[k]);
  }
  return std::clamp(weight, 0.0, 1.0);
}

EvolutionTrace evolve(const SparseOperator& H, const StateVector& psi0,
                      const std::vector<double>& times,
                      const PropagatorConfig& cfg, const EvolveOptions& options) {
  cfg.validate();
  if (psi0.dim() != H.dim())
    fail(ErrorKind::DimensionMismatch, "initial state does not match H");
  if (options.basis && options.basis->dim() != H.dim())
    fail(ErrorKind::DimensionMismatch, "basis does not match H");
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    fail(ErrorKind::NotNormalized, "initial state is not normalized");
  if (times.empty() || times.front() != 0.0)
    fail(ErrorKind::Parameter, "time grid must start at 0");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1]))
      fail(ErrorKind::Parameter, "time grid must be strictly increasing");

  EvolutionTrace trace;
  trace.times = times;
  std::optional<DenseSpectrum> spectrum;
  if (cfg.method == PropagatorMethod::FullDiagonalization) spectrum.emplace(H);

  CVec psi = psi0.data();
  CVec scratch(psi.size());
  const double e0 = energy_of(H, psi, scratch);
  const double n0 = options.basis ? number_of(*options.basis, psi) : 0.0;

  for (std::size_t k = 0; k < times.size(); ++k) {
    KrylovStats stats;
    if (k > 0) {
      if (spectrum)
        psi = spectrum->apply(psi0.data(), times[k]);
      else
        krylov_advance(H, psi, times[k] - times[k - 1], cfg, stats);
    }
    StepDiagnostics diag;
    diag.t = times[k];
    diag.norm_drift = norm2(psi) - 1.0;
    diag.energy = energy_of(H, psi, scratch);
    diag.energy_drift = diag.energy - e0;
    diag.substeps = stats.substeps;
    diag.error_estimate = stats.error;
    StateVector state(psi);
    if (options.basis) {
      diag.number_drift = number_of(*options.basis, psi) - n0;
      diag.leakage = leakage(state, *options.basis);
    }
    trace.max_leakage = std::max(trace.max_leakage, diag.leakage);
    trace.max_norm_drift = std::max(trace.max_norm_drift, std::abs(diag.norm_drift));
    trace.max_energy_drift = std::max(trace.max_energy_drift, std::abs(diag.energy_drift));
    trace.max_number_drift = std::max(trace.max_number_drift, std::abs(diag.number_drift));
    trace.diagnostics.push_back(diag);
    if (options.observer) options.observer(k, times[k], state);
    if (options.store_states) trace.states.push_back(std::move(state));
  }
  trace.reliable = trace.max_leakage <= cfg.leakage_threshold;
  return trace;
}

StateVector propagate(const SparseOperator& H, const StateVector& psi,
                      double dt, const PropagatorConfig& cfg) {
  cfg.validate();
  if (psi.dim() != H.dim())
    fail(ErrorKind::DimensionMismatch, "state does not match H");
  if (cfg.method == PropagatorMethod::FullDiagonalization)
    return StateVector(DenseSpectrum(H).apply(psi.data(), dt));
  CVec out = psi.data();
  KrylovStats stats;
  if (dt != 0.0) krylov_advance(H, out, dt, cfg, stats);
  return StateVector(std::move(out));
}

double reversibility_check(const SparseOperator& H, const StateVector& psi0,
                           double T, const PropagatorConfig& cfg) {
  cfg.validate();
  if (!(T >= 0.0)) fail(ErrorKind::Parameter, "reversibility time must be >= 0");
  if (cfg.method == PropagatorMethod::FullDiagonalization) {
    const DenseSpectrum spectrum(H);
    const CVec there = spectrum.apply(psi0.data(), T);
    return distance(StateVector(spectrum.apply(there, -T)), psi0);
  }
  const auto grid = uniform_grid(T, cfg.dt);
  CVec psi = psi0.data();
  KrylovStats stats;
  for (std::size_t k = 1; k < grid.size(); ++k)
    krylov_advance(H, psi, grid[k] - grid[k - 1], cfg, stats);
  for (std::size_t k = grid.size(); k-- > 1;)
    krylov_advance(H, psi, grid[k - 1] - grid[k], cfg, stats);
  return distance(StateVector(std::move(psi)), psi0);
}

std::vector<double> uniform_grid(double t_max, double dt) {
  if (!(dt > 0.0)) fail(ErrorKind::Parameter, "grid step must be positive");
  if (!(t_max >= 0.0)) fail(ErrorKind::Parameter, "grid end must be >= 0");
  std::vector<double> grid{0.0};
  const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
  for (std::size_t k = 1; k <= steps; ++k)
    grid.push_back(std::min(t_max, static_cast<double>(k) * dt));
  if (grid.size() > 1 && grid.back() <= grid[grid.size() - 2]) grid.pop_back();
  return grid;
}

void write_trace_csv(std::ostream& os, const EvolutionTrace& trace) {
  os << "t,norm_drift,energy,leakage\n";
  for (const auto& d : trace.diagnostics)
    os << format_double(d.t) << ',' << format_double(d.norm_drift) << ','
       << format_double(d.energy) << ',' << format_double(d.leakage) << '\n';
}

}  // namespace bhastlo
