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

#include "bhastlo/astlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bhastlo/error.hpp"
#include "bhastlo/report.hpp"

namespace bhastlo {

const char* to_string(AstloVariant variant) noexcept {
  switch (variant) {
    case AstloVariant::Chi: return "chi";
    case AstloVariant::ChiPrime: return "chi_prime";
    case AstloVariant::TildePrime: return "tilde_prime";
  }
  return "unknown";
}

std::vector<double> astlo_weights(const ScaledCutoff& sc, AstloVariant variant,
                                  double t, const TorusLattice& lat) {
  if (!(t >= 0.0)) fail(ErrorKind::Parameter, "ASTLO time must be >= 0");
  std::vector<double> w(lat.site_count());
  for (std::size_t x = 0; x < w.size(); ++x) {
    const double n = lat.norm(x);
    switch (variant) {
      case AstloVariant::Chi: w[x] = sc.chi(t, n); break;
      case AstloVariant::ChiPrime: w[x] = sc.chi_prime(t, n); break;
      case AstloVariant::TildePrime: w[x] = sc.tilde_prime(t, n); break;
    }
  }
  return w;
}

namespace {

void require_match(const StateVector& psi, const FockBasis& basis) {
  if (psi.dim() != basis.dim())
    fail(ErrorKind::DimensionMismatch, "state does not match basis");
}

}  // namespace

AstloObservable::AstloObservable(std::vector<double> weights,
                                 const FockBasis& basis, AstloVariant variant,
                                 double t)
    : variant_(variant), t_(t), weights_(std::move(weights)), diagonal_(basis.dim(), 0.0) {
  if (weights_.size() != basis.sites())
    fail(ErrorKind::DimensionMismatch, "one ASTLO weight per site required");
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const auto occ = basis.occupations(k);
    if (occ[0] == 0) continue;
    double s = 0.0;
    for (std::size_t x = 0; x < occ.size(); ++x) s += weights_[x] * occ[x];
    diagonal_[k] = occ[0] * s;
  }
}

double AstloObservable::expectation(const StateVector& psi) const {
  return diagonal_expectation(diagonal_, psi);
}

SparseOperator AstloObservable::as_operator() const {
  return SparseOperator::diagonal(diagonal_);
}

AstloObservable build_astlo(const ScaledCutoff& sc, AstloVariant variant,
                            double t, const FockBasis& basis) {
  return AstloObservable(astlo_weights(sc, variant, t, basis.lattice()), basis,
                         variant, t);
}

CorrelationProfile correlation_profile(const StateVector& psi,
                                       const FockBasis& basis, double t,
                                       std::size_t center) {
  require_match(psi, basis);
  const auto& lat = basis.lattice();
  if (center >= lat.site_count()) fail(ErrorKind::InvalidSite, "profile center out of range");
  CorrelationProfile p;
  p.t = t;
  p.values.assign(lat.site_count(), 0.0);
  std::vector<std::size_t> target(lat.site_count());
  for (std::size_t x = 0; x < target.size(); ++x) target[x] = lat.sum_index(center, x);
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const double w = std::norm(psi[k]);
    if (w == 0.0) continue;
    const auto occ = basis.occupations(k);
    const double nc = occ[center];
    if (nc == 0.0) continue;
    for (std::size_t x = 0; x < target.size(); ++x) p.values[x] += w * nc * occ[target[x]];
  }
  return p;
}

double corr_with_ball(const CorrelationProfile& profile, double r,
                      const TorusLattice& lat) {
  if (profile.values.size() != lat.site_count())
    fail(ErrorKind::DimensionMismatch, "profile does not match lattice");
  double s = 0.0;
  for (auto x : lat.ball_indices(lat.origin(), r)) s += profile.values[x];
  return s;
}

std::vector<double> pair_correlations(const StateVector& psi,
                                      const FockBasis& basis) {
  require_match(psi, basis);
  const std::size_t n = basis.sites();
  std::vector<double> m(n * n, 0.0);
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const double w = std::norm(psi[k]);
    if (w == 0.0) continue;
    const auto occ = basis.occupations(k);
    for (std::size_t x = 0; x < n; ++x) {
      if (occ[x] == 0) continue;
      const double wx = w * occ[x];
      for (std::size_t y = 0; y < n; ++y) m[x * n + y] += wx * occ[y];
    }
  }
  return m;
}

double diagonal_commutator(std::span<const double> diag, const StateVector& psi,
                           const StateVector& phi) {
  if (diag.size() != psi.dim() || phi.dim() != psi.dim())
    fail(ErrorKind::DimensionMismatch, "commutator operands differ in size");
  double im = 0.0;
  for (std::size_t k = 0; k < diag.size(); ++k)
    if (diag[k] != 0.0) im += diag[k] * (std::conj(phi[k]) * psi[k]).imag();
  return -2.0 * im;
}

std::vector<double> correlation_currents(const StateVector& psi,
                                         const StateVector& phi,
                                         const FockBasis& basis) {
  require_match(psi, basis);
  if (phi.dim() != psi.dim()) fail(ErrorKind::DimensionMismatch, "H psi has wrong size");
  const std::size_t n = basis.sites();
  std::vector<double> c(n, 0.0);
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const auto occ = basis.occupations(k);
    if (occ[0] == 0) continue;
    const double im = (std::conj(phi[k]) * psi[k]).imag();
    if (im == 0.0) continue;
    for (std::size_t x = 0; x < n; ++x) c[x] += occ[0] * occ[x] * im;
  }
  for (auto& v : c) v *= -2.0;
  return c;
}

CommutatorDensities commutator_densities(const HoppingMatrix& J,
                                         const StateVector& psi,
                                         const FockBasis& basis) {
  require_match(psi, basis);
  if (!(J.lattice() == basis.lattice()))
    fail(ErrorKind::Parameter, "hopping and basis lattices differ");
  const std::size_t n = basis.sites();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (J(x, y) != J(y, x)) fail(ErrorKind::Parameter, "hopping matrix is not symmetric");

  CommutatorDensities out{std::vector<Complex>(n), std::vector<Complex>(n)};
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const Complex pk = psi[k];
    if (pk == Complex{0.0, 0.0}) continue;
    const auto occ = basis.occupations(k);
    // Term I: the ordered hop a -> b enters I_a with + and I_b with -.
    if (occ[0] > 0) {
      const double n0 = occ[0];
      for (std::size_t a = 0; a < n; ++a) {
        if (occ[a] == 0) continue;
        for (std::size_t b = 0; b < n; ++b) {
          const double j = J(a, b);
          if (b == a || j == 0.0) continue;
          const auto hop = basis.hop(k, a, b);
          if (!hop) continue;
          const Complex v = j * hop->second * n0 * std::conj(psi[hop->first]) * pk;
          out.term_I[a] += v;
          out.term_I[b] -= v;
        }
      }
    }
    // Term II: hops into and out of the origin, weighted by n_z afterwards.
    for (std::size_t x = 1; x < n; ++x) {
      const double j = J(x, 0);
      if (j == 0.0) continue;
      for (int dir = 0; dir < 2; ++dir) {
        const auto hop = dir == 0 ? basis.hop(k, 0, x) : basis.hop(k, x, 0);
        if (!hop) continue;
        const Complex v = (dir == 0 ? 1.0 : -1.0) * j * hop->second *
                          std::conj(psi[hop->first]) * pk;
        const auto after = basis.occupations(hop->first);
        for (std::size_t z = 0; z < n; ++z)
          if (after[z] != 0) out.term_II[z] += static_cast<double>(after[z]) * v;
      }
    }
  }
  return out;
}

CommutatorTerms commutator_terms(const HoppingMatrix& J, const ScaledCutoff& sc,
                                 double t, const StateVector& psi,
                                 const FockBasis& basis) {
  const auto w = astlo_weights(sc, AstloVariant::Chi, t, basis.lattice());
  const auto dens = commutator_densities(J, psi, basis);
  CommutatorTerms terms{{0.0, 0.0}, {0.0, 0.0}};
  for (std::size_t z = 0; z < w.size(); ++z) {
    terms.term_I += w[z] * dens.term_I[z];
    terms.term_II += w[z] * dens.term_II[z];
  }
  return terms;
}

Complex sparse_commutator_expectation(const SparseOperator& H,
                                      const AstloObservable& A,
                                      const StateVector& psi) {
  const auto a = A.as_operator();
  return Complex(0.0, 1.0) * expectation(commutator(H, a), psi);
}

double heisenberg_derivative(const SparseOperator& H, const ScaledCutoff& sc,
                             double t, const StateVector& psi,
                             const FockBasis& basis) {
  require_match(psi, basis);
  const auto A = build_astlo(sc, AstloVariant::Chi, t, basis);
  const auto Ap = build_astlo(sc, AstloVariant::ChiPrime, t, basis);
  const StateVector phi = H.apply(psi);
  return -(sc.params.v_tilde / sc.params.s) * Ap.expectation(psi) +
         diagonal_commutator(A.diagonal(), psi, phi);
}

double cauchy_schwarz_residual(const StateVector& psi, const FockBasis& basis,
                               const std::vector<double>& pairs) {
  require_match(psi, basis);
  const std::size_t n = basis.sites();
  if (pairs.size() != n * n) fail(ErrorKind::DimensionMismatch, "pair matrix has wrong size");
  // G(x, y) = <b_0^dag n_y b_x>.
  std::vector<Complex> G(n * n, Complex{0.0, 0.0});
  double n0 = 0.0;
  for (std::size_t k = 0; k < basis.dim(); ++k) n0 += std::norm(psi[k]) * basis.occupation(k, 0);
  for (std::size_t y = 0; y < n; ++y) G[y] = pairs[y] - (y == 0 ? n0 : 0.0);
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const Complex pk = psi[k];
    if (pk == Complex{0.0, 0.0}) continue;
    const auto occ = basis.occupations(k);
    for (std::size_t x = 1; x < n; ++x) {
      const auto hop = basis.hop(k, x, 0);
      if (!hop) continue;
      const Complex v = hop->second * std::conj(psi[hop->first]) * pk;
      for (std::size_t y = 0; y < n; ++y) {
        const int ny = occ[y] - (y == x ? 1 : 0);
        if (ny != 0) G[x * n + y] += static_cast<double>(ny) * v;
      }
    }
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const double bound = std::sqrt(std::max(0.0, pairs[y]) * std::max(0.0, pairs[x * n + y]));
      worst = std::max(worst, std::abs(G[x * n + y]) - bound);
    }
  return worst;
}

void write_profile_csv(std::ostream& os,
                       const std::vector<CorrelationProfile>& profiles) {
  os << "t,x,value\n";
  for (const auto& p : profiles)
    for (std::size_t x = 0; x < p.values.size(); ++x)
      os << format_double(p.t) << ',' << x << ',' << format_double(p.values[x]) << '\n';
}

}  // namespace bhastlo
