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

#include <cmath>

#include "doctest.h"

#include "bhastlo/cutoff.hpp"
#include "bhastlo/error.hpp"

using namespace bhastlo;

TEST_CASE("standard cutoff values") {
  const double eps = 0.15;
  const auto f = make_standard_cutoff(eps);
  CHECK(f(eps / 2.0) == 0.0);
  CHECK(f(eps) == 1.0);
  CHECK(f(-3.0) == 0.0);
  CHECK(f(4.0) == 1.0);
  CHECK(f(0.75 * eps) == doctest::Approx(0.5).epsilon(1e-13));
  // Independent high-precision quadrature of the normalized bump.
  const auto at = [&](double w) { return eps / 2.0 * (1.0 + w); };
  CHECK(f(at(0.2)) == doctest::Approx(0.00841890239460498719).epsilon(1e-12));
  CHECK(f(at(0.7)) == doctest::Approx(0.920935093501876864).epsilon(1e-12));
  CHECK(f(at(0.9)) == doctest::Approx(0.999981902134696145).epsilon(1e-12));
  CHECK(f.derivative(at(0.2)) == doctest::Approx(3.66143768398454549).epsilon(1e-12));
  CHECK(f.derivative(eps / 2.0) == 0.0);
  CHECK(f.derivative(eps) == 0.0);
  const double h = 1e-9;
  CHECK(f(eps / 2.0 + h) / h < 1e-12);
  CHECK((1.0 - f(eps - h)) / h < 1e-12);
  CHECK_THROWS_AS(make_standard_cutoff(0.0), Error);
  CHECK_THROWS_AS(make_standard_cutoff(-1.0), Error);
}

TEST_CASE("literal bump sharpness reproduces the unnormalized formula") {
  const double eps = 1.5;
  const auto f = make_standard_cutoff(eps, 4.0 / (eps * eps));
  const double u = 1.0, u2 = 1.2;
  const auto g = [&](double x) { return std::exp(-1.0 / ((x - eps / 2) * (eps - x))); };
  CHECK(f.derivative(u) / f.derivative(u2) == doctest::Approx(g(u) / g(u2)).epsilon(1e-12));
  CHECK(f(0.75 * eps) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("class certificate") {
  for (double eps : {0.15, 1.5}) {
    const auto report = verify_class_membership(make_standard_cutoff(eps), 10000);
    CHECK(report.passed());
    CHECK(report.worst_margin >= -1e-12);
  }
  CHECK(verify_class_membership(make_standard_cutoff(0.15), 50).verdict == Verdict::Fail);
}

TEST_CASE("hard step fails the smoothness proxy") {
  const double eps = 0.2;
  CutoffFunction step(
      eps, "step", [eps](double u) { return u >= 0.75 * eps ? 1.0 : 0.0; },
      [](double) { return 0.0; }, [](double) { return 0.0; });
  const auto report = verify_class_membership(step, 1000);
  CHECK(report.verdict == Verdict::Fail);
}

TEST_CASE("linear ramp fails the derivative consistency clause") {
  const double eps = 0.2;
  CutoffFunction ramp(
      eps, "ramp",
      [eps](double u) { return std::clamp((u - eps / 2) / (eps / 2), 0.0, 1.0); },
      [](double) { return 0.0; }, [](double) { return 0.0; });
  CHECK(verify_class_membership(ramp, 1000).verdict == Verdict::Fail);
}

TEST_CASE("velocity parameters") {
  const auto p = velocity_params(4.0, 1.0, 10.0, 2.0);
  CHECK(p.v_tilde == 2.5);
  CHECK(p.epsilon == 1.5);
  CHECK(p.s == 2.0);
  CHECK_THROWS_AS(velocity_params(2.0, 1.0, 10.0, 2.0), Error);
  CHECK_THROWS_AS(velocity_params(4.0, 1.0, 6.0, 2.0), Error);
  CHECK_THROWS_AS(velocity_params(4.0, 1.0, 2.0, 2.0), Error);
  CHECK_THROWS_AS(velocity_params(4.0, 1.0, 10.0, -1.0), Error);
  CHECK_THROWS_AS(velocity_params(0.5, 0.1, 1.0, 0.0), Error);
  try {
    velocity_params(2.0, 1.0, 10.0, 2.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Regime);
    CHECK(std::string(e.what()).find("v > 2κ") != std::string::npos);
  }
}

TEST_CASE("scaled cutoff") {
  const auto p = velocity_params(0.4, 0.1, 6.0, 1.0);
  const ScaledCutoff sc(make_standard_cutoff(p.epsilon), p);
  TorusLattice line(1, 16);
  for (int i = 0; i <= 100; ++i) {
    const double t = p.s * i / 100.0;
    CHECK(eval_scaled_prime(sc, t, line.origin(), line) == 0.0);
    CHECK(sc.chi(t, p.r) == 1.0);
    CHECK(sc.chi(t, p.R - p.v_tilde * t - 0.5 * p.epsilon * p.s) == 0.0);
    for (std::size_t x = 0; x < line.site_count(); ++x) {
      const double w = eval_scaled(sc, t, line.site_at(x), line);
      CHECK(w >= 0.0);
      CHECK(w <= 1.0);
    }
  }
  // Depends on (R, t, |x|) only through the argument.
  const auto q = velocity_params(0.4, 0.1, 7.0, 2.0);
  const ScaledCutoff sq(make_standard_cutoff(q.epsilon), q);
  CHECK(sq.chi(0.0, 4.3) == sc.chi(0.0, 3.3));
}

TEST_CASE("chain rule converges at second order") {
  const auto p = velocity_params(0.4, 0.1, 6.0, 1.0);
  const ScaledCutoff sc(make_standard_cutoff(p.epsilon), p);
  const double x = 4.05, t = 2.0;
  const double exact = -(p.v_tilde / p.s) * sc.chi_prime(t, x);
  REQUIRE(std::abs(exact) > 1e-3);
  auto err = [&](double dt) {
    return std::abs((sc.chi(t + dt, x) - sc.chi(t - dt, x)) / (2 * dt) - exact);
  };
  const double slope = std::log2(err(0.02) / err(0.01));
  CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("combined cutoffs") {
  const auto f = make_standard_cutoff(0.3);
  const auto c = combine_cutoffs(f, f);
  CHECK(c.C_tilde == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(c.worst_margin >= -1e-12);
  CHECK(verify_class_membership(c.f3, 10000).passed());
  const auto fine = combine_cutoffs(f, f, 40000);
  CHECK(std::abs(fine.C_tilde - c.C_tilde) <= 0.01 * c.C_tilde);

  const auto sharp = make_standard_cutoff(0.3, 3.0);
  const auto mixed = combine_cutoffs(f, sharp);
  CHECK(std::isfinite(mixed.C_tilde));
  CHECK(mixed.worst_margin >= -1e-12);
  CHECK_THROWS_AS(combine_cutoffs(f, make_standard_cutoff(0.2)), Error);
}
