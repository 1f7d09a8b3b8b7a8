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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "bhastlo/config.hpp"
#include "bhastlo/hopping.hpp"
#include "bhastlo/pipeline.hpp"

using namespace bhastlo;
namespace fs = std::filesystem;

namespace {

std::string source(const std::string& rel) { return std::string(BHASTLO_SOURCE_DIR) + "/" + rel; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("bhastlo_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

const CheckReport& find(const RunOutcome& out, const std::string& name) {
  for (const auto& r : out.reports)
    if (r.name == name) return r;
  FAIL("missing report " << name);
  throw;
}

}  // namespace

TEST_CASE("frozen demo run passes and writes every output") {
  auto cfg = load_config(source("configs/frozen.json"));
  const auto dir = scratch("frozen_run");
  cfg.output_dir = dir.string();
  const auto out = run_pipeline(cfg);
  CHECK(out.code == ExitCode::Ok);
  CHECK(out.message.empty());
  CHECK(first_line(dir / "trace.csv") == "t,norm_drift,energy,leakage");
  CHECK(first_line(dir / "profile.csv") == "t,x,value");
  CHECK(first_line(dir / "report.csv") == "check,tier,label,t,lhs,rhs,margin");
  CHECK(slurp(dir / "summary.txt").find("ALL HARD CHECKS PASSED") != std::string::npos);
  for (const auto& entry : fs::directory_iterator(dir))
    CHECK(entry.path().extension() != ".tmp");
  CHECK(find(out, "theorem_bound").constant("C@pair(4,1)") == 0.0);
}

TEST_CASE("identical configs give byte-identical outputs") {
  auto cfg = load_config(source("configs/frozen.json"));
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  cfg.output_dir = a.string();
  REQUIRE(run_pipeline(cfg).code == ExitCode::Ok);
  cfg.output_dir = b.string();
  REQUIRE(run_pipeline(cfg).code == ExitCode::Ok);
  for (const char* f : {"trace.csv", "profile.csv", "report.csv", "summary.txt"}) {
    CAPTURE(f);
    CHECK(slurp(a / f) == slurp(b / f));
  }
}

TEST_CASE("error classes map to exit codes") {
  auto cfg = load_config(source("tests/data/v_equals_2kappa.json"));
  cfg.output_dir = scratch("regime").string();
  auto out = run_pipeline(cfg);
  CHECK(out.code == ExitCode::Regime);
  CHECK(out.message.find("v > 2κ") != std::string::npos);

  cfg = load_config(source("tests/data/capacity.json"));
  cfg.output_dir = scratch("capacity").string();
  out = run_pipeline(cfg);
  CHECK(out.code == ExitCode::Capacity);

  cfg = load_config(source("configs/frozen.json"));
  cfg.radii.clear();
  cfg.output_dir = scratch("no_radii").string();
  CHECK(run_pipeline(cfg).code == ExitCode::Schema);

  cfg = load_config(source("configs/frozen.json"));
  cfg.sweep.reset();
  CHECK(sweep_pipeline(cfg).code == ExitCode::Schema);
}

TEST_CASE("leakage above threshold is a hard failure") {
  auto cfg = load_config(source("tests/data/v_equals_2kappa.json"));
  cfg.v = 1.2;
  cfg.radii = {{2.5, 1.0}};
  cfg.propagator.leakage_threshold = 1e-12;
  cfg.output_dir = scratch("leaky").string();
  const auto out = run_pipeline(cfg);
  CHECK(out.code == ExitCode::HardFailure);
  CHECK(find(out, "truncation_leakage").verdict == Verdict::Fail);
  CHECK(find(out, "geometric_property(R=2.5,r=1)").skipped());
}

TEST_CASE("frozen R ladder sweep") {
  auto cfg = load_config(source("configs/frozen.json"));
  const auto dir = scratch("frozen_sweep");
  cfg.output_dir = dir.string();
  const auto out = sweep_pipeline(cfg);
  CHECK(out.code == ExitCode::Ok);
  const auto& thm = find(out, "theorem_bound");
  CHECK(thm.passed());
  double prev = 0.0;
  for (double g : {1.5, 2.0, 3.0}) {
    const std::string tag = "pair(" + format_short(1.0 + g) + ",1)";
    CHECK(thm.constant("C@" + tag) == 0.0);
    const double S = thm.constant("S@" + tag);
    CHECK(S >= prev);
    prev = S;
  }
  CHECK(find(out, "scaling_exponent").constant("exponent") == 0.0);
  const auto csv = slurp(dir / "sweep_report.csv");
  CHECK(csv.rfind("check,quantity,rung,value\n", 0) == 0);
  CHECK(csv.find("scaling_exponent,exponent,\"all\",0") != std::string::npos);
}

TEST_CASE("constants listing") {
  ConstantsQuery q;
  q.kappa_override = 1.0;
  q.v = 4.0;
  q.R = 10.0;
  q.r = 2.0;
  auto text = constants_report(q);
  CHECK(text.find("v_tilde = 2.5\n") != std::string::npos);
  CHECK(text.find("epsilon = 1.5\n") != std::string::npos);
  CHECK(text.find("s = 2\n") != std::string::npos);

  q = ConstantsQuery{};
  q.alpha = 4.0;
  text = constants_report(q);
  CHECK(text.find("beta = 2\n") != std::string::npos);
  CHECK(text.find("alpha <= 3d + 1") != std::string::npos);

  q = ConstantsQuery{};
  q.L = 16;
  q.alpha = 5.0;
  q.C_J = 1.0;
  text = constants_report(q);
  const TorusLattice lat(1, 16);
  CHECK(text.find("kappa = " + format_short(build_power_law(lat, 1.0, 5.0).moment(1)) + "\n") !=
        std::string::npos);
}

TEST_CASE("atomic write replaces content") {
  const auto dir = scratch("atomic");
  const auto path = (dir / "nested" / "f.txt").string();
  write_file_atomic(path, "one");
  write_file_atomic(path, "two");
  CHECK(slurp(path) == "two");
  CHECK_FALSE(fs::exists(path + ".tmp"));
}
