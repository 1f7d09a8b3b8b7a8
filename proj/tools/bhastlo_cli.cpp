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

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bhastlo/bhastlo.h"

namespace {

int fail_with(int status, const std::string& what) {
  std::cerr << "bhastlo: " << what << '\n';
  return status;
}

int execute(const std::string& path, bool sweep) {
  bhastlo_config* cfg = nullptr;
  int status = bhastlo_config_load(path.c_str(), &cfg);
  if (status != BHASTLO_OK) return fail_with(status, bhastlo_last_error());
  if (const char* dir = std::getenv("BHASTLO_OUT_DIR"); dir && *dir)
    bhastlo_config_set_output_dir(cfg, dir);

  bhastlo_result* res = nullptr;
  status = sweep ? bhastlo_sweep(cfg, &res) : bhastlo_run(cfg, &res);
  bhastlo_config_free(cfg);
  if (!res) return fail_with(status, bhastlo_last_error());
  const std::string message = bhastlo_result_message(res);
  std::cout << bhastlo_result_summary(res);
  for (size_t i = 0; i < bhastlo_result_file_count(res); ++i)
    std::cout << "wrote " << bhastlo_result_file(res, i) << '\n';
  bhastlo_result_free(res);
  if (!message.empty()) return fail_with(status, message);
  return status;
}

int constants(const bhastlo_constants_query& q) {
  size_t needed = 0;
  int status = bhastlo_constants(&q, nullptr, 0, &needed);
  if (status != BHASTLO_OK) return fail_with(status, bhastlo_last_error());
  std::vector<char> buf(needed);
  status = bhastlo_constants(&q, buf.data(), buf.size(), &needed);
  if (status != BHASTLO_OK) return fail_with(status, bhastlo_last_error());
  std::cout << buf.data();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bose-Hubbard ASTLO simulator and inequality verifier"};
  app.set_version_flag("--version", std::string(bhastlo_version()));
  app.require_subcommand(1);

  std::string run_path;
  auto* run = app.add_subcommand("run", "evolve one configuration and verify it");
  run->add_option("config", run_path, "JSON run configuration")->required();

  std::string sweep_path;
  auto* sweep = app.add_subcommand("sweep", "expand and verify a configuration's sweep rule");
  sweep->add_option("config", sweep_path, "JSON run configuration with a sweep block")->required();

  bhastlo_constants_query q;
  bhastlo_constants_query_init(&q);
  double kappa = -1.0;
  auto* cons = app.add_subcommand("constants", "print derived constants and preconditions");
  cons->add_option("--d", q.d, "lattice dimension")->capture_default_str();
  cons->add_option("--L", q.L, "lattice side")->capture_default_str();
  cons->add_option("--alpha", q.alpha, "hopping decay exponent")->capture_default_str();
  cons->add_option("--cj", q.cj, "hopping amplitude C_J")->capture_default_str();
  cons->add_option("--v", q.v, "velocity")->capture_default_str();
  cons->add_option("--R", q.R, "outer radius")->capture_default_str();
  cons->add_option("--r", q.r, "inner radius")->capture_default_str();
  cons->add_option("--lambda", q.lambda, "density constant")->capture_default_str();
  cons->add_option("--kappa", kappa, "use this kappa instead of the lattice moment");

  CLI11_PARSE(app, argc, argv);

  if (*run) return execute(run_path, false);
  if (*sweep) return execute(sweep_path, true);
  q.kappa_override = kappa;
  return constants(q);
}
