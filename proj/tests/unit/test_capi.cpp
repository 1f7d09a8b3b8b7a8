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
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"

#include "bhastlo/bhastlo.h"

namespace fs = std::filesystem;

namespace {

std::string source(const std::string& rel) { return std::string(BHASTLO_SOURCE_DIR) + "/" + rel; }

std::string canonical(const bhastlo_config* cfg) {
  size_t needed = 0;
  REQUIRE(bhastlo_config_canonical(cfg, nullptr, 0, &needed) == BHASTLO_OK);
  std::vector<char> buf(needed);
  REQUIRE(bhastlo_config_canonical(cfg, buf.data(), buf.size(), &needed) == BHASTLO_OK);
  return buf.data();
}

}  // namespace

TEST_CASE("config handles") {
  bhastlo_config* cfg = nullptr;
  REQUIRE(bhastlo_config_load(source("configs/frozen.json").c_str(), &cfg) == BHASTLO_OK);
  const std::string text = canonical(cfg);
  CHECK(text.find("\"name\": \"frozen\"") != std::string::npos);

  char tiny[4];
  size_t needed = 0;
  CHECK(bhastlo_config_canonical(cfg, tiny, sizeof tiny, &needed) == BHASTLO_BUFFER_TOO_SMALL);
  CHECK(needed == text.size() + 1);

  bhastlo_config* again = nullptr;
  REQUIRE(bhastlo_config_parse(text.c_str(), &again) == BHASTLO_OK);
  CHECK(canonical(again) == text);
  bhastlo_config_free(again);

  CHECK(bhastlo_config_set_output_dir(cfg, "elsewhere") == BHASTLO_OK);
  CHECK(std::string(bhastlo_config_output_dir(cfg)) == "elsewhere");
  bhastlo_config_free(cfg);
}

TEST_CASE("errors carry status and message") {
  bhastlo_config* cfg = nullptr;
  CHECK(bhastlo_config_parse("{\"schema_version\": 9}", &cfg) == BHASTLO_SCHEMA);
  CHECK(cfg == nullptr);
  CHECK(std::strlen(bhastlo_last_error()) > 0);
  CHECK(bhastlo_config_load("/nonexistent/config.json", &cfg) == BHASTLO_SCHEMA);
  CHECK(bhastlo_config_parse(nullptr, &cfg) == BHASTLO_INVALID_ARGUMENT);
  CHECK(bhastlo_run(nullptr, nullptr) == BHASTLO_INVALID_ARGUMENT);
  bhastlo_config_free(nullptr);
  bhastlo_result_free(nullptr);
}

TEST_CASE("run through the C interface") {
  bhastlo_config* cfg = nullptr;
  REQUIRE(bhastlo_config_load(source("configs/frozen.json").c_str(), &cfg) == BHASTLO_OK);
  const auto dir = fs::temp_directory_path() / "bhastlo_capi_run";
  fs::remove_all(dir);
  bhastlo_config_set_output_dir(cfg, dir.string().c_str());
  bhastlo_result* res = nullptr;
  CHECK(bhastlo_run(cfg, &res) == BHASTLO_OK);
  REQUIRE(res != nullptr);
  CHECK(bhastlo_result_exit_code(res) == 0);
  CHECK(std::string(bhastlo_result_summary(res)).find("ALL HARD CHECKS PASSED") !=
        std::string::npos);
  CHECK(bhastlo_result_file_count(res) == 4);
  CHECK(fs::exists(bhastlo_result_file(res, 0)));
  CHECK(bhastlo_result_file(res, 99) == nullptr);

  bool found = false;
  for (size_t i = 0; i < bhastlo_result_report_count(res); ++i) {
    bhastlo_report_info info;
    REQUIRE(bhastlo_result_report(res, i, &info) == BHASTLO_OK);
    if (std::string(info.name) != "theorem_bound") continue;
    found = true;
    CHECK(std::string(info.tier) == "fitted");
    CHECK(std::string(info.verdict) == "PASS");
    double c = -1.0;
    CHECK(bhastlo_result_constant(res, i, "C@pair(4,1)", &c) == BHASTLO_OK);
    CHECK(c == 0.0);
    CHECK(bhastlo_result_constant(res, i, "nope", &c) == BHASTLO_INVALID_ARGUMENT);
  }
  CHECK(found);
  bhastlo_report_info info;
  CHECK(bhastlo_result_report(res, 1000, &info) == BHASTLO_INVALID_ARGUMENT);
  bhastlo_result_free(res);
  bhastlo_config_free(cfg);
}

TEST_CASE("regime failure still yields a result") {
  bhastlo_config* cfg = nullptr;
  REQUIRE(bhastlo_config_load(source("tests/data/v_equals_2kappa.json").c_str(), &cfg) ==
          BHASTLO_OK);
  bhastlo_result* res = nullptr;
  CHECK(bhastlo_run(cfg, &res) == BHASTLO_REGIME);
  REQUIRE(res != nullptr);
  CHECK(std::string(bhastlo_result_message(res)).find("v > 2κ") != std::string::npos);
  CHECK(bhastlo_result_file_count(res) == 0);
  bhastlo_result_free(res);
  bhastlo_config_free(cfg);
}

TEST_CASE("constants through the C interface") {
  bhastlo_constants_query q;
  bhastlo_constants_query_init(&q);
  q.kappa_override = 1.0;
  q.v = 4.0;
  q.R = 10.0;
  q.r = 2.0;
  size_t needed = 0;
  REQUIRE(bhastlo_constants(&q, nullptr, 0, &needed) == BHASTLO_OK);
  std::vector<char> buf(needed);
  REQUIRE(bhastlo_constants(&q, buf.data(), buf.size(), &needed) == BHASTLO_OK);
  const std::string text = buf.data();
  CHECK(text.find("s = 2\n") != std::string::npos);
  q.L = 1;
  CHECK(bhastlo_constants(&q, nullptr, 0, &needed) == BHASTLO_SCHEMA);
}
