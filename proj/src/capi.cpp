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

#include "bhastlo/bhastlo.h"

#include <cstring>
#include <new>
#include <string>

#include "bhastlo/config.hpp"
#include "bhastlo/error.hpp"
#include "bhastlo/pipeline.hpp"

struct bhastlo_config {
  bhastlo::RunConfig cfg;
};

struct bhastlo_result {
  bhastlo::RunOutcome outcome;
};

namespace {

thread_local std::string g_last_error;

bhastlo_status set_error(bhastlo_status status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

bhastlo_status from_exit(bhastlo::ExitCode code) {
  return static_cast<bhastlo_status>(static_cast<int>(code));
}

template <class Body>
bhastlo_status guard(Body&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const bhastlo::Error& e) {
    return set_error(from_exit(bhastlo::exit_code_for(e.kind())), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(BHASTLO_CAPACITY, "out of memory");
  } catch (const std::exception& e) {
    return set_error(BHASTLO_INTERNAL, e.what());
  } catch (...) {
    return set_error(BHASTLO_INTERNAL, "unknown exception");
  }
}

bhastlo_status copy_out(const std::string& s, char* buf, size_t capacity, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (!buf) return BHASTLO_OK;
  if (capacity < s.size() + 1) return set_error(BHASTLO_BUFFER_TOO_SMALL, "buffer too small");
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return BHASTLO_OK;
}

bhastlo_status execute(const bhastlo_config* cfg, bhastlo_result** out, bool sweep) {
  if (!cfg || !out) return set_error(BHASTLO_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    auto* res = new bhastlo_result{sweep ? bhastlo::sweep_pipeline(cfg->cfg)
                                         : bhastlo::run_pipeline(cfg->cfg)};
    *out = res;
    if (!res->outcome.message.empty()) g_last_error = res->outcome.message;
    return from_exit(res->outcome.code);
  });
}

}  // namespace

extern "C" {

const char* bhastlo_version(void) { return "1.0.0"; }

const char* bhastlo_last_error(void) { return g_last_error.c_str(); }

bhastlo_status bhastlo_config_load(const char* path, bhastlo_config** out) {
  if (!path || !out) return set_error(BHASTLO_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    *out = new bhastlo_config{bhastlo::load_config(path)};
    return BHASTLO_OK;
  });
}

bhastlo_status bhastlo_config_parse(const char* json_text, bhastlo_config** out) {
  if (!json_text || !out) return set_error(BHASTLO_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    *out = new bhastlo_config{bhastlo::parse_config(json_text)};
    return BHASTLO_OK;
  });
}

void bhastlo_config_free(bhastlo_config* cfg) { delete cfg; }

bhastlo_status bhastlo_config_set_output_dir(bhastlo_config* cfg, const char* dir) {
  if (!cfg || !dir) return set_error(BHASTLO_INVALID_ARGUMENT, "null argument");
  cfg->cfg.output_dir = dir;
  return BHASTLO_OK;
}

const char* bhastlo_config_output_dir(const bhastlo_config* cfg) {
  return cfg ? cfg->cfg.output_dir.c_str() : "";
}

bhastlo_status bhastlo_config_canonical(const bhastlo_config* cfg, char* buf, size_t capacity,
                                        size_t* needed) {
  if (!cfg) return set_error(BHASTLO_INVALID_ARGUMENT, "null argument");
  return guard([&] { return copy_out(bhastlo::canonical_json(cfg->cfg), buf, capacity, needed); });
}

bhastlo_status bhastlo_run(const bhastlo_config* cfg, bhastlo_result** out) {
  return execute(cfg, out, false);
}

bhastlo_status bhastlo_sweep(const bhastlo_config* cfg, bhastlo_result** out) {
  return execute(cfg, out, true);
}

int bhastlo_result_exit_code(const bhastlo_result* res) {
  return res ? static_cast<int>(res->outcome.code) : BHASTLO_INVALID_ARGUMENT;
}

const char* bhastlo_result_message(const bhastlo_result* res) {
  return res ? res->outcome.message.c_str() : "";
}

const char* bhastlo_result_summary(const bhastlo_result* res) {
  return res ? res->outcome.summary.c_str() : "";
}

size_t bhastlo_result_report_count(const bhastlo_result* res) {
  return res ? res->outcome.reports.size() : 0;
}

bhastlo_status bhastlo_result_report(const bhastlo_result* res, size_t index,
                                     bhastlo_report_info* out) {
  if (!res || !out) return set_error(BHASTLO_INVALID_ARGUMENT, "null argument");
  if (index >= res->outcome.reports.size())
    return set_error(BHASTLO_INVALID_ARGUMENT, "report index out of range");
  const auto& r = res->outcome.reports[index];
  out->name = r.name.c_str();
  out->tier = bhastlo::to_string(r.tier);
  out->verdict = bhastlo::to_string(r.verdict);
  out->worst_margin = r.worst_margin;
  out->row_count = r.rows.size();
  out->constant_count = r.constants.size();
  return BHASTLO_OK;
}

bhastlo_status bhastlo_result_constant(const bhastlo_result* res, size_t report, const char* key,
                                       double* out) {
  if (!res || !key || !out) return set_error(BHASTLO_INVALID_ARGUMENT, "null argument");
  if (report >= res->outcome.reports.size())
    return set_error(BHASTLO_INVALID_ARGUMENT, "report index out of range");
  for (const auto& [k, v] : res->outcome.reports[report].constants)
    if (k == key) {
      *out = v;
      return BHASTLO_OK;
    }
  return set_error(BHASTLO_INVALID_ARGUMENT, std::string("no constant named ") + key);
}

size_t bhastlo_result_file_count(const bhastlo_result* res) {
  return res ? res->outcome.written.size() : 0;
}

const char* bhastlo_result_file(const bhastlo_result* res, size_t index) {
  if (!res || index >= res->outcome.written.size()) return nullptr;
  return res->outcome.written[index].c_str();
}

void bhastlo_result_free(bhastlo_result* res) { delete res; }

void bhastlo_constants_query_init(bhastlo_constants_query* q) {
  if (!q) return;
  const bhastlo::ConstantsQuery d;
  *q = bhastlo_constants_query{d.d, d.L, d.alpha, d.C_J, d.v, d.R, d.r, d.lambda, d.kappa_override};
}

bhastlo_status bhastlo_constants(const bhastlo_constants_query* q, char* buf, size_t capacity,
                                 size_t* needed) {
  if (!q) return set_error(BHASTLO_INVALID_ARGUMENT, "null argument");
  return guard([&] {
    const bhastlo::ConstantsQuery cq{q->d, q->L, q->alpha, q->cj, q->v, q->R, q->r, q->lambda,
                                     q->kappa_override};
    return copy_out(bhastlo::constants_report(cq), buf, capacity, needed);
  });
}

}  // extern "C"
