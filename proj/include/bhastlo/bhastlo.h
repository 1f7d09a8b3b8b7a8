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

#ifndef BHASTLO_BHASTLO_H_
#define BHASTLO_BHASTLO_H_

#include <stddef.h>

#if defined(_WIN32)
#  if defined(BHASTLO_BUILDING)
#    define BHASTLO_API __declspec(dllexport)
#  else
#    define BHASTLO_API __declspec(dllimport)
#  endif
#else
#  define BHASTLO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes for the command line tool. */
typedef enum bhastlo_status {
  BHASTLO_OK = 0,
  BHASTLO_HARD_FAILURE = 1,
  BHASTLO_SCHEMA = 2,
  BHASTLO_REGIME = 3,
  BHASTLO_CAPACITY = 4,
  BHASTLO_INTERNAL = 5,
  BHASTLO_INVALID_ARGUMENT = 6,
  BHASTLO_BUFFER_TOO_SMALL = 7
} bhastlo_status;

typedef struct bhastlo_config bhastlo_config;
typedef struct bhastlo_result bhastlo_result;

typedef struct bhastlo_report_info {
  const char* name;
  const char* tier;     /* "hard", "fitted" or "exploratory" */
  const char* verdict;  /* "PASS", "FAIL" or "SKIPPED" */
  double worst_margin;
  size_t row_count;
  size_t constant_count;
} bhastlo_report_info;

typedef struct bhastlo_constants_query {
  int d;
  int L;
  double alpha;
  double cj;
  double v;
  double R;
  double r;
  double lambda;
  double kappa_override; /* negative: use the lattice moment */
} bhastlo_constants_query;

BHASTLO_API const char* bhastlo_version(void);

/* Message of the last failed call on this thread, or "". */
BHASTLO_API const char* bhastlo_last_error(void);

BHASTLO_API bhastlo_status bhastlo_config_load(const char* path, bhastlo_config** out);
BHASTLO_API bhastlo_status bhastlo_config_parse(const char* json_text, bhastlo_config** out);
BHASTLO_API void bhastlo_config_free(bhastlo_config* cfg);
BHASTLO_API bhastlo_status bhastlo_config_set_output_dir(bhastlo_config* cfg, const char* dir);
BHASTLO_API const char* bhastlo_config_output_dir(const bhastlo_config* cfg);

/* Copies the canonical JSON form. *needed receives the size including the
   terminating NUL; buf may be NULL to query it. */
BHASTLO_API bhastlo_status bhastlo_config_canonical(const bhastlo_config* cfg, char* buf,
                                                    size_t capacity, size_t* needed);

/* Both return the run's exit status. *out is set whenever the pipeline was
   entered, including on errors, and must be released. */
BHASTLO_API bhastlo_status bhastlo_run(const bhastlo_config* cfg, bhastlo_result** out);
BHASTLO_API bhastlo_status bhastlo_sweep(const bhastlo_config* cfg, bhastlo_result** out);

BHASTLO_API int bhastlo_result_exit_code(const bhastlo_result* res);
BHASTLO_API const char* bhastlo_result_message(const bhastlo_result* res);
BHASTLO_API const char* bhastlo_result_summary(const bhastlo_result* res);
BHASTLO_API size_t bhastlo_result_report_count(const bhastlo_result* res);
BHASTLO_API bhastlo_status bhastlo_result_report(const bhastlo_result* res, size_t index,
                                                 bhastlo_report_info* out);
BHASTLO_API bhastlo_status bhastlo_result_constant(const bhastlo_result* res, size_t report,
                                                   const char* key, double* out);
BHASTLO_API size_t bhastlo_result_file_count(const bhastlo_result* res);
BHASTLO_API const char* bhastlo_result_file(const bhastlo_result* res, size_t index);
BHASTLO_API void bhastlo_result_free(bhastlo_result* res);

BHASTLO_API void bhastlo_constants_query_init(bhastlo_constants_query* q);

/* Plain-text constants listing, copied like bhastlo_config_canonical. */
BHASTLO_API bhastlo_status bhastlo_constants(const bhastlo_constants_query* q, char* buf,
                                             size_t capacity, size_t* needed);

#ifdef __cplusplus
}
#endif

#endif  /* BHASTLO_BHASTLO_H_ */
