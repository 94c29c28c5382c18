/*
 * Copyright 2026 the dplang authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C API of the dplang experiment library.
 *
 * Experiments are configured by a single JSON document (see README for the
 * schema), run behind opaque handles, and rendered as CSV or JSON-lines.
 * Every entry point returns a dplang_status; on failure a human-readable
 * message is available from dplang_last_error() on the calling thread.
 */

#ifndef DPLANG_DPLANG_H_
#define DPLANG_DPLANG_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define DPLANG_API __declspec(dllexport)
#else
#define DPLANG_API __attribute__((visibility("default")))
#endif

typedef enum dplang_status {
  DPLANG_OK = 0,
  DPLANG_ERROR_INTERNAL = 1,
  DPLANG_ERROR_CONFIG = 2,
  DPLANG_ERROR_ASSERTION = 3,
  DPLANG_ERROR_IO = 4,
  DPLANG_ERROR_INVALID_ARGUMENT = 5
} dplang_status;

typedef struct dplang_experiment dplang_experiment;
typedef struct dplang_results dplang_results;

DPLANG_API const char* dplang_version(void);

/* Message describing the most recent failure on this thread. */
DPLANG_API const char* dplang_last_error(void);

/* Parses and validates a JSON configuration document. */
DPLANG_API dplang_status dplang_experiment_create(const char* config_json,
                                                  dplang_experiment** out);
DPLANG_API void dplang_experiment_destroy(dplang_experiment* experiment);

DPLANG_API dplang_status dplang_experiment_run(
    const dplang_experiment* experiment, dplang_results** out);
DPLANG_API void dplang_results_destroy(dplang_results* results);

DPLANG_API dplang_status dplang_results_count(const dplang_results* results,
                                              size_t* out);

/* Renders results as "csv" or "json-lines". The returned string must be
 * released with dplang_string_free. */
DPLANG_API dplang_status dplang_results_render(const dplang_results* results,
                                               const char* format, char** out);
DPLANG_API dplang_status dplang_results_write(const dplang_results* results,
                                              const char* path,
                                              const char* format);
DPLANG_API void dplang_string_free(char* text);

/* 1 when every theoretical-bound / lower-bound / audit check held. */
DPLANG_API dplang_status dplang_results_checks_passed(
    const dplang_results* results, int* out);

#ifdef __cplusplus
}
#endif

#endif /* DPLANG_DPLANG_H_ */
