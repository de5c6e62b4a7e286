/* Copyright (c) 2026 collapse-lab authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

/* C API of the collapse-lab shared library.
 *
 * Every entry point returns a clab_status; on failure a human-readable
 * message is available from clab_last_error() until the next call on the
 * same thread. Status values double as process exit codes: 0 success,
 * 2 usage/config/data problems, 3 runtime numeric failures.
 */

#ifndef COLLAPSELAB_H_
#define COLLAPSELAB_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum clab_status {
  CLAB_OK = 0,
  CLAB_ERROR_CONFIG = 2,
  CLAB_ERROR_RUNTIME = 3
} clab_status;

const char* clab_last_error(void);
const char* clab_version(void);

/* ---- experiment entry points (mirroring the CLI subcommands) ---- */

/* d3_csv / seeds_csv are comma-separated integer lists, e.g. "3,100". */
clab_status clab_toy_run(const char* d3_csv, int steps, const char* seeds_csv,
                         int embedding_size, const char* out_dir);

clab_status clab_train_run(const char* config_path);
clab_status clab_train_run_json(const char* config_json);

clab_status clab_analyze_run(const char* manifest_path, const char* schema_path,
                             const char* out_dir, int split_parts);

/* vary entries look like "K=8,16" or "model.embedding_sets=1,2,4". */
clab_status clab_sweep_run(const char* config_path, const char* const* vary,
                           size_t n_vary, const char* seeds_csv);

/* generator: "toy" or "two-pattern"; params_json may be NULL or "{}". */
clab_status clab_gen_data_run(const char* generator, const char* params_json,
                              const char* out_dir);

/* ---- matrices and collapse metrics ---- */

typedef struct clab_matrix clab_matrix;

clab_matrix* clab_matrix_create(size_t rows, size_t cols, const double* row_major);
clab_matrix* clab_matrix_load(const char* path);
clab_status clab_matrix_save(const clab_matrix* m, const char* path);
void clab_matrix_free(clab_matrix* m);
size_t clab_matrix_rows(const clab_matrix* m);
size_t clab_matrix_cols(const clab_matrix* m);
const double* clab_matrix_data(const clab_matrix* m);

clab_status clab_information_abundance(const clab_matrix* e, double* out);
/* mode: "per-size" or "per-random" */
clab_status clab_normalized_ia(const clab_matrix* e, const char* mode, double* out);
clab_status clab_diversity(const clab_matrix* a, const clab_matrix* b, double* out);

/* Thin SVD; on success *u is rows x k, *sigma is 1 x k (non-increasing) and
 * *v is cols x k. Outputs are freed with clab_matrix_free. */
clab_status clab_svd(const clab_matrix* e, clab_matrix** u, clab_matrix** sigma,
                     clab_matrix** v);

/* Cosines of principal angles between two orthonormal column bases,
 * returned as a 1 x k matrix. */
clab_status clab_principal_angle_cosines(const clab_matrix* u1,
                                         const clab_matrix* u2,
                                         clab_matrix** cosines);

/* Mann-Whitney AUC with tie handling; labels are 0/1. */
clab_status clab_auc(const double* scores, const int* labels, size_t n,
                     double* out);

#ifdef __cplusplus
}
#endif

#endif /* COLLAPSELAB_H_ */
