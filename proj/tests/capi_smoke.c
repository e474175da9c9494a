/* Copyright 2026 The twistlab Authors
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* The header compiles as C and the library links from a C program. */

#include <stdio.h>

#include "twistlab/twistlab.h"

int main(void) {
  twl_matrix* a = NULL;
  twl_weights* w = NULL;
  twl_exec ex = twl_exec_default();
  double value = 0;
  twl_witness wit;
  if (twl_matrix_load("golden", &a) != TWL_OK) return 1;
  if (twl_weights_parse(NULL, 1, &w) != TWL_OK) return 1;
  if (twl_badness(a, w, w, twl_real(100), twl_real(10000), &ex, &value, &wit) != TWL_OK) return 1;
  printf("badness %.6f at q = %lld\n", value, (long long)wit.q[0]);
  twl_weights_free(w);
  twl_matrix_free(a);
  return value > 0.43 && value < 0.46 ? 0 : 1;
}
