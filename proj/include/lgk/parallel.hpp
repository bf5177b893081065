/*
 * Copyright (C) 2026 lgkit contributors
 *
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

#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lgk {

/// Execution policy for the data-parallel kernels (warp, aggregate, render).
/// Serial is the reference path; Parallel must produce bit-identical results
/// (every cell is written exactly once, no reductions across iterations).
enum class Exec { Serial, Parallel };

/// Worker count for Exec::Parallel. Reads LGK_THREADS once per process;
/// 0 or unset means one thread per hardware core.
int thread_count();

/// Runs body(i) for i in [0, count). Iterations must be independent.
template <class Fn>
void for_each_index(int count, Exec exec, Fn&& body) {
  if (exec == Exec::Parallel) {
    const int threads = thread_count();
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
    for (int i = 0; i < count; ++i) {
      body(i);
    }
  } else {
    for (int i = 0; i < count; ++i) {
      body(i);
    }
  }
}

}  // namespace lgk
