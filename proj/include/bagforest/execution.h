/*
 * Copyright 2026 The Bagforest Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BAGFOREST_EXECUTION_H_
#define BAGFOREST_EXECUTION_H_

namespace bagforest {

// Every data-parallel kernel has an OpenMP path and a serial reference.
// Both produce bit-identical results.
enum class Execution { kSerial, kParallel };

// Sets the OpenMP team size for subsequent parallel kernels (n <= 0 keeps
// the runtime default).
void SetNumThreads(int n);
int MaxThreads();

}  // namespace bagforest

#endif  // BAGFOREST_EXECUTION_H_
