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

#ifndef BAGFOREST_MODEL_IO_H_
#define BAGFOREST_MODEL_IO_H_

#include <filesystem>
#include <string>

#include "bagforest/forest.h"

namespace bagforest {

inline constexpr int kModelFormatVersion = 1;

// Versioned JSON model document. Doubles are written in shortest
// round-trip form, so Load(Save(m)) == m exactly.
std::string ModelToJson(const ForestModel& m);
// Throws DataError for malformed documents or an unsupported version and
// InvariantError for structurally corrupt trees.
ForestModel ModelFromJson(const std::string& text);

void SaveModel(const ForestModel& m, const std::filesystem::path& path);
ForestModel LoadModel(const std::filesystem::path& path);

std::string ToString(DepthRule rule);

}  // namespace bagforest

#endif  // BAGFOREST_MODEL_IO_H_
