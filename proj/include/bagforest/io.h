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

#ifndef BAGFOREST_IO_H_
#define BAGFOREST_IO_H_

#include <filesystem>
#include <string>

namespace bagforest {

std::string ReadFile(const std::filesystem::path& path);

// Writes to a sibling temporary and renames it into place, so readers never
// observe a partially written file.
void WriteFileAtomic(const std::filesystem::path& path,
                     const std::string& content);

// Lower-case hex SHA-256 of a file's bytes.
std::string Sha256File(const std::filesystem::path& path);

}  // namespace bagforest

#endif  // BAGFOREST_IO_H_
