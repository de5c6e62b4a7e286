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

#pragma once

#include <string>

namespace clab {

// Write via a temp file + rename, so interrupted runs never leave a
// truncated report behind. Creates parent directories as needed.
void atomic_write_text(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

void ensure_dir(const std::string& path);

}  // namespace clab
