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
#include <vector>

#include "error.hpp"

namespace clab {

// Field names and cardinalities; defines the categorical input space.
struct FieldSchema {
  struct Field {
    std::string name;
    int cardinality = 0;
  };
  std::vector<Field> fields;

  int n() const { return static_cast<int>(fields.size()); }

  void validate() const {
    if (n() < 2) throw config_error("schema needs at least 2 fields");
    for (const Field& f : fields) {
      if (f.cardinality < 1) {
        throw config_error("field " + f.name + " has cardinality < 1");
      }
    }
  }
};

inline FieldSchema make_schema(const std::vector<int>& cardinalities) {
  FieldSchema s;
  for (std::size_t i = 0; i < cardinalities.size(); ++i) {
    s.fields.push_back({"f" + std::to_string(i), cardinalities[i]});
  }
  return s;
}

}  // namespace clab
