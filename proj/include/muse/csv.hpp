// Copyright 2026 The Muse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace muse::csv {

using Row = std::vector<std::string>;

// RFC 4180 quoting: fields containing comma, quote, CR or LF are quoted.
std::string escape(std::string_view field);
std::string format_row(const Row& row);

// Round-trip formatting for reals (shortest representation that parses back
// to the same double).
std::string format_double(double v);
double parse_double(std::string_view s);

struct Table {
  Row header;
  std::vector<Row> rows;

  // Column index by name; throws FormatError when absent.
  size_t column(std::string_view name) const;
};

std::string write(const Table& table);
Table parse(std::string_view text);

}  // namespace muse::csv
