// Copyright 2026 The bassim Authors
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

// Minimal CSV helpers shared by the table, sweep and chart formats. Fields
// never contain commas or quotes, so no quoting is implemented.

#ifndef BASSIM_CSV_HPP_
#define BASSIM_CSV_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bassim::csv {

// Shortest decimal form that round-trips; locale independent.
std::string format_number(double value);
std::string format_number(std::int64_t value);

std::vector<std::string> split_line(std::string_view line);

std::string join(const std::vector<std::string>& fields);

// Throws ParseError tagged with `line_number` on malformed input.
double parse_double(std::string_view field, std::size_t line_number);
std::int64_t parse_int(std::string_view field, std::size_t line_number);

}  // namespace bassim::csv

#endif  // BASSIM_CSV_HPP_
