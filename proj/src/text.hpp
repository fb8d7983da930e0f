/*
 * Copyright 2026 The cipx Authors.
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

// String helpers shared by the text readers. Not part of the public API.

#ifndef CIPX_SRC_TEXT_HPP_
#define CIPX_SRC_TEXT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cipx::text {

std::string_view trim(std::string_view s);

// Splits on `sep`, trimming each field. An empty input yields one empty field.
std::vector<std::string> split(std::string_view s, char sep);

// Splits into lines, dropping a trailing '\r' from each.
std::vector<std::string_view> lines(std::string_view s);

// Drops everything from the first '%' on.
std::string_view strip_comment(std::string_view line);

std::string lower(std::string_view s);

bool is_identifier(std::string_view s);  // [A-Za-z_][A-Za-z0-9_]*
bool is_constant(std::string_view s);    // [a-z][A-Za-z0-9_]* or a natural number
std::optional<std::int64_t> parse_int(std::string_view s);

std::string read_file(const std::string& path, const char* module);

}  // namespace cipx::text

#endif  // CIPX_SRC_TEXT_HPP_
