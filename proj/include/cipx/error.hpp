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

#ifndef CIPX_ERROR_HPP_
#define CIPX_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cipx {

// Every failure raised by the library carries the name of the module that
// detected it, so the CLI can print a one-line diagnostic per module.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message);

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

// Raised by the text readers (programs, queries, constraint and model
// files). `line()` is 1-based; 0 means the position is unknown.
class ParseError : public Error {
 public:
  ParseError(std::string module, std::size_t line, const std::string& message);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cipx

#endif  // CIPX_ERROR_HPP_
