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

// Exact rational helpers.

#ifndef CIPX_RATIONAL_HPP_
#define CIPX_RATIONAL_HPP_

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace cipx {

using Rational = boost::multiprecision::cpp_rational;

// "n/d", or just "n" when the denominator is 1.
std::string to_string(const Rational& r);
// Always "n/d", the form used by model files.
std::string to_fraction(const Rational& r);
// Accepts "n/d" or "n"; throws on malformed input or a zero denominator.
Rational parse_rational(std::string_view text);

}  // namespace cipx

#endif  // CIPX_RATIONAL_HPP_
