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

// Shared inputs for the test binaries: the 14-day weather table and its
// trained models.

#ifndef CIPX_TESTS_FIXTURES_HPP_
#define CIPX_TESTS_FIXTURES_HPP_

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cipx/naive_bayes.hpp"
#include "cipx/schema.hpp"

namespace cipx::testing {

inline std::string data_path(const std::string& name) {
  return std::string(CIPX_TEST_DATA_DIR) + "/" + name;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline const Dataset& weather_data() {
  static const Dataset data =
      load_dataset(data_path("weather.csv"), load_schema(data_path("weather.schema")));
  return data;
}

inline const NaiveBayesModel& weather_model() {
  static const NaiveBayesModel model = train(weather_data());
  return model;
}

inline const PercentModel& weather_percent() {
  static const PercentModel model = to_percent(weather_model());
  return model;
}

inline const FeatureSchema& weather_schema() { return weather_model().schema(); }

inline Entity weather_entity() {
  return parse_entity("rain,high,normal,weak", weather_schema());
}

}  // namespace cipx::testing

#endif  // CIPX_TESTS_FIXTURES_HPP_
