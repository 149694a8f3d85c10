// Copyright 2026 The altlearn Authors. All Rights Reserved.
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

#ifndef ALTLEARN_KEY_VALUE_HPP_
#define ALTLEARN_KEY_VALUE_HPP_

// Plain-text "key = value" documents used for stream specs and experiment
// configs. '#' starts a comment; blank lines are ignored; keys are unique.

#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace altlearn {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class KeyValues {
 public:
  static KeyValues parse(std::istream& in) {
    KeyValues kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
      if (!kv.values_.emplace(key, value).second) {
        throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
      }
    }
    return kv;
  }

  static KeyValues parse(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::string& raw(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
    return it->second;
  }

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

  const std::map<std::string, std::string>& entries() const { return values_; }

  std::string get_string(const std::string& key) const { return raw(key); }

  double get_double(const std::string& key) const { return to_double(key, raw(key)); }

  long long get_int(const std::string& key) const { return to_int(key, raw(key)); }

  std::uint64_t get_u64(const std::string& key) const {
    const std::string& v = raw(key);
    std::size_t pos = 0;
    try {
      if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
      const auto out = std::stoull(v, &pos);
      if (pos == v.size()) return out;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': expected an unsigned integer, got '" + v + "'");
  }

  bool get_bool(const std::string& key) const {
    const std::string& v = raw(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
  }

  std::vector<double> get_doubles(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split(raw(key))) out.push_back(to_double(key, item));
    return out;
  }

  std::vector<long long> get_ints(const std::string& key) const {
    std::vector<long long> out;
    for (const auto& item : split(raw(key))) out.push_back(to_int(key, item));
    return out;
  }

  std::vector<std::string> get_strings(const std::string& key) const { return split(raw(key)); }

  static std::vector<std::string> split(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  static double to_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    try {
      const double out = std::stod(v, &pos);
      if (pos == v.size()) return out;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }

  static long long to_int(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    try {
      const long long out = std::stoll(v, &pos);
      if (pos == v.size()) return out;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  }

  std::map<std::string, std::string> values_;
};

}  // namespace altlearn

#endif  // ALTLEARN_KEY_VALUE_HPP_
