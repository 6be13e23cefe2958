/*
 Copyright 2026 The dualmpc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dualmpc {

/// Sectioned key-value text:
///
///   # comment
///   [section]
///   key = value
///
/// Keys before the first header live in section "". A key may repeat
/// (e.g. several `region` lines); `all()` returns every occurrence in order.
class KeyValueConfig {
public:
  static KeyValueConfig parse(const std::string& text, const std::string& origin = "<string>");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  std::vector<std::string> all(const std::string& section, const std::string& key) const;

  double get_double(const std::string& section, const std::string& key, double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

  /// Whitespace-separated numbers of a value ("0 0.5 0").
  static std::vector<double> numbers(const std::string& value, const std::string& what);

  void set(const std::string& section, const std::string& key, const std::string& value);

  std::vector<std::string> sections() const;
  std::vector<std::pair<std::string, std::string>> entries(const std::string& section) const;

  const std::string& origin() const { return origin_; }

private:
  std::string origin_;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> data_;
};

}  // namespace dualmpc
