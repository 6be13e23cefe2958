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

#include "dualmpc/kv_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "dualmpc/error.hpp"

namespace dualmpc {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& token, const std::string& what) {
  if (token == "inf" || token == "+inf") return HUGE_VAL;
  if (token == "-inf") return -HUGE_VAL;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigParse, what + ": '" + token + "' is not a number");
  }
  if (used != token.size()) {
    throw Error(ErrorCode::ConfigParse, what + ": trailing characters in '" + token + "'");
  }
  return v;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& origin) {
  KeyValueConfig cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw Error(ErrorCode::ConfigParse,
                    origin + ":" + std::to_string(lineno) + ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      cfg.data_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigParse,
                  origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorCode::ConfigParse, origin + ":" + std::to_string(lineno) + ": empty key");
    }
    cfg.data_[section].emplace_back(key, trim(line.substr(eq + 1)));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::ConfigParse, "cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path.string());
}

bool KeyValueConfig::has(const std::string& section, const std::string& key) const {
  return get(section, key).has_value();
}

std::optional<std::string> KeyValueConfig::get(const std::string& section,
                                               const std::string& key) const {
  const auto it = data_.find(section);
  if (it == data_.end()) return std::nullopt;
  // Last occurrence wins for scalar lookups.
  for (auto e = it->second.rbegin(); e != it->second.rend(); ++e) {
    if (e->first == key) return e->second;
  }
  return std::nullopt;
}

std::vector<std::string> KeyValueConfig::all(const std::string& section,
                                             const std::string& key) const {
  std::vector<std::string> out;
  const auto it = data_.find(section);
  if (it == data_.end()) return out;
  for (const auto& [k, v] : it->second) {
    if (k == key) out.push_back(v);
  }
  return out;
}

double KeyValueConfig::get_double(const std::string& section, const std::string& key,
                                  double fallback) const {
  const auto v = get(section, key);
  return v ? parse_number(*v, origin_ + ": [" + section + "] " + key) : fallback;
}

int KeyValueConfig::get_int(const std::string& section, const std::string& key,
                            int fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  const double d = parse_number(*v, origin_ + ": [" + section + "] " + key);
  if (d != std::floor(d)) {
    throw Error(ErrorCode::ConfigParse, origin_ + ": [" + section + "] " + key + " must be an integer");
  }
  return static_cast<int>(d);
}

std::string KeyValueConfig::get_string(const std::string& section, const std::string& key,
                                       const std::string& fallback) const {
  return get(section, key).value_or(fallback);
}

bool KeyValueConfig::get_bool(const std::string& section, const std::string& key,
                              bool fallback) const {
  const auto v = get(section, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw Error(ErrorCode::ConfigParse, origin_ + ": [" + section + "] " + key + ": not a boolean");
}

std::vector<double> KeyValueConfig::numbers(const std::string& value, const std::string& what) {
  std::istringstream in(value);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_number(tok, what));
  return out;
}

void KeyValueConfig::set(const std::string& section, const std::string& key,
                         const std::string& value) {
  auto& entries = data_[section];
  std::erase_if(entries, [&](const auto& e) { return e.first == key; });
  entries.emplace_back(key, value);
}

std::vector<std::string> KeyValueConfig::sections() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : data_) out.push_back(name);
  return out;
}

std::vector<std::pair<std::string, std::string>> KeyValueConfig::entries(
    const std::string& section) const {
  const auto it = data_.find(section);
  return it == data_.end() ? std::vector<std::pair<std::string, std::string>>{} : it->second;
}

}  // namespace dualmpc
