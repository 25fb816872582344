/*
 * Copyright (C) 2026 The scsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "scsim/Config.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "scsim/Errors.h"

namespace scsim {

namespace {

std::string trim(const std::string& s) {
    size_t first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    size_t last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

KeyValueFile KeyValueFile::parse(const std::string& text) {
    KeyValueFile file;
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::BadConfig,
                        "line " + std::to_string(lineNo) + " is not `key = value`: " + stripped);
        }
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw Error(ErrorCode::BadConfig, "empty key on line " + std::to_string(lineNo));
        }
        file.set(key, value);
    }
    return file;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
    return parse(readTextFile(path));
}

bool KeyValueFile::has(const std::string& key) const { return values_.count(key) > 0; }

std::string KeyValueFile::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
        throw Error(ErrorCode::BadConfig, "missing required key \"" + key + "\"");
    }
    return it->second;
}

std::string KeyValueFile::getOr(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::optional<std::string> KeyValueFile::find(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

bool KeyValueFile::getBool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
    if (it->second == "false" || it->second == "0" || it->second == "no") return false;
    throw Error(ErrorCode::BadConfig, "key \"" + key + "\" is not a boolean: " + it->second);
}

std::vector<std::string> KeyValueFile::getList(const std::string& key) const {
    std::vector<std::string> out;
    auto it = values_.find(key);
    if (it == values_.end()) return out;
    std::istringstream in(it->second);
    std::string elem;
    while (std::getline(in, elem, ',')) {
        std::string stripped = trim(elem);
        if (!stripped.empty()) out.push_back(stripped);
    }
    return out;
}

void KeyValueFile::set(const std::string& key, const std::string& value) {
    if (!values_.count(key)) order_.push_back(key);
    values_[key] = value;
}

void KeyValueFile::erase(const std::string& key) {
    values_.erase(key);
    order_.erase(std::remove(order_.begin(), order_.end(), key), order_.end());
}

std::string KeyValueFile::render() const {
    std::string out;
    for (const std::string& key : order_) {
        out += key + " = " + values_.at(key) + "\n";
    }
    return out;
}

void KeyValueFile::store(const std::string& path) const { writeTextFile(path, render()); }

std::string resolveRelativeTo(const std::string& configPath, const std::string& relative) {
    std::filesystem::path p(relative);
    if (p.is_absolute()) return relative;
    return (std::filesystem::path(configPath).parent_path() / p).string();
}

std::string readTextFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path);
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void writeTextFile(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path);
    }
    out << content;
    if (!out.flush()) {
        throw Error(ErrorCode::IoError, "short write to " + path);
    }
}

}  // namespace scsim
