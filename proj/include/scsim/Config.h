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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace scsim {

// Line-based `key = value` file shared by service configs, element configs
// and plugin manifests. '#' starts a comment; keys are unique per file.
class KeyValueFile {
public:
    static KeyValueFile parse(const std::string& text);
    static KeyValueFile load(const std::string& path);

    bool has(const std::string& key) const;
    std::string get(const std::string& key) const;  // throws BadConfig when missing
    std::string getOr(const std::string& key, const std::string& fallback) const;
    std::optional<std::string> find(const std::string& key) const;
    bool getBool(const std::string& key, bool fallback) const;
    std::vector<std::string> getList(const std::string& key) const;  // comma-separated

    void set(const std::string& key, const std::string& value);
    void erase(const std::string& key);
    std::string render() const;
    void store(const std::string& path) const;

private:
    std::map<std::string, std::string> values_;
    std::vector<std::string> order_;
};

// Resolves `relative` against the directory containing `configPath`.
std::string resolveRelativeTo(const std::string& configPath, const std::string& relative);

std::string readTextFile(const std::string& path);
void writeTextFile(const std::string& path, const std::string& content);

}  // namespace scsim
