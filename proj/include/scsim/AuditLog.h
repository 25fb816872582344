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

#include <fstream>
#include <mutex>
#include <string>
#include <vector>

namespace scsim {

// Append-only event log. Every terminal contract call, enforcer verdict,
// gateway invocation and loader event lands here; tests and the demo
// verdicts cross-check against it.
class AuditLog {
public:
    AuditLog() = default;

    void attachFile(const std::string& path);

    void log(const std::string& event, const std::string& detail);

    std::vector<std::string> entries() const;
    size_t count(const std::string& prefix) const;

private:
    mutable std::mutex mutex_;
    std::vector<std::string> entries_;
    std::ofstream file_;
};

}  // namespace scsim
