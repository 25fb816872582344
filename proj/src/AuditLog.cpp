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

#include "scsim/AuditLog.h"

#include "scsim/Errors.h"

namespace scsim {

void AuditLog::attachFile(const std::string& path) {
    std::lock_guard lock(mutex_);
    file_.open(path, std::ios::app);
    if (!file_) {
        throw Error(ErrorCode::IoError, "cannot open audit log " + path);
    }
}

void AuditLog::log(const std::string& event, const std::string& detail) {
    std::lock_guard lock(mutex_);
    std::string line = event;
    if (!detail.empty()) {
        line += " " + detail;
    }
    entries_.push_back(line);
    if (file_.is_open()) {
        file_ << line << "\n";
        file_.flush();
    }
}

std::vector<std::string> AuditLog::entries() const {
    std::lock_guard lock(mutex_);
    return entries_;
}

size_t AuditLog::count(const std::string& prefix) const {
    std::lock_guard lock(mutex_);
    size_t n = 0;
    for (const std::string& entry : entries_) {
        if (entry.rfind(prefix, 0) == 0) ++n;
    }
    return n;
}

}  // namespace scsim
