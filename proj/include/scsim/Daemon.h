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

#include <atomic>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "scsim/Service.h"

namespace scsim {

// Socket front-end of the service: accepts client connections on the
// configured unix socket, one handler thread per connection, strict
// request/reply. The client auth token is published to "<socket>.token".
class Daemon {
public:
    explicit Daemon(ServiceModel& model);
    ~Daemon();

    void start();
    void stop();

    const std::string& socketPath() const { return socketPath_; }

private:
    void acceptLoop();
    void handleClient(int fd);

    ServiceModel& model_;
    std::string socketPath_;
    std::atomic<bool> running_{false};
    int listenFd_ = -1;
    std::thread acceptThread_;
    std::mutex clientsMutex_;
    std::set<int> clientFds_;
    std::vector<std::thread> handlers_;
};

}  // namespace scsim
