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

#include <string>
#include <vector>

#include "scsim/Bytes.h"
#include "scsim/Sandbox.h"
#include "scsim/Wire.h"

namespace scsim {

// Client side of the service hop. Service-side errors come back as typed
// Error exceptions (AccessDenied, PermissionDenied, ...).
class ServiceClient {
public:
    // Reads the auth token from "<socketPath>.token" (written by the daemon)
    // and performs the HELLO handshake under `packageName`.
    static ServiceClient connect(const std::string& socketPath, const std::string& packageName);
    static ServiceClient connectWithToken(const std::string& socketPath,
                                          const std::string& packageName, const Token& token);

    ServiceClient(ServiceClient&& other) noexcept;
    ServiceClient& operator=(ServiceClient&&) = delete;
    ~ServiceClient();

    std::vector<std::string> listReaders();
    uint32_t openSession(const std::string& readerName);
    void closeSession(uint32_t sessionId);

    struct ChannelInfo {
        uint32_t channelId = 0;
        Bytes selectResponse;
    };
    ChannelInfo openChannel(uint32_t sessionId, const Bytes& aid);
    Bytes transmit(uint32_t channelId, const Bytes& apdu);
    void closeChannel(uint32_t channelId);

private:
    explicit ServiceClient(int fd) : fd_(fd) {}

    WireMessage call(const WireMessage& request);

    int fd_ = -1;
};

}  // namespace scsim
