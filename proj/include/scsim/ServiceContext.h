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

#include "scsim/AuditLog.h"
#include "scsim/Sandbox.h"

namespace scsim {

class ServiceModel;

// The environment handed to terminal constructors. In the legacy loading
// regime `service` is a live handle to the daemon's own model -- the leak
// that makes in-process add-ons dangerous. In a hardened plugin process
// `service` is null and the plugin only gets the socket path.
struct ServiceContext {
    ServiceModel* service = nullptr;
    Sandbox* sandbox = nullptr;
    CapabilityGateways* gateways = nullptr;
    AuditLog* audit = nullptr;
    IdentityContext serviceIdentity;
    std::string reportSink;     // report destination for legacy-loaded add-ons
    std::string serviceSocket;  // client socket of the daemon
    std::string runtimeDir;     // scratch dir for terminal-hop sockets
};

}  // namespace scsim
