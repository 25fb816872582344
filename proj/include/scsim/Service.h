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

#include <sys/types.h>

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "scsim/AccessControl.h"
#include "scsim/AuditLog.h"
#include "scsim/Discovery.h"
#include "scsim/Sandbox.h"
#include "scsim/ServiceContext.h"
#include "scsim/Terminal.h"

namespace scsim {

struct ServiceConfig {
    std::string profile = "nexus6";
    LoaderMode loaderMode = LoaderMode::None;
    std::string pluginRoot;                              // empty: no add-on discovery
    std::optional<std::vector<SignatureHash>> allowlist; // engaged: allowlist mode on
    std::string socketPath;
    std::string reportSink;
    std::string auditLogPath;
    std::string elementConfigPath;  // empty: default ATR + echo applet
    bool vendorPrefixes = false;
    int sessionLimit = 16;
    int channelsPerSession = 3;
};

// Reads the `key = value` service config; relative paths are resolved
// against the config file location.
ServiceConfig loadServiceConfig(const std::string& path);

// Add-ons loaded in the legacy regime can ask to be notified once the
// registry settles; this models the asynchronous tail of a constructor
// (e.g. a callback-driven client connecting back into the service).
class TerminalLifecycleHook {
public:
    virtual ~TerminalLifecycleHook() = default;
    virtual void onRegistered() = 0;
};

// The smartcard service daemon core: terminal registry, reader ordering,
// session/channel lifecycle and the access control enforcer gate.
class ServiceModel {
public:
    ServiceModel(ServiceConfig config, Sandbox& sandbox, AuditLog& audit);
    ~ServiceModel();

    ServiceModel(const ServiceModel&) = delete;
    ServiceModel& operator=(const ServiceModel&) = delete;

    // Builds built-in terminals, then discovers add-ons per loader mode.
    // Returns the reader ordering.
    std::vector<std::string> createTerminals();

    // Re-runs discovery: new bundles are added, vanished ones removed (their
    // sessions close with an error to clients). Returns the ordering. When a
    // discovery pass is already running the current ordering is returned.
    std::vector<std::string> updateTerminals();

    // Client API. Every entry point is gated on the caller holding SMARTCARD
    // or being the service itself (a call made from the service's own
    // process passes, which is exactly what in-process injected code does).
    std::vector<std::string> listReaders(const IdentityContext& caller);
    uint32_t openSession(const IdentityContext& caller, const std::string& readerName);
    void closeSession(const IdentityContext& caller, uint32_t sessionId);

    struct OpenChannelResult {
        uint32_t channelId = 0;
        Bytes selectResponse;
    };
    OpenChannelResult openLogicalChannel(const IdentityContext& caller, uint32_t sessionId,
                                         const Bytes& aid);
    void closeChannel(const IdentityContext& caller, uint32_t channelId);
    Bytes transmit(const IdentityContext& caller, uint32_t channelId, const Bytes& apdu);

    // Introspection for demos and tests.
    std::vector<std::string> readerNames() const;
    int addonCount() const;
    std::optional<pid_t> addonPid(const std::string& readerName) const;
    int openServiceChannels(const std::string& readerName) const;
    UiccTerminal* uiccTerminal();
    ServiceContext& context() { return context_; }
    Sandbox& sandbox() { return sandbox_; }
    AuditLog& audit() { return audit_; }
    CapabilityGateways& gateways() { return gateways_; }
    const ServiceConfig& config() const { return config_; }
    const IdentityContext& identity() const { return context_.serviceIdentity; }

    void shutdown();

private:
    struct AddonRecord {
        TerminalRecord record;
        std::string bundleDir;
        std::string entryName;
        std::string packageName;
        pid_t pid = -1;  // hardened plugin process
    };

    struct Channel {
        uint32_t id = 0;
        uint32_t sessionId = 0;
        std::string readerName;
        int terminalChannel = 0;
        Bytes aid;
        Decision verdict;
    };

    struct Session {
        uint32_t id = 0;
        std::string readerName;
        IdentityContext client;
        std::vector<uint32_t> channelIds;
    };

    // Stable handle to a terminal: safe to use after stateMutex_ is
    // released even if the registry entry is dropped concurrently.
    struct TerminalHandle {
        std::string name;
        std::shared_ptr<Terminal> terminal;
        std::shared_ptr<std::mutex> busy;
    };

    void requireClient(const IdentityContext& caller) const;
    std::vector<std::string> currentOrdering() const;
    std::vector<std::string> runDiscovery(bool createBuiltins);
    void discoverAddons();
    void deliverPendingHooks();
    TerminalRecord* findTerminal(const std::string& name);
    std::optional<TerminalHandle> findHandle(const std::string& name);
    std::optional<AccessRuleDb> fetchRuleDb(const TerminalHandle& handle);
    void dropAddonLocked(size_t index, const std::string& reason);
    void removeAddonByName(const std::string& readerName, const std::string& reason);
    void closeSessionsOnReaderLocked(const std::string& readerName);
    void logTerminalCall(const std::string& terminal, const std::string& op);

    ServiceConfig config_;
    Sandbox& sandbox_;
    AuditLog& audit_;
    CapabilityGateways gateways_;
    ServiceContext context_;

    mutable std::mutex stateMutex_;
    std::mutex controlMutex_;
    std::vector<TerminalRecord> builtIns_;
    std::vector<AddonRecord> addons_;
    std::vector<std::shared_ptr<Terminal>> pendingHooks_;
    std::map<uint32_t, Session> sessions_;
    std::map<uint32_t, Channel> channels_;
    uint32_t nextSessionId_ = 1;
    uint32_t nextChannelId_ = 1;
};

}  // namespace scsim
