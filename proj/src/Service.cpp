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

#include "scsim/Service.h"

#include <algorithm>
#include <filesystem>

#include "scsim/Apdu.h"
#include "scsim/Config.h"
#include "scsim/RemoteTerminal.h"

namespace scsim {

namespace {

constexpr const char* kAccessGatePermission = perm::kSmartcard;

}  // namespace

ServiceConfig loadServiceConfig(const std::string& path) {
    KeyValueFile file = KeyValueFile::load(path);

    ServiceConfig config;
    config.profile = file.getOr("profile", "nexus6");
    config.loaderMode = loaderModeFromString(file.getOr("loader_mode", "none"));
    if (auto root = file.find("plugin_root")) {
        config.pluginRoot = resolveRelativeTo(path, *root);
    }
    if (auto allow = file.find("allowlist")) {
        std::vector<SignatureHash> hashes;
        for (const std::string& hex : file.getList("allowlist")) {
            hashes.push_back(hashFromHex(hex));
        }
        config.allowlist = std::move(hashes);
    }
    if (auto socket = file.find("socket")) {
        config.socketPath = resolveRelativeTo(path, *socket);
    }
    if (auto sink = file.find("report_sink")) {
        config.reportSink = resolveRelativeTo(path, *sink);
    }
    if (auto log = file.find("audit_log")) {
        config.auditLogPath = resolveRelativeTo(path, *log);
    }
    if (auto element = file.find("element_config")) {
        config.elementConfigPath = resolveRelativeTo(path, *element);
    }
    config.vendorPrefixes = file.getBool("vendor_prefixes", false);
    auto readLimit = [&file](const char* key, int fallback) {
        auto value = file.find(key);
        if (!value) return fallback;
        try {
            int parsed = std::stoi(*value);
            if (parsed < 1) throw std::invalid_argument("nonpositive");
            return parsed;
        } catch (const std::exception&) {
            throw Error(ErrorCode::BadConfig, std::string(key) + " must be a positive integer");
        }
    };
    config.sessionLimit = readLimit("session_limit", config.sessionLimit);
    config.channelsPerSession = readLimit("channels_per_session", config.channelsPerSession);
    return config;
}

ServiceModel::ServiceModel(ServiceConfig config, Sandbox& sandbox, AuditLog& audit)
    : config_(std::move(config)), sandbox_(sandbox), audit_(audit), gateways_(sandbox, &audit) {
    if (!config_.auditLogPath.empty()) {
        audit_.attachFile(config_.auditLogPath);
    }
    context_.service = this;
    context_.sandbox = &sandbox_;
    context_.gateways = &gateways_;
    context_.audit = &audit_;
    context_.serviceIdentity = serviceIdentity(sandbox_);
    context_.reportSink = config_.reportSink;
    context_.serviceSocket = config_.socketPath;
    context_.runtimeDir = config_.socketPath.empty()
                              ? std::filesystem::temp_directory_path().string()
                              : std::filesystem::path(config_.socketPath).parent_path().string();
}

ServiceModel::~ServiceModel() { shutdown(); }

void ServiceModel::shutdown() {
    std::lock_guard control(controlMutex_);
    std::lock_guard lock(stateMutex_);
    sessions_.clear();
    channels_.clear();
    addons_.clear();  // RemoteTerminal destructors stop plugin processes
    gateways_.attachUicc(nullptr, nullptr);
    for (TerminalRecord& record : builtIns_) {
        try {
            record.terminal->internalDisconnect();
        } catch (const Error&) {
        }
    }
    builtIns_.clear();
}

void ServiceModel::logTerminalCall(const std::string& terminal, const std::string& op) {
    audit_.log("terminal_call", "terminal=" + terminal + " op=" + op);
}

std::vector<std::string> ServiceModel::createTerminals() { return runDiscovery(true); }

std::vector<std::string> ServiceModel::updateTerminals() {
    std::unique_lock control(controlMutex_, std::try_to_lock);
    if (!control.owns_lock()) {
        // A discovery pass is already running (re-entry from an add-on
        // constructor probing the service); serve the current roster.
        return currentOrdering();
    }
    discoverAddons();
    control.unlock();
    deliverPendingHooks();
    return currentOrdering();
}

std::vector<std::string> ServiceModel::runDiscovery(bool createBuiltins) {
    {
        std::lock_guard control(controlMutex_);
        if (createBuiltins) {
            std::lock_guard lock(stateMutex_);
            if (builtIns_.empty()) {
                auto element = config_.elementConfigPath.empty()
                                   ? makeDefaultElement()
                                   : loadElementConfig(config_.elementConfigPath);
                auto uicc = std::make_shared<UiccTerminal>(std::move(element));
                uicc->internalConnect();
                gateways_.attachUicc(&uicc->element(), &uicc->elementLock());
                TerminalRecord record;
                record.name = UiccTerminal::kName;
                record.kind = TerminalKind::BuiltIn;
                record.terminal = uicc;
                builtIns_.push_back(std::move(record));
            }
        }
        discoverAddons();
    }
    deliverPendingHooks();
    return currentOrdering();
}

void ServiceModel::discoverAddons() {
    if (config_.loaderMode == LoaderMode::None || config_.pluginRoot.empty()) {
        return;
    }

    std::vector<PluginBundle> bundles;
    try {
        // Keep the package table in step with the bundles on disk, the way a
        // package manager would know about every installed package.
        provisionBundles(sandbox_, config_.pluginRoot, profileByName(config_.profile));
        bundles = scanBundles(config_.pluginRoot);
    } catch (const Error& e) {
        audit_.log("loader", std::string("error=scan_failed detail=") + e.what());
        return;
    }

    // Remove add-ons whose bundle vanished.
    {
        std::lock_guard lock(stateMutex_);
        for (size_t i = addons_.size(); i-- > 0;) {
            bool present = std::any_of(bundles.begin(), bundles.end(), [&](const PluginBundle& b) {
                return b.dir == addons_[i].bundleDir;
            });
            if (!present) {
                dropAddonLocked(i, "bundle removed");
            }
        }
    }

    for (const PluginBundle& bundle : bundles) {
        if (!packageNameMatches(bundle.manifest.packageName, config_.vendorPrefixes)) {
            continue;
        }
        if (config_.allowlist && !verifySignatureAllowlist(bundle, *config_.allowlist)) {
            audit_.log("loader", "allowlist_rejected package=" + bundle.manifest.packageName +
                                     " hash=" + toHex(bundle.manifest.signatureHash));
            continue;
        }

        std::vector<std::string> entries = enumerateEntries(bundle);
        if (config_.loaderMode == LoaderMode::Legacy) {
            for (const std::string& entry : entries) {
                bool known;
                {
                    std::lock_guard lock(stateMutex_);
                    known = std::any_of(addons_.begin(), addons_.end(), [&](const AddonRecord& a) {
                        return a.bundleDir == bundle.dir && a.entryName == entry;
                    });
                }
                if (known) continue;

                std::shared_ptr<Terminal> terminal;
                try {
                    terminal = legacyLoad(bundle, entry, context_);
                } catch (const Error& e) {
                    // Per the loader's catch-all: log and move on, never crash.
                    audit_.log("loader", std::string("error=load_failed entry=") + entry +
                                             " detail=" + e.what());
                    continue;
                }

                std::string name;
                try {
                    name = terminal->getName();
                    logTerminalCall(name, "getName");
                    terminal->internalConnect();
                    logTerminalCall(name, "internalConnect");
                } catch (...) {
                    // Add-on code may throw anything; skip it, never crash.
                    audit_.log("loader", "error=connect_failed entry=" + entry);
                    continue;
                }
                std::lock_guard lock(stateMutex_);
                if (findTerminal(name)) {
                    audit_.log("loader", "duplicate_name name=" + name + " entry=" + entry);
                    continue;
                }
                AddonRecord addon;
                addon.record.name = name;
                addon.record.kind = TerminalKind::AddonLegacy;
                addon.record.terminal = terminal;
                addon.bundleDir = bundle.dir;
                addon.entryName = entry;
                addon.packageName = bundle.manifest.packageName;
                addons_.push_back(std::move(addon));
                if (std::dynamic_pointer_cast<TerminalLifecycleHook>(terminal)) {
                    pendingHooks_.push_back(terminal);
                }
                audit_.log("loader", "registered mode=legacy name=" + name);
            }
        } else {  // Hardened
            bool known;
            {
                std::lock_guard lock(stateMutex_);
                known = std::any_of(addons_.begin(), addons_.end(), [&](const AddonRecord& a) {
                    return a.bundleDir == bundle.dir;
                });
            }
            if (known) continue;

            std::shared_ptr<RemoteTerminal> proxy;
            try {
                proxy = spawnRemoteTerminal(bundle, sandbox_.bindToken(), context_,
                                            config_.profile, config_.pluginRoot);
            } catch (const Error& e) {
                audit_.log("loader", std::string("error=") + errorCodeName(e.code()) +
                                         " package=" + bundle.manifest.packageName +
                                         " detail=" + e.what());
                continue;
            }

            std::string name;
            try {
                name = proxy->getName();
                logTerminalCall(name, "getName");
                proxy->internalConnect();
                logTerminalCall(name, "internalConnect");
            } catch (const Error& e) {
                audit_.log("loader", std::string("error=connect_failed detail=") + e.what());
                continue;
            }

            std::lock_guard lock(stateMutex_);
            if (findTerminal(name)) {
                audit_.log("loader", "duplicate_name name=" + name);
                continue;
            }
            AddonRecord addon;
            addon.record.name = name;
            addon.record.kind = TerminalKind::AddonHardened;
            addon.record.terminal = proxy;
            addon.bundleDir = bundle.dir;
            addon.packageName = bundle.manifest.packageName;
            addon.pid = proxy->childPid();
            addons_.push_back(std::move(addon));
            audit_.log("loader", "registered mode=hardened name=" + name +
                                     " pid=" + std::to_string(proxy->childPid()));
        }
    }
}

void ServiceModel::deliverPendingHooks() {
    std::vector<std::shared_ptr<Terminal>> hooks;
    {
        std::lock_guard lock(stateMutex_);
        hooks.swap(pendingHooks_);
    }
    for (const std::shared_ptr<Terminal>& terminal : hooks) {
        auto hook = std::dynamic_pointer_cast<TerminalLifecycleHook>(terminal);
        if (!hook) continue;
        try {
            runAs(context_.serviceIdentity, [&] { hook->onRegistered(); });
        } catch (const std::exception& e) {
            audit_.log("loader", std::string("error=hook_failed detail=") + e.what());
        }
    }
}

TerminalRecord* ServiceModel::findTerminal(const std::string& name) {
    for (TerminalRecord& record : builtIns_) {
        if (record.name == name) return &record;
    }
    for (AddonRecord& addon : addons_) {
        if (addon.record.name == name) return &addon.record;
    }
    return nullptr;
}

std::optional<ServiceModel::TerminalHandle> ServiceModel::findHandle(const std::string& name) {
    std::lock_guard lock(stateMutex_);
    TerminalRecord* record = findTerminal(name);
    if (!record) return std::nullopt;
    return TerminalHandle{record->name, record->terminal, record->busy};
}

std::vector<std::string> ServiceModel::currentOrdering() const {
    std::lock_guard lock(stateMutex_);
    std::vector<std::string> names;
    for (const TerminalRecord& record : builtIns_) {
        names.push_back(record.name);
    }
    std::sort(names.begin(), names.end());
    // UICC goes first whenever present.
    auto uicc = std::find(names.begin(), names.end(), std::string(UiccTerminal::kName));
    if (uicc != names.end()) {
        names.erase(uicc);
        names.insert(names.begin(), UiccTerminal::kName);
    }
    for (const AddonRecord& addon : addons_) {
        if (std::find(names.begin(), names.end(), addon.record.name) == names.end()) {
            names.push_back(addon.record.name);
        }
    }
    return names;
}

std::vector<std::string> ServiceModel::readerNames() const { return currentOrdering(); }

int ServiceModel::addonCount() const {
    std::lock_guard lock(stateMutex_);
    return static_cast<int>(addons_.size());
}

std::optional<pid_t> ServiceModel::addonPid(const std::string& readerName) const {
    std::lock_guard lock(stateMutex_);
    for (const AddonRecord& addon : addons_) {
        if (addon.record.name == readerName && addon.pid > 0) return addon.pid;
    }
    return std::nullopt;
}

int ServiceModel::openServiceChannels(const std::string& readerName) const {
    std::lock_guard lock(stateMutex_);
    int count = 0;
    for (const auto& [id, channel] : channels_) {
        if (channel.readerName == readerName) ++count;
    }
    return count;
}

UiccTerminal* ServiceModel::uiccTerminal() {
    std::lock_guard lock(stateMutex_);
    for (TerminalRecord& record : builtIns_) {
        if (record.name == UiccTerminal::kName) {
            return static_cast<UiccTerminal*>(record.terminal.get());
        }
    }
    return nullptr;
}

void ServiceModel::requireClient(const IdentityContext& caller) const {
    // A call arriving under the service's own uid passes the gate -- this is
    // the check-or-self semantics the legacy escalation rides on.
    if (caller.uid == context_.serviceIdentity.uid) {
        return;
    }
    try {
        if (sandbox_.checkPermission(kAccessGatePermission, caller.pid, caller.uid) ==
            PermissionCheck::Granted) {
            return;
        }
    } catch (const Error&) {
        // Unregistered uid: fall through to denial.
    }
    throw Error(ErrorCode::PermissionDenied,
                std::string("Permission denial: smartcard service access requires ") +
                    kAccessGatePermission);
}

std::vector<std::string> ServiceModel::listReaders(const IdentityContext& caller) {
    requireClient(caller);
    // Discovery re-runs on every reader listing.
    return updateTerminals();
}

uint32_t ServiceModel::openSession(const IdentityContext& caller, const std::string& readerName) {
    requireClient(caller);
    std::lock_guard lock(stateMutex_);
    if (!findTerminal(readerName)) {
        throw Error(ErrorCode::UnknownReader, "no reader named \"" + readerName + "\"");
    }
    if (sessions_.size() >= static_cast<size_t>(config_.sessionLimit)) {
        throw Error(ErrorCode::SessionLimit, "session limit reached");
    }
    Session session;
    session.id = nextSessionId_++;
    session.readerName = readerName;
    session.client = caller;
    uint32_t id = session.id;
    sessions_[id] = std::move(session);
    return id;
}

void ServiceModel::closeSession(const IdentityContext& caller, uint32_t sessionId) {
    std::vector<uint32_t> channelIds;
    {
        std::lock_guard lock(stateMutex_);
        auto it = sessions_.find(sessionId);
        if (it == sessions_.end() || it->second.client.uid != caller.uid) {
            throw Error(ErrorCode::UnknownSession, "no session " + std::to_string(sessionId));
        }
        channelIds = it->second.channelIds;
    }
    for (uint32_t channelId : channelIds) {
        try {
            closeChannel(caller, channelId);
        } catch (const Error&) {
        }
    }
    std::lock_guard lock(stateMutex_);
    sessions_.erase(sessionId);
}

std::optional<AccessRuleDb> ServiceModel::fetchRuleDb(const TerminalHandle& handle) {
    std::lock_guard busy(*handle.busy);
    int channel;
    try {
        logTerminalCall(handle.name, "internalOpenLogicalChannel(ara)");
        channel = handle.terminal->internalOpenLogicalChannel(AraApplet::defaultAid());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NoChannelAvailable) throw;
        // No access rule applet (or the terminal cannot open channels at
        // all): no rule source.
        return std::nullopt;
    }

    std::optional<AccessRuleDb> db;
    try {
        CommandApdu getData;
        getData.cla = static_cast<uint8_t>(0x80 | (channel & 0x03));
        getData.ins = 0xCA;
        getData.p1 = 0xFF;
        getData.p2 = 0x40;
        getData.le = 256;
        logTerminalCall(handle.name, "internalTransmit(getDataAll)");
        ResponseApdu resp =
            parseResponse(handle.terminal->internalTransmit(serializeCommand(getData)));
        if (resp.sw() == sw::kSuccess) {
            db = decodeRuleDb(resp.data);
        }
    } catch (const Error& e) {
        audit_.log("enforcer", std::string("rule_fetch_failed detail=") + e.what());
        db = std::nullopt;
    }

    try {
        logTerminalCall(handle.name, "internalCloseLogicalChannel(ara)");
        handle.terminal->internalCloseLogicalChannel(channel);
    } catch (const Error&) {
    }
    return db;
}

ServiceModel::OpenChannelResult ServiceModel::openLogicalChannel(const IdentityContext& caller,
                                                                 uint32_t sessionId,
                                                                 const Bytes& aid) {
    std::string readerName;
    {
        std::lock_guard lock(stateMutex_);
        auto it = sessions_.find(sessionId);
        if (it == sessions_.end() || it->second.client.uid != caller.uid) {
            throw Error(ErrorCode::UnknownSession, "no session " + std::to_string(sessionId));
        }
        if (it->second.channelIds.size() >= static_cast<size_t>(config_.channelsPerSession)) {
            throw Error(ErrorCode::ChannelLimit, "channel limit for this session reached");
        }
        readerName = it->second.readerName;
    }
    if (aid.size() < 5 || aid.size() > 16) {
        throw Error(ErrorCode::BadAidLength, "AID must be 5..16 bytes");
    }

    std::optional<TerminalHandle> handle = findHandle(readerName);
    if (!handle) {
        throw Error(ErrorCode::UnknownReader, "reader \"" + readerName + "\" is gone");
    }

    // Enforcement happens before any terminal channel is consumed, so a
    // denial can never exhaust the channel table.
    std::optional<AccessRuleDb> db = fetchRuleDb(*handle);
    auto clientPackage = sandbox_.findUid(caller.uid);
    if (!clientPackage) {
        throw Error(ErrorCode::PermissionDenied, "caller uid is not a registered package");
    }
    Decision verdict = enforcerDecide(db, clientPackage->signatureHash, aid);
    audit_.log("enforcer", "verdict=" + std::string(decisionKindName(verdict.kind)) +
                               " reader=" + readerName + " uid=" + std::to_string(caller.uid) +
                               " aid=" + toHex(aid));
    if (!verdict.allowed()) {
        std::string reason = verdict.kind == Decision::Kind::DeniedNoDb
                                 ? "no access rule source on the secure element"
                                 : "access rules deny this client access to the applet";
        throw Error(ErrorCode::AccessDenied, reason);
    }

    int terminalChannel;
    Bytes selectResponse;
    try {
        std::lock_guard busy(*handle->busy);
        logTerminalCall(readerName, "setCallingPackageInfo");
        handle->terminal->setCallingPackageInfo(caller.packageName, caller.uid, caller.pid);
        logTerminalCall(readerName, "internalOpenLogicalChannel(aid)");
        terminalChannel = handle->terminal->internalOpenLogicalChannel(aid);
        logTerminalCall(readerName, "getSelectResponse");
        selectResponse = handle->terminal->getSelectResponse().value_or(Bytes{});
    } catch (const Error& e) {
        if (e.code() == ErrorCode::TerminalFailure || e.code() == ErrorCode::IoError) {
            removeAddonByName(readerName, "terminal failed mid-call");
            throw Error(ErrorCode::TerminalFailure, "terminal \"" + readerName + "\" failed");
        }
        throw;
    }

    std::lock_guard lock(stateMutex_);
    auto it = sessions_.find(sessionId);
    if (it == sessions_.end()) {
        throw Error(ErrorCode::UnknownSession, "session closed while opening channel");
    }
    Channel channel;
    channel.id = nextChannelId_++;
    channel.sessionId = sessionId;
    channel.readerName = readerName;
    channel.terminalChannel = terminalChannel;
    channel.aid = aid;
    channel.verdict = verdict;
    uint32_t id = channel.id;
    channels_[id] = std::move(channel);
    it->second.channelIds.push_back(id);
    return OpenChannelResult{id, std::move(selectResponse)};
}

Bytes ServiceModel::transmit(const IdentityContext& caller, uint32_t channelId, const Bytes& apdu) {
    Channel channel;
    {
        std::lock_guard lock(stateMutex_);
        auto it = channels_.find(channelId);
        if (it == channels_.end()) {
            throw Error(ErrorCode::UnknownChannel, "no channel " + std::to_string(channelId));
        }
        auto session = sessions_.find(it->second.sessionId);
        if (session == sessions_.end() || session->second.client.uid != caller.uid) {
            throw Error(ErrorCode::UnknownChannel, "channel belongs to another client");
        }
        channel = it->second;
    }

    CommandApdu cmd = parseCommand(apdu);
    if (cmd.ins == 0x70) {
        throw Error(ErrorCode::ChannelEscapeAttempt, "MANAGE CHANNEL is reserved to the service");
    }
    if (cmd.ins == 0xA4 && cmd.p1 == 0x04) {
        throw Error(ErrorCode::ChannelEscapeAttempt, "SELECT by AID is reserved to the service");
    }
    try {
        cmd = setChannel(cmd, channel.terminalChannel);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ProprietaryClass) {
            throw Error(ErrorCode::ChannelEscapeAttempt,
                        "proprietary class bytes cannot be confined to the assigned channel");
        }
        throw;
    }

    if (!filterApdu(channel.verdict, cmd)) {
        audit_.log("enforcer", "filtered reader=" + channel.readerName +
                                   " uid=" + std::to_string(caller.uid) +
                                   " header=" + toHex(Bytes{cmd.cla, cmd.ins, cmd.p1, cmd.p2}));
        throw Error(ErrorCode::FilteredOut, "command blocked by the applicable APDU filters");
    }

    std::optional<TerminalHandle> handle = findHandle(channel.readerName);
    if (!handle) {
        throw Error(ErrorCode::UnknownChannel, "reader \"" + channel.readerName + "\" is gone");
    }
    try {
        std::lock_guard busy(*handle->busy);
        logTerminalCall(channel.readerName, "internalTransmit");
        return handle->terminal->internalTransmit(serializeCommand(cmd));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::TerminalFailure || e.code() == ErrorCode::IoError) {
            removeAddonByName(channel.readerName, "terminal failed mid-transmit");
            throw Error(ErrorCode::TerminalFailure,
                        "terminal \"" + channel.readerName + "\" failed mid-transmit");
        }
        throw;
    }
}

void ServiceModel::closeChannel(const IdentityContext& caller, uint32_t channelId) {
    Channel channel;
    {
        std::lock_guard lock(stateMutex_);
        auto it = channels_.find(channelId);
        if (it == channels_.end()) {
            throw Error(ErrorCode::UnknownChannel, "no channel " + std::to_string(channelId));
        }
        auto session = sessions_.find(it->second.sessionId);
        if (session == sessions_.end() || session->second.client.uid != caller.uid) {
            throw Error(ErrorCode::UnknownChannel, "channel belongs to another client");
        }
        channel = it->second;
    }

    std::optional<TerminalHandle> handle = findHandle(channel.readerName);
    if (handle) {
        try {
            std::lock_guard busy(*handle->busy);
            logTerminalCall(channel.readerName, "internalCloseLogicalChannel");
            handle->terminal->internalCloseLogicalChannel(channel.terminalChannel);
        } catch (const Error&) {
            // The channel record goes away regardless.
        }
    }
    {
        std::lock_guard lock(stateMutex_);
        channels_.erase(channelId);
        auto session = sessions_.find(channel.sessionId);
        if (session != sessions_.end()) {
            auto& ids = session->second.channelIds;
            ids.erase(std::remove(ids.begin(), ids.end(), channelId), ids.end());
        }
    }
}

void ServiceModel::dropAddonLocked(size_t index, const std::string& reason) {
    AddonRecord addon = std::move(addons_[index]);
    addons_.erase(addons_.begin() + index);
    audit_.log("loader", "removed name=" + addon.record.name + " reason=" + reason);
    closeSessionsOnReaderLocked(addon.record.name);
    // The terminal handle (and for hardened add-ons the plugin process) is
    // torn down when `addon` leaves scope.
}

void ServiceModel::closeSessionsOnReaderLocked(const std::string& readerName) {
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        if (it->second.readerName == readerName) {
            for (uint32_t channelId : it->second.channelIds) {
                channels_.erase(channelId);
            }
            it = sessions_.erase(it);
        } else {
            ++it;
        }
    }
}

void ServiceModel::removeAddonByName(const std::string& readerName, const std::string& reason) {
    std::lock_guard lock(stateMutex_);
    for (size_t i = 0; i < addons_.size(); ++i) {
        if (addons_[i].record.name == readerName) {
            dropAddonLocked(i, reason);
            return;
        }
    }
}

}  // namespace scsim
