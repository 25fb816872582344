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

#include "scsim/Sandbox.h"

#include <sys/syscall.h>
#include <unistd.h>

#include <random>

namespace scsim {

namespace {

int currentTid() { return static_cast<int>(::syscall(SYS_gettid)); }

Token randomToken() {
    std::random_device rd;
    Token token;
    for (auto& b : token) {
        b = static_cast<uint8_t>(rd());
    }
    return token;
}

thread_local std::vector<IdentityContext> tlsIdentityStack;

std::mutex baseIdentityMutex;
std::optional<IdentityContext> baseIdentity;

}  // namespace

const std::set<std::string>& permissionVocabulary() {
    static const std::set<std::string> vocab = {
        perm::kNfc,
        perm::kReceiveBootCompleted,
        perm::kReadExternalStorage,
        perm::kWriteExternalStorage,
        perm::kWriteSecureSettings,
        perm::kWriteSettings,
        perm::kModifyPhoneState,
        perm::kInternet,
        perm::kSmartcard,
        perm::kBindTerminal,
    };
    return vocab;
}

std::string tokenToHex(const Token& token) {
    return toHex(BytesView(token.data(), token.size()));
}

Token tokenFromHex(const std::string& hex) {
    Bytes raw = fromHex(hex);
    if (raw.size() != 16) {
        throw Error(ErrorCode::BadHex, "token must be 16 bytes");
    }
    Token token;
    std::copy(raw.begin(), raw.end(), token.begin());
    return token;
}

bool tokensEqualConstantTime(const Token& a, const Token& b) {
    uint8_t diff = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        diff |= static_cast<uint8_t>(a[i] ^ b[i]);
    }
    return diff == 0;
}

Sandbox::Sandbox() : bindToken_(randomToken()), clientAuthToken_(randomToken()) {}

void Sandbox::installPackage(PackageRecord record) {
    for (const std::string& p : record.grantedPermissions) {
        if (!permissionVocabulary().count(p)) {
            throw Error(ErrorCode::BadConfig, "permission outside the vocabulary: " + p);
        }
    }
    std::lock_guard lock(mutex_);
    for (const PackageRecord& existing : packages_) {
        if (existing.name == record.name) {
            throw Error(ErrorCode::DuplicatePackage, "package " + record.name + " already installed");
        }
        if (existing.uid == record.uid) {
            throw Error(ErrorCode::DuplicatePackage,
                        "uid " + std::to_string(record.uid) + " already taken by " + existing.name);
        }
    }
    packages_.push_back(std::move(record));
}

std::vector<PackageRecord> Sandbox::installedPackages() const {
    std::lock_guard lock(mutex_);
    return packages_;
}

std::optional<PackageRecord> Sandbox::findPackage(const std::string& name) const {
    std::lock_guard lock(mutex_);
    for (const PackageRecord& record : packages_) {
        if (record.name == name) return record;
    }
    return std::nullopt;
}

std::optional<PackageRecord> Sandbox::findUid(int uid) const {
    std::lock_guard lock(mutex_);
    for (const PackageRecord& record : packages_) {
        if (record.uid == uid) return record;
    }
    return std::nullopt;
}

PermissionCheck Sandbox::checkPermission(const std::string& permission, int /*pid*/, int uid) const {
    auto record = findUid(uid);
    if (!record) {
        throw Error(ErrorCode::UnknownUid, "uid " + std::to_string(uid) + " is not registered");
    }
    if (!permissionVocabulary().count(permission)) {
        return PermissionCheck::Denied;
    }
    return record->grantedPermissions.count(permission) ? PermissionCheck::Granted
                                                        : PermissionCheck::Denied;
}

IdentityContext Sandbox::identityFor(const std::string& packageName) const {
    auto record = findPackage(packageName);
    if (!record) {
        throw Error(ErrorCode::UnknownPackage, "package " + packageName + " is not installed");
    }
    IdentityContext ctx;
    ctx.uid = record->uid;
    ctx.pid = static_cast<int>(::getpid());
    ctx.tid = currentTid();
    ctx.packageName = record->name;
    ctx.processName = record->name;
    ctx.userName = record->sharedUserLabel.value_or(record->name) + ":" + std::to_string(record->uid);
    return ctx;
}

bool Sandbox::checkBindToken(const Token& presented) const {
    return tokensEqualConstantTime(bindToken_, presented);
}

bool Sandbox::checkClientAuthToken(const Token& presented) const {
    return tokensEqualConstantTime(clientAuthToken_, presented);
}

IdentityScope::IdentityScope(IdentityContext ctx) {
    tlsIdentityStack.push_back(std::move(ctx));
}

IdentityScope::~IdentityScope() {
    tlsIdentityStack.pop_back();
}

IdentityContext currentIdentity() {
    if (!tlsIdentityStack.empty()) {
        return tlsIdentityStack.back();
    }
    std::lock_guard lock(baseIdentityMutex);
    if (baseIdentity) {
        return *baseIdentity;
    }
    return IdentityContext{};  // uid -1, anonymous
}

bool hasCurrentIdentity() {
    if (!tlsIdentityStack.empty()) return true;
    std::lock_guard lock(baseIdentityMutex);
    return baseIdentity.has_value();
}

void setBaseIdentity(IdentityContext ctx) {
    std::lock_guard lock(baseIdentityMutex);
    baseIdentity = std::move(ctx);
}

void CapabilityGateways::attachUicc(VirtualSecureElement* element, std::mutex* lock) {
    uicc_ = element;
    uiccLock_ = lock;
}

GatewayResult CapabilityGateways::requirePermission(const IdentityContext& ctx,
                                                    const std::string& opName,
                                                    const std::string& permission) {
    bool granted =
        sandbox_.checkPermission(permission, ctx.pid, ctx.uid) == PermissionCheck::Granted;
    if (audit_) {
        audit_->log("gateway", "op=" + opName + " uid=" + std::to_string(ctx.uid) +
                                   " permission=" + permission +
                                   " granted=" + (granted ? "true" : "false"));
    }
    if (granted) {
        return GatewayResult{true, "", {}};
    }
    return GatewayResult{false, "Permission denial: " + opName + " requires " + permission, {}};
}

GatewayResult CapabilityGateways::toggleNfc(const IdentityContext& ctx) {
    return requirePermission(ctx, "toggling NFC", perm::kWriteSecureSettings);
}

GatewayResult CapabilityGateways::writeSecureSetting(const IdentityContext& ctx,
                                                     const std::string& key,
                                                     const std::string& value) {
    GatewayResult secure = requirePermission(ctx, "writing to settings", perm::kWriteSecureSettings);
    if (!secure.ok) return secure;
    GatewayResult settings = requirePermission(ctx, "writing to settings", perm::kWriteSettings);
    if (!settings.ok) return settings;
    if (audit_) {
        audit_->log("secure_setting", "key=" + key + " value=" + value +
                                          " uid=" + std::to_string(ctx.uid));
    }
    return GatewayResult{true, "", {}};
}

GatewayResult CapabilityGateways::answerRingingCall(const IdentityContext& ctx) {
    return requirePermission(ctx, "answering calls", perm::kModifyPhoneState);
}

GatewayResult CapabilityGateways::iccExchangeApdu(const IdentityContext& ctx, BytesView apdu) {
    GatewayResult gate =
        requirePermission(ctx, "exchanging APDUs with the UICC", perm::kModifyPhoneState);
    if (!gate.ok) return gate;
    if (!uicc_ || !uiccLock_) {
        return GatewayResult{false, "no UICC attached to the telephony gateway", {}};
    }
    std::lock_guard lock(*uiccLock_);
    gate.response = uicc_->process(apdu);
    return gate;
}

DeviceProfile profileByName(const std::string& name) {
    if (name == "nexus6") {
        return DeviceProfile{
            "nexus6",
            10023,
            {perm::kModifyPhoneState, perm::kNfc, perm::kReceiveBootCompleted,
             perm::kWriteSecureSettings},
            10247,
            10100,
            10101,
        };
    }
    if (name == "oppo") {
        return DeviceProfile{
            "oppo",
            1032,
            {perm::kNfc, perm::kReadExternalStorage, perm::kReceiveBootCompleted,
             perm::kWriteSecureSettings},
            10102,
            10100,
            10101,
        };
    }
    throw Error(ErrorCode::BadConfig, "unknown profile \"" + name + "\" (expected nexus6 or oppo)");
}

namespace wellknown {

SignatureHash serviceSignature() {
    return hashFromHex("5EC05EC05EC05EC05EC05EC05EC05EC05EC05EC0");
}

SignatureHash clientSignature() {
    return hashFromHex("C11E47C11E47C11E47C11E47C11E47C11E47C11E");
}

SignatureHash unprivilegedSignature() {
    return hashFromHex("BAD0BAD0BAD0BAD0BAD0BAD0BAD0BAD0BAD0BAD0");
}

}  // namespace wellknown

void provisionProfile(Sandbox& sandbox, const DeviceProfile& profile) {
    PackageRecord service;
    service.name = wellknown::kServicePackage;
    service.uid = profile.serviceUid;
    service.signatureHash = wellknown::serviceSignature();
    service.grantedPermissions = profile.servicePermissions;
    service.sharedUserLabel = wellknown::kServiceSharedUser;
    sandbox.installPackage(std::move(service));

    PackageRecord client;
    client.name = wellknown::kClientPackage;
    client.uid = profile.clientUid;
    client.signatureHash = wellknown::clientSignature();
    client.grantedPermissions = {perm::kSmartcard, perm::kInternet};
    sandbox.installPackage(std::move(client));

    PackageRecord unprivileged;
    unprivileged.name = wellknown::kUnprivilegedPackage;
    unprivileged.uid = profile.unprivilegedUid;
    unprivileged.signatureHash = wellknown::unprivilegedSignature();
    unprivileged.grantedPermissions = {perm::kInternet};
    sandbox.installPackage(std::move(unprivileged));
}

IdentityContext serviceIdentity(const Sandbox& sandbox) {
    IdentityContext ctx = sandbox.identityFor(wellknown::kServicePackage);
    ctx.processName = wellknown::kServiceProcess;
    return ctx;
}

}  // namespace scsim
