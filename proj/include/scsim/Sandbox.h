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

#include <array>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "scsim/AuditLog.h"
#include "scsim/Bytes.h"
#include "scsim/Errors.h"
#include "scsim/VirtualSe.h"

namespace scsim {

// Closed permission vocabulary. checkPermission answers Denied for any
// string outside this set.
namespace perm {
constexpr const char* kNfc = "android.permission.NFC";
constexpr const char* kReceiveBootCompleted = "android.permission.RECEIVE_BOOT_COMPLETED";
constexpr const char* kReadExternalStorage = "android.permission.READ_EXTERNAL_STORAGE";
constexpr const char* kWriteExternalStorage = "android.permission.WRITE_EXTERNAL_STORAGE";
constexpr const char* kWriteSecureSettings = "android.permission.WRITE_SECURE_SETTINGS";
constexpr const char* kWriteSettings = "android.permission.WRITE_SETTINGS";
constexpr const char* kModifyPhoneState = "android.permission.MODIFY_PHONE_STATE";
constexpr const char* kInternet = "android.permission.INTERNET";
constexpr const char* kSmartcard = "org.simalliance.openmobileapi.SMARTCARD";
constexpr const char* kBindTerminal = "org.simalliance.openmobileapi.BIND_TERMINAL";
}  // namespace perm

const std::set<std::string>& permissionVocabulary();

struct PackageRecord {
    std::string name;
    int uid = 0;
    SignatureHash signatureHash{};
    std::set<std::string> grantedPermissions;
    // Rendered into the user name instead of the package name when set
    // (shared-uid label, e.g. "org.simalliance.uid.openmobileapi").
    std::optional<std::string> sharedUserLabel;
};

// Ambient caller identity. uid/package come from the simulated package
// table; pid/tid are the real OS values of whatever process carries the
// identity at the moment.
struct IdentityContext {
    int uid = -1;
    int pid = 0;
    int tid = 0;
    std::string packageName;
    std::string processName;
    std::string userName;
};

enum class PermissionCheck { Granted, Denied };

// 16-byte opaque token. One instance models the BIND_TERMINAL permission
// (terminal hop), another authenticates clients on the service socket.
using Token = std::array<uint8_t, 16>;

std::string tokenToHex(const Token& token);
Token tokenFromHex(const std::string& hex);
bool tokensEqualConstantTime(const Token& a, const Token& b);

// Simulated package manager: package table, uids, signature hashes and
// granted permissions. Safe for concurrent use.
class Sandbox {
public:
    Sandbox();

    void installPackage(PackageRecord record);
    std::vector<PackageRecord> installedPackages() const;
    std::optional<PackageRecord> findPackage(const std::string& name) const;
    std::optional<PackageRecord> findUid(int uid) const;

    PermissionCheck checkPermission(const std::string& permission, int pid, int uid) const;

    // Builds an ambient identity for a registered package; pid/tid are taken
    // from the calling process.
    IdentityContext identityFor(const std::string& packageName) const;

    // Tokens are random per sandbox instance and constant for its lifetime.
    const Token& bindToken() const { return bindToken_; }
    const Token& clientAuthToken() const { return clientAuthToken_; }
    bool checkBindToken(const Token& presented) const;
    bool checkClientAuthToken(const Token& presented) const;

private:
    mutable std::mutex mutex_;
    std::vector<PackageRecord> packages_;  // insertion order
    Token bindToken_{};
    Token clientAuthToken_{};
};

// Ambient identity plumbing. The current identity is task-local; a scope
// pushes a new one and restores the previous on destruction, also when the
// task unwinds with an exception.
class IdentityScope {
public:
    explicit IdentityScope(IdentityContext ctx);
    ~IdentityScope();

    IdentityScope(const IdentityScope&) = delete;
    IdentityScope& operator=(const IdentityScope&) = delete;
};

IdentityContext currentIdentity();
bool hasCurrentIdentity();

// Fallback identity for threads without an active scope.
void setBaseIdentity(IdentityContext ctx);

template <typename Fn>
auto runAs(IdentityContext ctx, Fn&& fn) {
    IdentityScope scope(std::move(ctx));
    return std::forward<Fn>(fn)();
}

struct GatewayResult {
    bool ok = false;
    std::string message;  // denial text, `Permission denial: <op> requires <perm>`
    Bytes response;       // iccExchangeApdu payload
};

// Privileged platform functionality behind permission checks. Effects are
// recorded in the audit log rather than touching any real system state.
class CapabilityGateways {
public:
    CapabilityGateways(Sandbox& sandbox, AuditLog* audit) : sandbox_(sandbox), audit_(audit) {}

    // Lets iccExchangeApdu reach the UICC element directly, skipping the
    // access control enforcer.
    void attachUicc(VirtualSecureElement* element, std::mutex* lock);

    GatewayResult toggleNfc(const IdentityContext& ctx);
    GatewayResult writeSecureSetting(const IdentityContext& ctx, const std::string& key,
                                     const std::string& value);
    GatewayResult answerRingingCall(const IdentityContext& ctx);
    GatewayResult iccExchangeApdu(const IdentityContext& ctx, BytesView apdu);

private:
    GatewayResult requirePermission(const IdentityContext& ctx, const std::string& opName,
                                    const std::string& permission);

    Sandbox& sandbox_;
    AuditLog* audit_;
    VirtualSecureElement* uicc_ = nullptr;
    std::mutex* uiccLock_ = nullptr;
};

// Device profile: the service package's uid/permissions plus the uids
// handed to add-on and client packages at provisioning time.
struct DeviceProfile {
    std::string name;
    int serviceUid = 0;
    std::set<std::string> servicePermissions;
    int addonUid = 0;
    int clientUid = 0;
    int unprivilegedUid = 0;
};

DeviceProfile profileByName(const std::string& name);

// Fixed simulation constants shared between profiles.
namespace wellknown {
constexpr const char* kServicePackage = "org.simalliance.openmobileapi.service";
constexpr const char* kServiceProcess = "org.simalliance.openmobileapi.service:remote";
constexpr const char* kServiceSharedUser = "org.simalliance.uid.openmobileapi";
constexpr const char* kClientPackage = "com.example.seclient";
constexpr const char* kUnprivilegedPackage = "com.example.untrusted";

SignatureHash serviceSignature();
SignatureHash clientSignature();
SignatureHash unprivilegedSignature();
}  // namespace wellknown

// Installs the service package and the two sample client packages.
void provisionProfile(Sandbox& sandbox, const DeviceProfile& profile);

// The identity the smartcard system service process runs under.
IdentityContext serviceIdentity(const Sandbox& sandbox);

}  // namespace scsim
