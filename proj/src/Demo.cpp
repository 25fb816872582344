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

#include "scsim/Demo.h"

#include <stdlib.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <set>
#include <thread>

#include "scsim/Client.h"
#include "scsim/Config.h"
#include "scsim/Daemon.h"
#include "scsim/Exploit.h"
#include "scsim/Service.h"

namespace scsim {

namespace fs = std::filesystem;

namespace {

constexpr const char* kExploitPackage = "org.simalliance.openmobileapi.service.terminals.exploit";
constexpr const char* kMockSePackage = "org.simalliance.openmobileapi.service.terminals.vse";

std::string makeTempDir() {
    std::string pattern = (fs::temp_directory_path() / "scsim-demo-XXXXXX").string();
    std::vector<char> buf(pattern.begin(), pattern.end());
    buf.push_back('\0');
    if (!::mkdtemp(buf.data())) {
        throw Error(ErrorCode::IoError, "mkdtemp failed for " + pattern);
    }
    return std::string(buf.data());
}

bool waitForFile(const std::string& path, std::chrono::milliseconds timeout) {
    auto deadline = std::chrono::steady_clock::now() + timeout;
    while (std::chrono::steady_clock::now() < deadline) {
        std::error_code ec;
        if (fs::exists(path, ec) && fs::file_size(path, ec) > 0) {
            return true;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(25));
    }
    return false;
}

std::string joinNames(const std::vector<std::string>& names) {
    std::string out;
    for (size_t i = 0; i < names.size(); ++i) {
        if (i) out += ",";
        out += names[i];
    }
    return out;
}

}  // namespace

SignatureHash exploitBundleSignature() {
    return hashFromHex("ADD0ADD0ADD0ADD0ADD0ADD0ADD0ADD0ADD0ADD0");
}

SignatureHash mockSeBundleSignature() {
    return hashFromHex("CAFED00DCAFED00DCAFED00DCAFED00DCAFED00D");
}

void writeExploitBundle(const std::string& bundleDir) {
    fs::create_directories(bundleDir);
    KeyValueFile manifest;
    manifest.set("package_name", kExploitPackage);
    manifest.set("entries", "ExploitTerminal");
    manifest.set("requested_permissions", perm::kWriteExternalStorage);
    manifest.set("enforce_bind_terminal", "true");
    manifest.set("signature_hash", toHex(exploitBundleSignature()));
    manifest.set("executable", "scsim-terminal-host");
    manifest.store(bundleDir + "/manifest");
}

void writeMockSeBundle(const std::string& bundleDir) {
    fs::create_directories(bundleDir);
    KeyValueFile manifest;
    manifest.set("package_name", kMockSePackage);
    manifest.set("entries", "VirtualSeTerminal");
    manifest.set("enforce_bind_terminal", "true");
    manifest.set("signature_hash", toHex(mockSeBundleSignature()));
    manifest.set("executable", "scsim-terminal-host");
    manifest.store(bundleDir + "/manifest");
}

DemoOutcome runExploitDemo(const DemoOptions& options) {
    DemoOutcome outcome;

    std::string work = options.workdir;
    if (work.empty()) {
        work = makeTempDir();
    } else {
        fs::create_directories(work);
    }
    outcome.workdir = work;

    std::string pluginRoot = work + "/plugins";
    writeExploitBundle(pluginRoot + "/exploit");
    if (options.includeMockSe) {
        writeMockSeBundle(pluginRoot + "/vterm");
    }

    ServiceConfig config;
    config.profile = options.profile;
    config.loaderMode = options.mode;
    config.pluginRoot = pluginRoot;
    config.socketPath = work + "/service.sock";
    config.reportSink = options.reportOut.empty() ? work + "/report.txt" : options.reportOut;
    config.auditLogPath = work + "/audit.log";
    config.allowlist = options.allowlist;

    DeviceProfile profile = profileByName(options.profile);
    Sandbox sandbox;
    provisionProfile(sandbox, profile);
    provisionBundles(sandbox, pluginRoot, profile);

    AuditLog audit;
    ServiceModel model(config, sandbox, audit);
    setBaseIdentity(model.identity());

    Daemon daemon(model);
    daemon.start();
    model.createTerminals();

    bool allowlistBlocksExploit =
        options.allowlist &&
        std::find(options.allowlist->begin(), options.allowlist->end(),
                  exploitBundleSignature()) == options.allowlist->end();
    bool exploitLoaded = options.mode != LoaderMode::None && !allowlistBlocksExploit;

    outcome.reportPath = options.mode == LoaderMode::Hardened
                             ? pluginRoot + "/exploit/report.txt"
                             : config.reportSink;
    if (exploitLoaded) {
        // The report lands asynchronously in hardened mode; give the plugin
        // process a moment.
        waitForFile(outcome.reportPath, std::chrono::seconds(5));
        if (options.mode == LoaderMode::Hardened && !options.reportOut.empty() &&
            fs::exists(outcome.reportPath)) {
            fs::copy_file(outcome.reportPath, options.reportOut,
                          fs::copy_options::overwrite_existing);
            outcome.reportPath = options.reportOut;
        }
    }

    {
        ServiceClient client = ServiceClient::connect(config.socketPath, wellknown::kClientPackage);
        outcome.readers = client.listReaders();
    }
    outcome.addonCount = model.addonCount();

    int serviceUid = profile.serviceUid;
    auto exploitRecord = sandbox.findPackage(kExploitPackage);
    int exploitUid = exploitRecord ? exploitRecord->uid : -1;

    outcome.lines.emplace_back("mode", loaderModeName(options.mode));
    outcome.lines.emplace_back("profile", options.profile);
    outcome.lines.emplace_back("readers", joinNames(outcome.readers));
    outcome.lines.emplace_back("addons", std::to_string(outcome.addonCount));
    outcome.lines.emplace_back("service_uid", std::to_string(serviceUid));

    std::vector<std::string> expectedLegacyReaders = {UiccTerminal::kName, "EXPLOIT01"};
    std::vector<std::string> expectedNoneReaders = {UiccTerminal::kName};

    if (allowlistBlocksExploit) {
        outcome.verdict = outcome.addonCount == 0 ? "BLOCKED" : "UNEXPECTED";
        outcome.expectedHeld = outcome.addonCount == 0;
    } else if (options.mode == LoaderMode::None) {
        bool held = outcome.addonCount == 0 && outcome.readers == expectedNoneReaders;
        outcome.verdict = held ? "DISABLED" : "UNEXPECTED";
        outcome.expectedHeld = held;
    } else {
        ParsedReport parsed;
        bool haveReport = fs::exists(outcome.reportPath);
        if (haveReport) {
            parsed = parseReport(readTextFile(outcome.reportPath));
        }
        outcome.lines.emplace_back("report", outcome.reportPath);
        outcome.lines.emplace_back("report_user_id", std::to_string(parsed.userId));
        outcome.lines.emplace_back("exploit_uid", std::to_string(exploitUid));
        outcome.lines.emplace_back("granted_permissions", joinNames(parsed.grantedPermissions));

        if (options.mode == LoaderMode::Legacy) {
            bool identityMatch = haveReport && parsed.userId == serviceUid;
            std::vector<std::string> servicePerms(profile.servicePermissions.begin(),
                                                  profile.servicePermissions.end());
            std::sort(servicePerms.begin(), servicePerms.end());
            bool permissionMatch = parsed.grantedPermissions == servicePerms;
            bool readerMatch = outcome.readers == expectedLegacyReaders;
            outcome.lines.emplace_back("identity_match", identityMatch ? "true" : "false");
            outcome.lines.emplace_back("permission_set_match", permissionMatch ? "true" : "false");
            outcome.lines.emplace_back("reader_list_match", readerMatch ? "true" : "false");
            bool held = identityMatch && permissionMatch && readerMatch;
            outcome.verdict = held ? "CONFIRMED" : "UNEXPECTED";
            outcome.expectedHeld = held;
        } else {
            bool separated = haveReport && parsed.userId == exploitUid && exploitUid != serviceUid;
            bool noPrivilege = true;
            for (const std::string& p : parsed.grantedPermissions) {
                if (p == perm::kWriteSecureSettings || p == perm::kModifyPhoneState) {
                    noPrivilege = false;
                }
            }
            outcome.lines.emplace_back("identity_separated", separated ? "true" : "false");
            outcome.lines.emplace_back("privileged_permissions_leaked",
                                       noPrivilege ? "false" : "true");
            bool held = separated && noPrivilege;
            outcome.verdict = held ? "CONTAINED" : "UNEXPECTED";
            outcome.expectedHeld = held;
        }
    }
    outcome.lines.emplace_back("escalation", outcome.verdict);

    daemon.stop();
    model.shutdown();
    return outcome;
}

}  // namespace scsim
