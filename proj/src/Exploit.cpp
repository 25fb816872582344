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

#include "scsim/Exploit.h"

#include <sys/syscall.h>
#include <unistd.h>

#include <sstream>

#include "scsim/Client.h"
#include "scsim/Config.h"

namespace scsim {

namespace {

const char* boolWord(bool value) { return value ? "true" : "false"; }

int currentTid() { return static_cast<int>(::syscall(SYS_gettid)); }

}  // namespace

std::string renderReport(const ContextReport& r) {
    std::ostringstream out;
    out << "Package name: " << r.packageName << "\n";
    out << "User ID: " << r.userId << "\n";
    out << "User name: " << r.userName << "\n";
    out << "Process ID: " << r.processId << "\n";
    out << "Process name: " << r.processName << "\n";
    out << "Thread ID: " << r.threadId << "\n";
    out << "Process package names:\n";
    for (const std::string& name : r.processPackageNames) {
        out << "  " << name << "\n";
    }
    out << "Granted permissions:\n";
    for (const std::string& permission : r.grantedPermissions) {
        out << "  " << permission << "\n";
    }
    out << "Has internet connectivity? " << boolWord(r.hasInternet) << "\n";
    out << "Can write external storage? " << boolWord(r.canWriteExternal) << "\n";
    out << "Can access API protected with WRITE_SECURE_SETTINGS permission? "
        << boolWord(r.canUseWriteSecureSettingsApi) << "\n";
    out << "Can access write to Settings.Secure? " << boolWord(r.canWriteSecureSettingsValue)
        << "\n";
    if (!r.canWriteSecureSettingsValue && !r.secureSettingsDenial.empty()) {
        out << "  java.lang.SecurityException: " << r.secureSettingsDenial << "\n";
    }
    out << "Can access API protected with MODIFY_PHONE_STATE permission? "
        << boolWord(r.canUseModifyPhoneStateApi) << "\n";
    if (!r.canUseModifyPhoneStateApi && !r.modifyPhoneStateDenial.empty()) {
        out << "  java.lang.SecurityException: " << r.modifyPhoneStateDenial << "\n";
    }
    out << "Proxy marker delivered to add-on package? " << boolWord(r.proxyMarkerWritten) << "\n";
    if (r.omapiProbed) {
        if (r.omapiError.empty()) {
            out << "OMAPI readers:\n";
            for (const std::string& name : r.omapiReaders) {
                out << "  " << name << "\n";
            }
            out << "Can access applets on SIM: UICC? " << boolWord(r.uiccAccessGranted) << "\n";
            if (!r.uiccAccessGranted && !r.uiccAccessError.empty()) {
                out << "  " << r.uiccAccessError << "\n";
            }
        } else {
            out << "OMAPI readers: denied\n";
            out << "  " << r.omapiError << "\n";
        }
    }
    return out.str();
}

std::string normalizeReport(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("Process ID: ", 0) == 0) {
            out << "Process ID: <PID>\n";
        } else if (line.rfind("Thread ID: ", 0) == 0) {
            out << "Thread ID: <TID>\n";
        } else {
            out << line << "\n";
        }
    }
    return out.str();
}

ParsedReport parseReport(const std::string& text) {
    ParsedReport parsed;
    std::istringstream in(text);
    std::string line;
    enum class Section { None, Permissions, Readers } section = Section::None;
    while (std::getline(in, line)) {
        if (line.rfind("  ", 0) == 0) {
            if (section == Section::Permissions) {
                parsed.grantedPermissions.push_back(line.substr(2));
            } else if (section == Section::Readers) {
                parsed.omapiReaders.push_back(line.substr(2));
            }
            continue;
        }
        section = Section::None;
        if (line.rfind("User ID: ", 0) == 0) {
            parsed.userId = std::stoi(line.substr(9));
        } else if (line.rfind("Package name: ", 0) == 0) {
            parsed.packageName = line.substr(14);
        } else if (line.rfind("User name: ", 0) == 0) {
            parsed.userName = line.substr(11);
        } else if (line.rfind("Process name: ", 0) == 0) {
            parsed.processName = line.substr(14);
        } else if (line == "Granted permissions:") {
            section = Section::Permissions;
        } else if (line == "OMAPI readers:") {
            section = Section::Readers;
        }
    }
    return parsed;
}

ExploitTerminal::ExploitTerminal(ServiceContext& context, const PluginBundle& bundle)
    : context_(context), bundle_(bundle) {
    // The constructor body is the injected payload: whatever identity this
    // runs under is what the probe sees.
    probeContext();
}

int ExploitTerminal::internalOpenLogicalChannel() {
    throw Error(ErrorCode::NoResourceAvailable, "exploit terminal has no channels");
}

int ExploitTerminal::internalOpenLogicalChannel(const Bytes&) {
    throw Error(ErrorCode::NoResourceAvailable, "exploit terminal has no channels");
}

Bytes ExploitTerminal::internalTransmit(const Bytes&) { return Bytes{0x6F, 0x00}; }

void ExploitTerminal::probeContext() {
    IdentityContext id = currentIdentity();
    report_.packageName = id.packageName;
    report_.userId = id.uid;
    report_.userName = id.userName;
    report_.processId = static_cast<int>(::getpid());
    report_.processName = id.processName;
    report_.threadId = currentTid();

    Sandbox* sandbox = context_.sandbox;
    if (!sandbox) return;
    if (auto record = sandbox->findUid(id.uid)) {
        report_.processPackageNames = {record->name};
    }

    for (const std::string& permission : permissionVocabulary()) {
        try {
            if (sandbox->checkPermission(permission, report_.processId, id.uid) ==
                PermissionCheck::Granted) {
                report_.grantedPermissions.push_back(permission);
            }
        } catch (const Error&) {
        }
    }

    try {
        report_.hasInternet = sandbox->checkPermission(perm::kInternet, report_.processId,
                                                       id.uid) == PermissionCheck::Granted;
        report_.canWriteExternal =
            sandbox->checkPermission(perm::kWriteExternalStorage, report_.processId, id.uid) ==
            PermissionCheck::Granted;
    } catch (const Error&) {
    }

    if (context_.gateways) {
        GatewayResult nfc = context_.gateways->toggleNfc(id);
        report_.canUseWriteSecureSettingsApi = nfc.ok;

        GatewayResult setting = context_.gateways->writeSecureSetting(id, "adb_enabled", "1");
        report_.canWriteSecureSettingsValue = setting.ok;
        report_.secureSettingsDenial = setting.message;

        GatewayResult call = context_.gateways->answerRingingCall(id);
        report_.canUseModifyPhoneStateApi = call.ok;
        report_.modifyPhoneStateDenial = call.message;
    }
}

void ExploitTerminal::onRegistered() {
    probeOmapi();
    writeProxyMarker();
    emitReport();
}

void ExploitTerminal::probeOmapi() {
    report_.omapiProbed = true;
    if (context_.service) {
        // Legacy regime: call straight into the leaked service handle. The
        // ambient identity here is the service's own, so the SMARTCARD gate
        // never fires even though this package does not hold the permission.
        IdentityContext id = currentIdentity();
        try {
            report_.omapiReaders = context_.service->listReaders(id);
        } catch (const Error& e) {
            report_.omapiError = e.what();
            return;
        }
        try {
            uint32_t session = context_.service->openSession(id, UiccTerminal::kName);
            try {
                auto channel =
                    context_.service->openLogicalChannel(id, session, EchoApplet::defaultAid());
                report_.uiccAccessGranted = true;
                context_.service->closeChannel(id, channel.channelId);
            } catch (const Error& e) {
                report_.uiccAccessError = e.what();
            }
            context_.service->closeSession(id, session);
        } catch (const Error& e) {
            report_.uiccAccessError = e.what();
        }
        return;
    }

    if (context_.serviceSocket.empty()) {
        report_.omapiError = "no service endpoint available";
        return;
    }
    // Hardened regime: dial the service like any external client would.
    try {
        ServiceClient client =
            ServiceClient::connect(context_.serviceSocket, bundle_.manifest.packageName);
        report_.omapiReaders = client.listReaders();
        uint32_t session = client.openSession(UiccTerminal::kName);
        try {
            auto channel = client.openChannel(session, EchoApplet::defaultAid());
            report_.uiccAccessGranted = true;
            client.closeChannel(channel.channelId);
        } catch (const Error& e) {
            report_.uiccAccessError = e.what();
        }
        client.closeSession(session);
    } catch (const Error& e) {
        report_.omapiError = e.what();
    }
}

void ExploitTerminal::writeProxyMarker() {
    // One observable side effect delivered into the add-on's own package
    // directory while running under whatever identity loaded us.
    try {
        IdentityContext id = currentIdentity();
        writeTextFile(bundle_.dir + "/proxy_marker.txt",
                      "relayed-for=" + bundle_.manifest.packageName +
                          " executed-as-uid=" + std::to_string(id.uid) + "\n");
        report_.proxyMarkerWritten = true;
    } catch (const Error&) {
        report_.proxyMarkerWritten = false;
    }
}

void ExploitTerminal::emitReport() {
    if (context_.reportSink.empty()) return;
    writeTextFile(context_.reportSink, renderReport(report_));
}

VirtualSeTerminal::VirtualSeTerminal(std::unique_ptr<VirtualSecureElement> element)
    : uicc_(std::move(element)) {}

std::unique_ptr<VirtualSecureElement> VirtualSeTerminal::makeDefaultElement() {
    auto element = std::make_unique<VirtualSecureElement>();
    element->installApplet(std::make_shared<EchoApplet>());
    AccessRuleDb permissive;
    permissive.rules.push_back(AccessRule{std::nullopt, std::nullopt, RulePolicy::Allow, {}});
    element->installApplet(std::make_shared<AraApplet>(std::move(permissive)));
    return element;
}

EntryRegistry& builtinEntryRegistry() {
    static EntryRegistry registry = [] {
        EntryRegistry r;
        r.registerEntry("ExploitTerminal",
                        [](ServiceContext& context, const PluginBundle& bundle) {
                            return std::make_shared<ExploitTerminal>(context, bundle);
                        });
        r.registerEntry("VirtualSeTerminal", [](ServiceContext&, const PluginBundle&) {
            return std::make_shared<VirtualSeTerminal>(VirtualSeTerminal::makeDefaultElement());
        });
        return r;
    }();
    return registry;
}

}  // namespace scsim
