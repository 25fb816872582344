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

#include <optional>
#include <string>
#include <vector>

#include "scsim/Discovery.h"
#include "scsim/Service.h"
#include "scsim/Terminal.h"

namespace scsim {

// Everything the probe payload can observe about the process it ended up in.
struct ContextReport {
    std::string packageName;
    int userId = -1;
    std::string userName;
    int processId = 0;
    std::string processName;
    int threadId = 0;
    std::vector<std::string> processPackageNames;
    std::vector<std::string> grantedPermissions;  // sorted

    bool hasInternet = false;
    bool canWriteExternal = false;
    bool canUseWriteSecureSettingsApi = false;
    bool canWriteSecureSettingsValue = false;
    std::string secureSettingsDenial;
    bool canUseModifyPhoneStateApi = false;
    std::string modifyPhoneStateDenial;
    bool proxyMarkerWritten = false;

    bool omapiProbed = false;
    std::vector<std::string> omapiReaders;
    std::string omapiError;       // set when listing readers failed
    std::string uiccAccessError;  // set when channel open on the UICC failed
    bool uiccAccessGranted = false;
};

std::string renderReport(const ContextReport& report);

// Replaces the process/thread id values with <PID>/<TID> placeholders so
// reports from different runs can be byte-compared.
std::string normalizeReport(const std::string& text);

// Pulls the fields demo verdicts need back out of a rendered report.
struct ParsedReport {
    int userId = -1;
    std::string packageName;
    std::string userName;
    std::string processName;
    std::vector<std::string> grantedPermissions;
    std::vector<std::string> omapiReaders;
};
ParsedReport parseReport(const std::string& text);

// Add-on terminal reproducing the probe payload: the constructor inspects
// the execution context it was loaded into; once registered it exercises
// the service's client API and writes the report to its sink.
class ExploitTerminal : public Terminal, public TerminalLifecycleHook {
public:
    ExploitTerminal(ServiceContext& context, const PluginBundle& bundle);

    // Contract behavior: a terminal that pretends a card is always present
    // and fails every channel operation.
    std::string getName() override { return "EXPLOIT01"; }
    std::string getType() override { return "EXPLOIT"; }
    bool isCardPresent() override { return true; }
    void internalConnect() override {}
    void internalDisconnect() override {}
    std::optional<Bytes> getAtr() override { return Bytes{}; }
    int internalOpenLogicalChannel() override;
    int internalOpenLogicalChannel(const Bytes& aid) override;
    std::optional<Bytes> getSelectResponse() override { return std::nullopt; }
    Bytes internalTransmit(const Bytes& command) override;
    void internalCloseLogicalChannel(int) override {}
    bool isChannelCanBeEstablished() override { return false; }
    void setCallingPackageInfo(const std::string&, int, int) override {}
    std::optional<Bytes> internalGetUid() override { return Bytes{0x12, 0x34, 0x56, 0x78}; }

    void onRegistered() override;

    const ContextReport& report() const { return report_; }

private:
    void probeContext();
    void probeOmapi();
    void writeProxyMarker();
    void emitReport();

    ServiceContext& context_;
    PluginBundle bundle_;
    ContextReport report_;
};

// Benign add-on terminal backed by its own virtual secure element (echo
// applet plus a wildcard-allow rule applet). Used by the hardened demos and
// the crash containment scenarios.
class VirtualSeTerminal : public Terminal {
public:
    explicit VirtualSeTerminal(std::unique_ptr<VirtualSecureElement> element);

    static std::unique_ptr<VirtualSecureElement> makeDefaultElement();

    std::string getName() override { return "MOCKSE01"; }
    std::string getType() override { return "MOCKSE"; }
    bool isCardPresent() override { return uicc_.isCardPresent(); }
    void internalConnect() override { uicc_.internalConnect(); }
    void internalDisconnect() override { uicc_.internalDisconnect(); }
    std::optional<Bytes> getAtr() override { return uicc_.getAtr(); }
    int internalOpenLogicalChannel() override { return uicc_.internalOpenLogicalChannel(); }
    int internalOpenLogicalChannel(const Bytes& aid) override {
        return uicc_.internalOpenLogicalChannel(aid);
    }
    std::optional<Bytes> getSelectResponse() override { return uicc_.getSelectResponse(); }
    Bytes internalTransmit(const Bytes& command) override { return uicc_.internalTransmit(command); }
    void internalCloseLogicalChannel(int channel) override {
        uicc_.internalCloseLogicalChannel(channel);
    }
    bool isChannelCanBeEstablished() override { return uicc_.isChannelCanBeEstablished(); }
    void setCallingPackageInfo(const std::string& packageName, int userId, int processId) override {
        uicc_.setCallingPackageInfo(packageName, userId, processId);
    }
    std::optional<Bytes> internalGetUid() override { return std::nullopt; }

private:
    UiccTerminal uicc_;
};

}  // namespace scsim
