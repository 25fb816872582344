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

#include "scsim/Terminal.h"

#include "scsim/Apdu.h"
#include "scsim/Errors.h"

namespace scsim {

UiccTerminal::UiccTerminal(std::unique_ptr<VirtualSecureElement> element)
    : element_(std::move(element)) {}

bool UiccTerminal::isCardPresent() { return true; }

void UiccTerminal::internalConnect() {
    std::lock_guard lock(lock_);
    atr_ = element_->reset();
    connected_ = true;
}

void UiccTerminal::internalDisconnect() {
    std::lock_guard lock(lock_);
    connected_ = false;
    atr_.reset();
    selectResponse_.reset();
}

std::optional<Bytes> UiccTerminal::getAtr() {
    std::lock_guard lock(lock_);
    return atr_;
}

int UiccTerminal::internalOpenLogicalChannel() { return openChannel(nullptr); }

int UiccTerminal::internalOpenLogicalChannel(const Bytes& aid) { return openChannel(&aid); }

int UiccTerminal::openChannel(const Bytes* aid) {
    std::lock_guard lock(lock_);
    if (!connected_) {
        throw Error(ErrorCode::NotConnected, "terminal is not connected");
    }

    ResponseApdu opened =
        parseResponse(element_->process(serializeCommand(buildManageChannelOpen())));
    if (opened.sw() == sw::kNoLogicalChannel) {
        throw Error(ErrorCode::NoChannelAvailable, "element has no free logical channel");
    }
    if (opened.sw() != sw::kSuccess || opened.data.size() != 1) {
        throw Error(ErrorCode::TerminalFailure, "unexpected MANAGE CHANNEL response");
    }
    int channel = opened.data[0];

    if (!aid) {
        // Channel stays bound to no applet until the client SELECTs.
        selectResponse_.reset();
        return channel;
    }

    CommandApdu select = setChannel(buildSelect(*aid), channel);
    ResponseApdu selected = parseResponse(element_->process(serializeCommand(select)));
    if (selected.sw() != sw::kSuccess) {
        // Release the channel before surfacing the error.
        element_->process(serializeCommand(buildManageChannelClose(channel)));
        if (selected.sw() == sw::kAppletNotFound) {
            throw Error(ErrorCode::AppletNotFound, "no applet with AID " + toHex(*aid));
        }
        throw Error(ErrorCode::TerminalFailure, "SELECT failed with unexpected status");
    }
    selectResponse_ = selected.data;
    return channel;
}

std::optional<Bytes> UiccTerminal::getSelectResponse() {
    std::lock_guard lock(lock_);
    return selectResponse_;
}

Bytes UiccTerminal::internalTransmit(const Bytes& command) {
    std::lock_guard lock(lock_);
    if (!connected_) {
        throw Error(ErrorCode::NotConnected, "terminal is not connected");
    }
    return element_->process(command);
}

void UiccTerminal::internalCloseLogicalChannel(int channel) {
    std::lock_guard lock(lock_);
    if (!connected_) {
        throw Error(ErrorCode::NotConnected, "terminal is not connected");
    }
    element_->process(serializeCommand(buildManageChannelClose(channel)));
}

bool UiccTerminal::isChannelCanBeEstablished() {
    std::lock_guard lock(lock_);
    return connected_ && element_->openLogicalChannels() < 3;
}

void UiccTerminal::setCallingPackageInfo(const std::string&, int, int) {
    // The built-in terminal has no use for caller info; add-ons receive it
    // through the same contract call.
}

bool ConformanceReport::conforms() const {
    if (operations.size() != static_cast<size_t>(kTerminalOperationCount)) return false;
    for (const auto& [name, ok] : operations) {
        if (!ok) return false;
    }
    return true;
}

ConformanceReport probeConformance(Terminal& terminal) {
    ConformanceReport report;
    auto probe = [&report](const char* name, auto&& call) {
        bool ok = true;
        try {
            call();
        } catch (const Error&) {
            // A typed failure still proves the operation is implemented.
        } catch (...) {
            ok = false;
        }
        report.operations.emplace_back(name, ok);
    };

    probe("getName", [&] { terminal.getName(); });
    probe("getType", [&] { terminal.getType(); });
    probe("isCardPresent", [&] { terminal.isCardPresent(); });
    probe("internalConnect", [&] { terminal.internalConnect(); });
    probe("getAtr", [&] { terminal.getAtr(); });
    probe("internalOpenLogicalChannel", [&] { terminal.internalOpenLogicalChannel(); });
    probe("internalOpenLogicalChannelAid",
          [&] { terminal.internalOpenLogicalChannel(EchoApplet::defaultAid()); });
    probe("getSelectResponse", [&] { terminal.getSelectResponse(); });
    probe("internalTransmit", [&] { terminal.internalTransmit({0x00, 0xB0, 0x00, 0x00}); });
    probe("internalCloseLogicalChannel", [&] { terminal.internalCloseLogicalChannel(1); });
    probe("isChannelCanBeEstablished", [&] { terminal.isChannelCanBeEstablished(); });
    probe("setCallingPackageInfo", [&] { terminal.setCallingPackageInfo("probe", 0, 0); });
    probe("internalGetUid", [&] { terminal.internalGetUid(); });
    probe("internalDisconnect", [&] { terminal.internalDisconnect(); });

    return report;
}

}  // namespace scsim
