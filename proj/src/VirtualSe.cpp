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

#include "scsim/VirtualSe.h"

#include <chrono>
#include <thread>

#include "scsim/Config.h"
#include "scsim/Errors.h"

namespace scsim {

namespace {

constexpr uint8_t kInsManageChannel = 0x70;
constexpr uint8_t kInsSelect = 0xA4;
constexpr uint8_t kInsGetData = 0xCA;
constexpr uint8_t kInsEchoDelay = 0xEE;

bool isInterindustry(uint8_t cla) { return (cla & 0x80) == 0; }

}  // namespace

const Bytes& EchoApplet::defaultAid() {
    static const Bytes aid = {0xA0, 0x00, 0x00, 0x00, 0x18, 0x45, 0x43, 0x48, 0x4F};
    return aid;
}

Bytes EchoApplet::selectResponse() const {
    // Minimal FCI: 6F 06 84 04 'E' 'C' 'H' 'O'
    return {0x6F, 0x06, 0x84, 0x04, 0x45, 0x43, 0x48, 0x4F};
}

ResponseApdu EchoApplet::process(const CommandApdu& cmd) {
    if (cmd.ins == kInsEchoDelay) {
        std::this_thread::sleep_for(std::chrono::milliseconds(cmd.p1 * 100));
    }
    ResponseApdu resp = statusResponse(sw::kSuccess);
    resp.data = cmd.data;
    return resp;
}

const Bytes& AraApplet::defaultAid() {
    static const Bytes aid = {0xA0, 0x00, 0x00, 0x01, 0x51, 0x41, 0x43, 0x4C, 0x00};
    return aid;
}

ResponseApdu AraApplet::process(const CommandApdu& cmd) {
    // GET DATA(ALL): 80 CA FF 40 00 (channel bits may vary).
    if (cmd.ins == kInsGetData && cmd.p1 == 0xFF && cmd.p2 == 0x40) {
        ResponseApdu resp = statusResponse(sw::kSuccess);
        resp.data = encodeRuleDb(db_);
        return resp;
    }
    return statusResponse(sw::kUnknownError);
}

VirtualSecureElement::VirtualSecureElement() : VirtualSecureElement(defaultAtr()) {}

VirtualSecureElement::VirtualSecureElement(Bytes atr) : atr_(std::move(atr)) {
    channels_[0].open = true;
}

Bytes VirtualSecureElement::defaultAtr() {
    return fromHex("3B9F96803FC7828031E073FE211B6407689A00829000");
}

Bytes VirtualSecureElement::reset() {
    for (size_t i = 0; i < channels_.size(); ++i) {
        channels_[i].open = (i == 0);
        channels_[i].selected.reset();
    }
    return atr_;
}

int VirtualSecureElement::openLogicalChannels() const {
    int count = 0;
    for (size_t i = 1; i < channels_.size(); ++i) {
        if (channels_[i].open) ++count;
    }
    return count;
}

bool VirtualSecureElement::channelOpen(int channel) const {
    return channel >= 0 && channel <= 3 && channels_[channel].open;
}

void VirtualSecureElement::installApplet(std::shared_ptr<Applet> applet) {
    const Bytes& aid = applet->aid();
    if (aid.size() < 5 || aid.size() > 16) {
        throw Error(ErrorCode::BadAidLength, "applet AID must be 5..16 bytes");
    }
    if (applets_.count(aid)) {
        throw Error(ErrorCode::DuplicateAid, "applet " + toHex(aid) + " already installed");
    }
    applets_[aid] = std::move(applet);
}

void VirtualSecureElement::removeApplet(const Bytes& aid) {
    if (!applets_.erase(aid)) {
        throw Error(ErrorCode::UnknownAid, "no applet " + toHex(aid));
    }
    for (ChannelSlot& slot : channels_) {
        if (slot.selected == aid) slot.selected.reset();
    }
}

Bytes VirtualSecureElement::process(BytesView rawCommand) {
    try {
        CommandApdu cmd = parseCommand(rawCommand);
        return serializeResponse(handle(cmd));
    } catch (const Error&) {
        return serializeResponse(statusResponse(sw::kUnknownError));
    }
}

ResponseApdu VirtualSecureElement::handle(const CommandApdu& cmd) {
    if (isInterindustry(cmd.cla) && cmd.ins == kInsManageChannel) {
        return manageChannel(cmd);
    }

    // Channel routing uses the two low CLA bits for every class byte, so
    // proprietary-class traffic (e.g. GET DATA) reaches its applet too.
    ChannelSlot& slot = channels_[cmd.cla & 0x03];
    if (!slot.open) {
        return statusResponse(sw::kUnknownError);
    }

    if (isInterindustry(cmd.cla) && cmd.ins == kInsSelect && cmd.p1 == 0x04) {
        auto it = applets_.find(cmd.data);
        if (it == applets_.end()) {
            return statusResponse(sw::kAppletNotFound);
        }
        slot.selected = cmd.data;
        ResponseApdu resp = statusResponse(sw::kSuccess);
        resp.data = it->second->selectResponse();
        return resp;
    }

    if (!slot.selected) {
        return statusResponse(sw::kUnknownError);
    }
    auto it = applets_.find(*slot.selected);
    if (it == applets_.end()) {
        return statusResponse(sw::kUnknownError);
    }
    return it->second->process(cmd);
}

ResponseApdu VirtualSecureElement::manageChannel(const CommandApdu& cmd) {
    if (cmd.p1 == 0x00) {  // open, assigns the lowest free channel
        for (int n = 1; n <= 3; ++n) {
            if (!channels_[n].open) {
                channels_[n].open = true;
                channels_[n].selected.reset();
                ResponseApdu resp = statusResponse(sw::kSuccess);
                resp.data = {static_cast<uint8_t>(n)};
                return resp;
            }
        }
        return statusResponse(sw::kNoLogicalChannel);
    }
    if (cmd.p1 == 0x80) {  // close channel P2; closing a closed slot is a no-op
        int n = cmd.p2;
        if (n < 1 || n > 3) {
            return statusResponse(sw::kUnknownError);
        }
        channels_[n].open = false;
        channels_[n].selected.reset();
        return statusResponse(sw::kSuccess);
    }
    return statusResponse(sw::kUnknownError);
}

std::unique_ptr<VirtualSecureElement> loadElementConfig(const std::string& path) {
    KeyValueFile config = KeyValueFile::load(path);

    Bytes atr = VirtualSecureElement::defaultAtr();
    if (auto hex = config.find("atr")) {
        atr = fromHex(*hex);
    }
    auto element = std::make_unique<VirtualSecureElement>(std::move(atr));

    for (const std::string& name : config.getList("applets")) {
        if (name == "echo") {
            element->installApplet(std::make_shared<EchoApplet>());
        } else {
            throw Error(ErrorCode::BadConfig, "unknown applet \"" + name + "\"");
        }
    }

    if (auto rules = config.find("ara_rules")) {
        AccessRuleDb db = loadRuleFile(resolveRelativeTo(path, *rules));
        element->installApplet(std::make_shared<AraApplet>(std::move(db)));
    }
    return element;
}

std::unique_ptr<VirtualSecureElement> makeDefaultElement() {
    auto element = std::make_unique<VirtualSecureElement>();
    element->installApplet(std::make_shared<EchoApplet>());
    return element;
}

}  // namespace scsim
