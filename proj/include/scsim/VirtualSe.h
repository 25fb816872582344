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
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "scsim/AccessControl.h"
#include "scsim/Apdu.h"
#include "scsim/Bytes.h"

namespace scsim {

// On-card application. Handlers must be deterministic for a given command
// and applet state; SELECT is dispatched by the element, not the applet.
class Applet {
public:
    virtual ~Applet() = default;

    virtual const Bytes& aid() const = 0;
    virtual Bytes selectResponse() const = 0;
    virtual ResponseApdu process(const CommandApdu& cmd) = 0;
};

// Test applet that echoes command data with SW 9000. A command with
// INS 0xEE stalls for P1 x 100 ms before answering, which gives the crash
// containment scenarios a transmit to interrupt.
class EchoApplet : public Applet {
public:
    static const Bytes& defaultAid();

    const Bytes& aid() const override { return defaultAid(); }
    Bytes selectResponse() const override;
    ResponseApdu process(const CommandApdu& cmd) override;
};

// Access rule applet (ARA-M). Serves the rule database through
// GET DATA(ALL) and answers nothing else.
class AraApplet : public Applet {
public:
    static const Bytes& defaultAid();

    explicit AraApplet(AccessRuleDb db) : db_(std::move(db)) {}

    const Bytes& aid() const override { return defaultAid(); }
    Bytes selectResponse() const override { return {}; }
    ResponseApdu process(const CommandApdu& cmd) override;

    const AccessRuleDb& ruleDb() const { return db_; }
    void setRuleDb(AccessRuleDb db) { db_ = std::move(db); }

private:
    AccessRuleDb db_;
};

// Simulated UICC: an ATR, an applet roster and a basic channel plus three
// logical channels. process() is total -- every fault becomes a status word.
class VirtualSecureElement {
public:
    VirtualSecureElement();
    explicit VirtualSecureElement(Bytes atr);

    static Bytes defaultAtr();

    // Closes channels 1..3, clears all selections, returns the ATR.
    Bytes reset();

    Bytes process(BytesView rawCommand);

    void installApplet(std::shared_ptr<Applet> applet);
    void removeApplet(const Bytes& aid);
    bool hasApplet(const Bytes& aid) const { return applets_.count(aid) > 0; }

    const Bytes& atr() const { return atr_; }
    int openLogicalChannels() const;
    bool channelOpen(int channel) const;

private:
    struct ChannelSlot {
        bool open = false;
        std::optional<Bytes> selected;
    };

    ResponseApdu handle(const CommandApdu& cmd);
    ResponseApdu manageChannel(const CommandApdu& cmd);

    Bytes atr_;
    std::map<Bytes, std::shared_ptr<Applet>> applets_;
    std::array<ChannelSlot, 4> channels_;
};

// Element config file: `atr` (hex), `applets` (comma list of built-in applet
// names, currently "echo"), `ara_rules` (path to a rule file, installs an
// access rule applet). Paths are resolved relative to the config file.
std::unique_ptr<VirtualSecureElement> loadElementConfig(const std::string& path);

// Default element used when no config is given: default ATR + echo applet.
std::unique_ptr<VirtualSecureElement> makeDefaultElement();

}  // namespace scsim
