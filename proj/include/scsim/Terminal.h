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

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "scsim/Bytes.h"
#include "scsim/VirtualSe.h"

namespace scsim {

// The terminal provider contract: ten core operations plus four extended
// ones. Built-in terminals may stub the extended set; add-on terminals must
// implement all fourteen.
class Terminal {
public:
    virtual ~Terminal() = default;

    // Core set.
    virtual std::string getName() = 0;
    virtual bool isCardPresent() = 0;
    virtual void internalConnect() = 0;
    virtual void internalDisconnect() = 0;
    virtual std::optional<Bytes> getAtr() = 0;
    virtual int internalOpenLogicalChannel() = 0;
    virtual int internalOpenLogicalChannel(const Bytes& aid) = 0;
    virtual std::optional<Bytes> getSelectResponse() = 0;
    virtual Bytes internalTransmit(const Bytes& command) = 0;
    virtual void internalCloseLogicalChannel(int channel) = 0;

    // Extended set.
    virtual std::string getType() = 0;
    virtual bool isChannelCanBeEstablished() = 0;
    virtual void setCallingPackageInfo(const std::string& packageName, int userId, int processId) = 0;
    virtual std::optional<Bytes> internalGetUid() = 0;
};

constexpr int kTerminalOperationCount = 14;

// Built-in UICC terminal driving a virtual secure element. The element is
// single-threaded; this terminal owns the lock that serializes access.
class UiccTerminal : public Terminal {
public:
    static constexpr const char* kName = "SIM: UICC";

    explicit UiccTerminal(std::unique_ptr<VirtualSecureElement> element);

    std::string getName() override { return kName; }
    bool isCardPresent() override;
    void internalConnect() override;
    void internalDisconnect() override;
    std::optional<Bytes> getAtr() override;
    int internalOpenLogicalChannel() override;
    int internalOpenLogicalChannel(const Bytes& aid) override;
    std::optional<Bytes> getSelectResponse() override;
    Bytes internalTransmit(const Bytes& command) override;
    void internalCloseLogicalChannel(int channel) override;

    std::string getType() override { return "UICC"; }
    bool isChannelCanBeEstablished() override;
    void setCallingPackageInfo(const std::string& packageName, int userId, int processId) override;
    std::optional<Bytes> internalGetUid() override { return std::nullopt; }

    // Direct element access for the telephony gateway and for tests; the
    // lock must be taken through elementLock().
    VirtualSecureElement& element() { return *element_; }
    std::mutex& elementLock() { return lock_; }

private:
    int openChannel(const Bytes* aid);

    std::unique_ptr<VirtualSecureElement> element_;
    std::mutex lock_;
    bool connected_ = false;
    std::optional<Bytes> atr_;
    std::optional<Bytes> selectResponse_;
};

enum class TerminalKind { BuiltIn, AddonLegacy, AddonHardened };

// Registry entry: the service serializes contract calls per terminal
// through `busy`.
struct TerminalRecord {
    std::string name;
    TerminalKind kind = TerminalKind::BuiltIn;
    std::shared_ptr<Terminal> terminal;
    std::shared_ptr<std::mutex> busy = std::make_shared<std::mutex>();
};

struct ConformanceReport {
    // One entry per contract operation; true when the call returned or
    // raised a typed Error (an operation that is allowed to fail still
    // counts as implemented).
    std::vector<std::pair<std::string, bool>> operations;

    bool conforms() const;
};

// Calls each of the fourteen operations once.
ConformanceReport probeConformance(Terminal& terminal);

}  // namespace scsim
