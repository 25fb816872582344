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

#include <sys/types.h>

#include <memory>
#include <mutex>
#include <string>

#include "scsim/Discovery.h"
#include "scsim/Terminal.h"
#include "scsim/Wire.h"

namespace scsim {

// Client side of the terminal hop: a Terminal whose fourteen operations are
// forwarded over a framed socket to a plugin process. Transport failures
// surface as TerminalFailure so the service can drop the reader.
class RemoteTerminal : public Terminal {
public:
    // Connects to `socketPath` and performs the bind handshake. `childPid`
    // may be -1 when the process is not owned by this proxy.
    static std::shared_ptr<RemoteTerminal> connect(const std::string& socketPath,
                                                   const Token& bindToken,
                                                   const std::string& servicePackage,
                                                   pid_t childPid);

    ~RemoteTerminal() override;

    pid_t childPid() const { return childPid_; }

    std::string getName() override;
    bool isCardPresent() override;
    void internalConnect() override;
    void internalDisconnect() override;
    std::optional<Bytes> getAtr() override;
    int internalOpenLogicalChannel() override;
    int internalOpenLogicalChannel(const Bytes& aid) override;
    std::optional<Bytes> getSelectResponse() override;
    Bytes internalTransmit(const Bytes& command) override;
    void internalCloseLogicalChannel(int channel) override;
    std::string getType() override;
    bool isChannelCanBeEstablished() override;
    void setCallingPackageInfo(const std::string& packageName, int userId, int processId) override;
    std::optional<Bytes> internalGetUid() override;

private:
    RemoteTerminal(int fd, pid_t childPid) : fd_(fd), childPid_(childPid) {}

    WireMessage call(const WireMessage& request);

    std::mutex ioMutex_;
    int fd_ = -1;
    pid_t childPid_ = -1;
};

// Spawns the bundle's terminal-host executable in a separate process under
// the bundle's own sandbox identity and binds to it. Rejects bundles that do
// not enforce the bind-token check (BindTerminalNotEnforced) before anything
// is spawned.
std::shared_ptr<RemoteTerminal> spawnRemoteTerminal(const PluginBundle& bundle,
                                                    const Token& bindToken,
                                                    const ServiceContext& context,
                                                    const std::string& profileName,
                                                    const std::string& pluginRoot);

// Options for the plugin-host side (the scsim-terminal-host binary).
struct TerminalHostOptions {
    std::string socketPath;
    std::string bundleDir;
    std::string entry;
    std::string expectTokenHex;
    std::string profileName;
    std::string pluginRoot;
    std::string serviceSocket;  // for add-ons that dial back into the service
    std::string reportSink;
};

// Runs the plugin process: provisions its own sandbox view, constructs the
// entry terminal under the bundle's identity, then serves bind + contract
// calls until the process is terminated. Returns a process exit code.
int runTerminalHost(const TerminalHostOptions& options);

}  // namespace scsim
