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

#include "scsim/RemoteTerminal.h"

#include <signal.h>
#include <sys/prctl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <thread>

#include "scsim/Service.h"

namespace scsim {

namespace fs = std::filesystem;

namespace {

void reapChild(pid_t pid) {
    if (pid <= 0) return;
    ::kill(pid, SIGTERM);
    for (int i = 0; i < 20; ++i) {
        if (::waitpid(pid, nullptr, WNOHANG) != 0) return;
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ::kill(pid, SIGKILL);
    ::waitpid(pid, nullptr, 0);
}

std::string selfExeDir() {
    std::error_code ec;
    fs::path exe = fs::read_symlink("/proc/self/exe", ec);
    if (ec) return {};
    return exe.parent_path().string();
}

std::string resolveHostExecutable(const PluginBundle& bundle) {
    const std::string& exe = bundle.manifest.executable;
    if (exe.empty()) {
        throw Error(ErrorCode::SpawnFailure,
                    "bundle " + bundle.manifest.packageName + " names no executable");
    }
    fs::path p(exe);
    if (p.is_absolute()) {
        return exe;
    }
    // Relative names resolve against the bundle dir, then the directory of
    // the running binary; execvp falls back to PATH for bare names.
    fs::path inBundle = fs::path(bundle.dir) / p;
    if (fs::exists(inBundle)) {
        return inBundle.string();
    }
    std::string exeDir = selfExeDir();
    if (!exeDir.empty() && fs::exists(fs::path(exeDir) / p)) {
        return (fs::path(exeDir) / p).string();
    }
    return exe;
}

}  // namespace

std::shared_ptr<RemoteTerminal> RemoteTerminal::connect(const std::string& socketPath,
                                                        const Token& bindToken,
                                                        const std::string& servicePackage,
                                                        pid_t childPid) {
    int fd = -1;
    // The plugin process needs a moment to create its socket.
    auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(5);
    while (true) {
        try {
            fd = connectUnix(socketPath);
            break;
        } catch (const Error&) {
            if (std::chrono::steady_clock::now() > deadline) {
                reapChild(childPid);
                throw Error(ErrorCode::HandshakeFailure,
                            "plugin socket " + socketPath + " never came up");
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(20));
        }
    }

    try {
        sendMsg(fd, MsgBind{bindToken, servicePackage});
        WireMessage reply = recvMsg(fd);
        if (auto* error = std::get_if<MsgError>(&reply)) {
            throw Error(ErrorCode::HandshakeFailure, "bind rejected: " + error->message);
        }
        auto* ack = std::get_if<MsgAck>(&reply);
        if (!ack || ack->of != wiretype::kBind) {
            throw Error(ErrorCode::HandshakeFailure, "unexpected bind reply");
        }
    } catch (const Error& e) {
        closeSocket(fd);
        reapChild(childPid);
        if (e.code() == ErrorCode::HandshakeFailure) throw;
        throw Error(ErrorCode::HandshakeFailure, std::string("bind handshake failed: ") + e.what());
    }

    return std::shared_ptr<RemoteTerminal>(new RemoteTerminal(fd, childPid));
}

RemoteTerminal::~RemoteTerminal() {
    closeSocket(fd_);
    reapChild(childPid_);
}

WireMessage RemoteTerminal::call(const WireMessage& request) {
    std::lock_guard lock(ioMutex_);
    try {
        sendMsg(fd_, request);
        WireMessage reply = recvMsg(fd_);
        if (auto* error = std::get_if<MsgError>(&reply)) {
            throw errorFromWire(error->code, error->message);
        }
        return reply;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::IoError) {
            throw Error(ErrorCode::TerminalFailure, "plugin process connection lost");
        }
        throw;
    }
}

namespace {

template <typename T>
T expectReply(WireMessage reply) {
    if (auto* typed = std::get_if<T>(&reply)) {
        return std::move(*typed);
    }
    throw Error(ErrorCode::TerminalFailure, "plugin answered with the wrong message type");
}

}  // namespace

std::string RemoteTerminal::getName() {
    return expectReply<MsgText>(call(MsgTerminalOp{wiretype::kGetName})).text;
}

std::string RemoteTerminal::getType() {
    return expectReply<MsgText>(call(MsgTerminalOp{wiretype::kGetType})).text;
}

bool RemoteTerminal::isCardPresent() {
    return expectReply<MsgFlag>(call(MsgTerminalOp{wiretype::kIsCardPresent})).value;
}

void RemoteTerminal::internalConnect() {
    expectReply<MsgAck>(call(MsgTerminalOp{wiretype::kConnect}));
}

void RemoteTerminal::internalDisconnect() {
    expectReply<MsgAck>(call(MsgTerminalOp{wiretype::kDisconnect}));
}

std::optional<Bytes> RemoteTerminal::getAtr() {
    return expectReply<MsgOptBytes>(call(MsgTerminalOp{wiretype::kGetAtr})).data;
}

int RemoteTerminal::internalOpenLogicalChannel() {
    return static_cast<int>(
        expectReply<MsgChannelNumber>(call(MsgTerminalOp{wiretype::kOpenChannelNoAid})).channel);
}

int RemoteTerminal::internalOpenLogicalChannel(const Bytes& aid) {
    return static_cast<int>(expectReply<MsgChannelNumber>(call(MsgOpenLcAid{aid})).channel);
}

std::optional<Bytes> RemoteTerminal::getSelectResponse() {
    return expectReply<MsgOptBytes>(call(MsgTerminalOp{wiretype::kGetSelectResponse})).data;
}

Bytes RemoteTerminal::internalTransmit(const Bytes& command) {
    return expectReply<MsgTerminalResponse>(call(MsgTerminalTransmit{command})).response;
}

void RemoteTerminal::internalCloseLogicalChannel(int channel) {
    expectReply<MsgAck>(call(MsgCloseLc{static_cast<uint32_t>(channel)}));
}

bool RemoteTerminal::isChannelCanBeEstablished() {
    return expectReply<MsgFlag>(call(MsgTerminalOp{wiretype::kIsChannelCanBeEstablished})).value;
}

void RemoteTerminal::setCallingPackageInfo(const std::string& packageName, int userId,
                                           int processId) {
    expectReply<MsgAck>(call(MsgSetCallingPackageInfo{packageName, static_cast<uint32_t>(userId),
                                                      static_cast<uint32_t>(processId)}));
}

std::optional<Bytes> RemoteTerminal::internalGetUid() {
    return expectReply<MsgOptBytes>(call(MsgTerminalOp{wiretype::kGetUid})).data;
}

std::shared_ptr<RemoteTerminal> spawnRemoteTerminal(const PluginBundle& bundle,
                                                    const Token& bindToken,
                                                    const ServiceContext& context,
                                                    const std::string& profileName,
                                                    const std::string& pluginRoot) {
    // The keystone of the hardened regime: modules that do not enforce the
    // bind permission are rejected outright, before any code of theirs runs.
    if (!bundle.manifest.enforceBindTerminal) {
        throw Error(ErrorCode::BindTerminalNotEnforced,
                    "bundle " + bundle.manifest.packageName + " does not enforce BIND_TERMINAL");
    }

    std::vector<std::string> entries = enumerateEntries(bundle);
    if (entries.empty()) {
        throw Error(ErrorCode::EntryNotFound,
                    "bundle " + bundle.manifest.packageName + " exports no terminal entry");
    }
    const std::string& entry = entries.front();

    std::string executable = resolveHostExecutable(bundle);
    std::string socketPath = (fs::path(bundle.dir) / "terminal.sock").string();
    std::string reportSink = (fs::path(bundle.dir) / "report.txt").string();
    ::unlink(socketPath.c_str());

    std::vector<std::string> args = {
        executable,        "--socket",      socketPath,
        "--bundle",        bundle.dir,      "--entry",
        entry,             "--expect-token", tokenToHex(bindToken),
        "--profile",       profileName,     "--plugin-root",
        pluginRoot,        "--report-sink", reportSink,
    };
    if (!context.serviceSocket.empty()) {
        args.push_back("--service-socket");
        args.push_back(context.serviceSocket);
    }

    pid_t pid = ::fork();
    if (pid < 0) {
        throw Error(ErrorCode::SpawnFailure, "fork failed");
    }
    if (pid == 0) {
        std::vector<char*> argv;
        argv.reserve(args.size() + 1);
        for (std::string& arg : args) argv.push_back(arg.data());
        argv.push_back(nullptr);
        ::execvp(argv[0], argv.data());
        _exit(127);
    }

    return RemoteTerminal::connect(socketPath, bindToken, wellknown::kServicePackage, pid);
}

namespace {

// Serves one bound connection until EOF. Returns when the peer disconnects.
void serveBoundConnection(int fd, Terminal& terminal) {
    while (true) {
        WireMessage request;
        try {
            request = recvMsg(fd);
        } catch (const Error&) {
            return;  // disconnect or garbage; drop the connection
        }

        WireMessage reply = MsgError{wirecode::kBadRequest, "unsupported request"};
        try {
            if (auto* op = std::get_if<MsgTerminalOp>(&request)) {
                switch (op->op) {
                    case wiretype::kGetName:
                        reply = MsgText{wiretype::kGetName, terminal.getName()};
                        break;
                    case wiretype::kGetType:
                        reply = MsgText{wiretype::kGetType, terminal.getType()};
                        break;
                    case wiretype::kIsCardPresent:
                        reply = MsgFlag{wiretype::kIsCardPresent, terminal.isCardPresent()};
                        break;
                    case wiretype::kConnect:
                        terminal.internalConnect();
                        reply = MsgAck{wiretype::kConnect};
                        break;
                    case wiretype::kDisconnect:
                        terminal.internalDisconnect();
                        reply = MsgAck{wiretype::kDisconnect};
                        break;
                    case wiretype::kGetAtr:
                        reply = MsgOptBytes{wiretype::kGetAtr, terminal.getAtr()};
                        break;
                    case wiretype::kOpenChannelNoAid:
                        reply = MsgChannelNumber{
                            wiretype::kOpenChannelNoAid,
                            static_cast<uint32_t>(terminal.internalOpenLogicalChannel())};
                        break;
                    case wiretype::kGetSelectResponse:
                        reply = MsgOptBytes{wiretype::kGetSelectResponse,
                                            terminal.getSelectResponse()};
                        break;
                    case wiretype::kIsChannelCanBeEstablished:
                        reply = MsgFlag{wiretype::kIsChannelCanBeEstablished,
                                        terminal.isChannelCanBeEstablished()};
                        break;
                    case wiretype::kGetUid:
                        reply = MsgOptBytes{wiretype::kGetUid, terminal.internalGetUid()};
                        break;
                    default:
                        break;
                }
            } else if (auto* open = std::get_if<MsgOpenLcAid>(&request)) {
                reply = MsgChannelNumber{
                    wiretype::kOpenChannelAid,
                    static_cast<uint32_t>(terminal.internalOpenLogicalChannel(open->aid))};
            } else if (auto* transmit = std::get_if<MsgTerminalTransmit>(&request)) {
                reply = MsgTerminalResponse{terminal.internalTransmit(transmit->apdu)};
            } else if (auto* close = std::get_if<MsgCloseLc>(&request)) {
                terminal.internalCloseLogicalChannel(static_cast<int>(close->channel));
                reply = MsgAck{wiretype::kCloseLogicalChannel};
            } else if (auto* info = std::get_if<MsgSetCallingPackageInfo>(&request)) {
                terminal.setCallingPackageInfo(info->packageName, static_cast<int>(info->userId),
                                               static_cast<int>(info->processId));
                reply = MsgAck{wiretype::kSetCallingPackageInfo};
            }
        } catch (const Error& e) {
            reply = MsgError{wireCodeFor(e.code()), e.message()};
        }

        try {
            sendMsg(fd, reply);
        } catch (const Error&) {
            return;
        }
    }
}

}  // namespace

int runTerminalHost(const TerminalHostOptions& options) {
    // Do not outlive the daemon that spawned us.
    ::prctl(PR_SET_PDEATHSIG, SIGTERM);

    // Rebuild the same sandbox view the daemon provisioned, then take on the
    // bundle's own identity. Nothing of the service's context exists here.
    Sandbox sandbox;
    DeviceProfile profile = profileByName(options.profileName);
    provisionProfile(sandbox, profile);
    if (!options.pluginRoot.empty()) {
        provisionBundles(sandbox, options.pluginRoot, profile);
    }

    PluginBundle bundle{options.bundleDir, parseManifest(options.bundleDir + "/manifest")};
    IdentityContext self = sandbox.identityFor(bundle.manifest.packageName);
    setBaseIdentity(self);

    AuditLog audit;
    CapabilityGateways gateways(sandbox, &audit);
    ServiceContext context;
    context.service = nullptr;  // out-of-process: no live handle to leak
    context.sandbox = &sandbox;
    context.gateways = &gateways;
    context.audit = &audit;
    context.serviceIdentity = self;
    context.reportSink = options.reportSink;
    context.serviceSocket = options.serviceSocket;
    context.runtimeDir = options.bundleDir;

    std::shared_ptr<Terminal> terminal =
        builtinEntryRegistry().construct(options.entry, context, bundle);

    Token expected = tokenFromHex(options.expectTokenHex);
    int listenFd = listenUnix(options.socketPath);
    bool hookDelivered = false;

    while (true) {
        int fd = acceptConnection(listenFd);

        // First message must be a BIND carrying the token that models the
        // BIND_TERMINAL permission. Anything else is turned away before a
        // single contract call is served.
        bool bound = false;
        try {
            WireMessage first = recvMsg(fd);
            if (auto* bind = std::get_if<MsgBind>(&first)) {
                if (tokensEqualConstantTime(expected, bind->bindToken)) {
                    sendMsg(fd, MsgAck{wiretype::kBind});
                    bound = true;
                } else {
                    sendMsg(fd, MsgError{wirecode::kAuthFailed,
                                         "caller does not hold BIND_TERMINAL"});
                }
            } else {
                sendMsg(fd, MsgError{wirecode::kAuthFailed, "expected BIND"});
            }
        } catch (const Error&) {
        }
        if (!bound) {
            closeSocket(fd);
            continue;
        }

        if (!hookDelivered) {
            hookDelivered = true;
            if (auto hook = std::dynamic_pointer_cast<TerminalLifecycleHook>(terminal)) {
                std::thread([hook] {
                    try {
                        hook->onRegistered();
                    } catch (...) {
                    }
                }).detach();
            }
        }

        serveBoundConnection(fd, *terminal);
        closeSocket(fd);
    }
}

}  // namespace scsim
