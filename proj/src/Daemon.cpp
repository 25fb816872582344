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

#include "scsim/Daemon.h"

#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>

#include "scsim/Config.h"
#include "scsim/Wire.h"

namespace scsim {

Daemon::Daemon(ServiceModel& model) : model_(model), socketPath_(model.config().socketPath) {}

Daemon::~Daemon() { stop(); }

void Daemon::start() {
    if (running_.exchange(true)) return;
    if (socketPath_.empty()) {
        throw Error(ErrorCode::BadConfig, "service config names no socket path");
    }
    listenFd_ = listenUnix(socketPath_);
    writeTextFile(socketPath_ + ".token", tokenToHex(model_.sandbox().clientAuthToken()) + "\n");
    acceptThread_ = std::thread([this] { acceptLoop(); });
}

void Daemon::stop() {
    if (!running_.exchange(false)) return;
    // shutdown() does not interrupt accept() on a unix listening socket, so
    // poke the acceptor with a throwaway connection.
    try {
        closeSocket(connectUnix(socketPath_));
    } catch (const Error&) {
    }
    {
        std::lock_guard lock(clientsMutex_);
        for (int fd : clientFds_) {
            ::shutdown(fd, SHUT_RDWR);
        }
    }
    if (acceptThread_.joinable()) acceptThread_.join();
    for (std::thread& handler : handlers_) {
        if (handler.joinable()) handler.join();
    }
    handlers_.clear();
    closeSocket(listenFd_);
    listenFd_ = -1;
    ::unlink(socketPath_.c_str());
    ::unlink((socketPath_ + ".token").c_str());
}

void Daemon::acceptLoop() {
    while (running_) {
        int fd;
        try {
            fd = acceptConnection(listenFd_);
        } catch (const Error&) {
            break;  // listener closed
        }
        if (!running_) {
            closeSocket(fd);  // wake-up connection from stop()
            break;
        }
        {
            std::lock_guard lock(clientsMutex_);
            clientFds_.insert(fd);
            handlers_.emplace_back([this, fd] { handleClient(fd); });
        }
    }
}

void Daemon::handleClient(int fd) {
    IdentityContext client;
    std::vector<uint32_t> sessions;

    try {
        // Connections start with HELLO: a claimed package name plus the
        // daemon-issued auth token standing in for kernel-provided caller
        // credentials.
        WireMessage first = recvMsg(fd);
        auto* hello = std::get_if<MsgHello>(&first);
        if (!hello) {
            sendMsg(fd, MsgError{wirecode::kAuthFailed, "expected HELLO"});
            throw Error(ErrorCode::AuthFailed, "no HELLO");
        }
        if (!model_.sandbox().checkClientAuthToken(hello->authToken)) {
            sendMsg(fd, MsgError{wirecode::kAuthFailed, "bad auth token"});
            throw Error(ErrorCode::AuthFailed, "bad token");
        }
        try {
            client = model_.sandbox().identityFor(hello->packageName);
        } catch (const Error&) {
            sendMsg(fd, MsgError{wirecode::kAuthFailed,
                                 "unknown package " + hello->packageName});
            throw Error(ErrorCode::AuthFailed, "unknown package");
        }
        sendMsg(fd, MsgAck{wiretype::kHello});

        std::vector<std::string> lastReaders = model_.readerNames();
        while (true) {
            WireMessage request = recvMsg(fd);
            WireMessage reply = MsgError{wirecode::kBadRequest, "unsupported request"};
            try {
                if (std::holds_alternative<MsgListReaders>(request)) {
                    lastReaders = model_.listReaders(client);
                    reply = MsgReaders{lastReaders};
                } else if (auto* open = std::get_if<MsgOpenSession>(&request)) {
                    if (open->readerIndex >= lastReaders.size()) {
                        throw Error(ErrorCode::UnknownReader, "reader index out of range");
                    }
                    uint32_t id = model_.openSession(client, lastReaders[open->readerIndex]);
                    sessions.push_back(id);
                    reply = MsgSessionOpened{id};
                } else if (auto* channel = std::get_if<MsgOpenChannel>(&request)) {
                    auto result = model_.openLogicalChannel(client, channel->sessionId, channel->aid);
                    reply = MsgChannelOpened{result.channelId, result.selectResponse};
                } else if (auto* transmit = std::get_if<MsgTransmit>(&request)) {
                    reply = MsgResponse{model_.transmit(client, transmit->channelId, transmit->apdu)};
                } else if (auto* close = std::get_if<MsgCloseChannel>(&request)) {
                    model_.closeChannel(client, close->channelId);
                    reply = MsgAck{wiretype::kCloseChannel};
                } else if (auto* close = std::get_if<MsgCloseSession>(&request)) {
                    model_.closeSession(client, close->sessionId);
                    sessions.erase(std::remove(sessions.begin(), sessions.end(), close->sessionId),
                                   sessions.end());
                    reply = MsgAck{wiretype::kCloseSession};
                }
            } catch (const Error& e) {
                reply = MsgError{wireCodeFor(e.code()), e.message()};
            }
            sendMsg(fd, reply);
        }
    } catch (const Error&) {
        // Disconnect (or failed handshake): release whatever the client owned.
    }

    for (uint32_t id : sessions) {
        try {
            model_.closeSession(client, id);
        } catch (const Error&) {
        }
    }
    {
        std::lock_guard lock(clientsMutex_);
        clientFds_.erase(fd);
    }
    closeSocket(fd);
}

}  // namespace scsim
