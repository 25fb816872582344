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

#include "scsim/Client.h"

#include <algorithm>

#include "scsim/Config.h"

namespace scsim {

ServiceClient ServiceClient::connect(const std::string& socketPath,
                                     const std::string& packageName) {
    std::string tokenHex = readTextFile(socketPath + ".token");
    // The token file carries one hex line.
    tokenHex.erase(std::remove_if(tokenHex.begin(), tokenHex.end(),
                                  [](char c) { return c == '\n' || c == '\r' || c == ' '; }),
                   tokenHex.end());
    return connectWithToken(socketPath, packageName, tokenFromHex(tokenHex));
}

ServiceClient ServiceClient::connectWithToken(const std::string& socketPath,
                                              const std::string& packageName, const Token& token) {
    int fd = connectUnix(socketPath);
    ServiceClient client(fd);
    WireMessage reply = client.call(MsgHello{packageName, token});
    auto* ack = std::get_if<MsgAck>(&reply);
    if (!ack || ack->of != wiretype::kHello) {
        throw Error(ErrorCode::AuthFailed, "unexpected HELLO reply");
    }
    return client;
}

ServiceClient::ServiceClient(ServiceClient&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }

ServiceClient::~ServiceClient() { closeSocket(fd_); }

WireMessage ServiceClient::call(const WireMessage& request) {
    sendMsg(fd_, request);
    WireMessage reply = recvMsg(fd_);
    if (auto* error = std::get_if<MsgError>(&reply)) {
        throw errorFromWire(error->code, error->message);
    }
    return reply;
}

std::vector<std::string> ServiceClient::listReaders() {
    WireMessage reply = call(MsgListReaders{});
    auto* readers = std::get_if<MsgReaders>(&reply);
    if (!readers) {
        throw Error(ErrorCode::UnknownType, "unexpected LIST_READERS reply");
    }
    return readers->names;
}

uint32_t ServiceClient::openSession(const std::string& readerName) {
    std::vector<std::string> names = listReaders();
    auto it = std::find(names.begin(), names.end(), readerName);
    if (it == names.end()) {
        throw Error(ErrorCode::UnknownReader, "no reader named \"" + readerName + "\"");
    }
    size_t index = static_cast<size_t>(it - names.begin());
    if (index > 0xFF) {
        throw Error(ErrorCode::UnknownReader, "reader index out of range");
    }
    WireMessage reply = call(MsgOpenSession{static_cast<uint8_t>(index)});
    auto* opened = std::get_if<MsgSessionOpened>(&reply);
    if (!opened) {
        throw Error(ErrorCode::UnknownType, "unexpected OPEN_SESSION reply");
    }
    return opened->sessionId;
}

void ServiceClient::closeSession(uint32_t sessionId) {
    call(MsgCloseSession{sessionId});
}

ServiceClient::ChannelInfo ServiceClient::openChannel(uint32_t sessionId, const Bytes& aid) {
    WireMessage reply = call(MsgOpenChannel{sessionId, aid});
    auto* opened = std::get_if<MsgChannelOpened>(&reply);
    if (!opened) {
        throw Error(ErrorCode::UnknownType, "unexpected OPEN_CHANNEL reply");
    }
    return ChannelInfo{opened->channelId, opened->selectResponse};
}

Bytes ServiceClient::transmit(uint32_t channelId, const Bytes& apdu) {
    WireMessage reply = call(MsgTransmit{channelId, apdu});
    auto* response = std::get_if<MsgResponse>(&reply);
    if (!response) {
        throw Error(ErrorCode::UnknownType, "unexpected TRANSMIT reply");
    }
    return response->response;
}

void ServiceClient::closeChannel(uint32_t channelId) {
    call(MsgCloseChannel{channelId});
}

}  // namespace scsim
