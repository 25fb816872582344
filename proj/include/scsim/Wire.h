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
#include <variant>
#include <vector>

#include "scsim/Bytes.h"
#include "scsim/Errors.h"
#include "scsim/Sandbox.h"

namespace scsim {

// ---------------------------------------------------------------------------
// Framing: 4-byte big-endian payload length (1..65535), then the payload.
// ---------------------------------------------------------------------------

constexpr size_t kMaxFramePayload = 65535;

Bytes encodeFrame(BytesView payload);

struct DecodedFrame {
    Bytes payload;
    size_t consumed = 0;
};

// Decodes one frame from the front of `stream`; Truncated when incomplete.
DecodedFrame decodeFrame(BytesView stream);

// ---------------------------------------------------------------------------
// Message catalog. Request types: client hop 0x01..0x07, terminal hop 0x40
// (bind) and 0x41..0x4E (one per contract operation, in contract order).
// Replies echo the request type with the high bit set; 0x7F is the error
// reply for both hops. Bodies use u8/u16/u32 big-endian integers, strings
// and blobs as 2-byte length + bytes, optionals as a presence byte + blob.
// ---------------------------------------------------------------------------

namespace wiretype {
// Client hop.
constexpr uint8_t kHello = 0x01;
constexpr uint8_t kListReaders = 0x02;
constexpr uint8_t kOpenSession = 0x03;
constexpr uint8_t kOpenChannel = 0x04;
constexpr uint8_t kTransmit = 0x05;
constexpr uint8_t kCloseChannel = 0x06;
constexpr uint8_t kCloseSession = 0x07;

// Terminal hop.
constexpr uint8_t kBind = 0x40;
constexpr uint8_t kGetName = 0x41;
constexpr uint8_t kGetType = 0x42;
constexpr uint8_t kIsCardPresent = 0x43;
constexpr uint8_t kConnect = 0x44;
constexpr uint8_t kDisconnect = 0x45;
constexpr uint8_t kGetAtr = 0x46;
constexpr uint8_t kOpenChannelNoAid = 0x47;
constexpr uint8_t kOpenChannelAid = 0x48;
constexpr uint8_t kGetSelectResponse = 0x49;
constexpr uint8_t kTerminalTransmit = 0x4A;
constexpr uint8_t kCloseLogicalChannel = 0x4B;
constexpr uint8_t kIsChannelCanBeEstablished = 0x4C;
constexpr uint8_t kSetCallingPackageInfo = 0x4D;
constexpr uint8_t kGetUid = 0x4E;

constexpr uint8_t kError = 0x7F;
constexpr uint8_t kReplyBit = 0x80;
}  // namespace wiretype

// Wire error codes (documented in docs/protocol.md). Codes with an obvious
// ISO status-word analogue reuse it.
namespace wirecode {
constexpr uint16_t kPermissionDenied = 0x0001;
constexpr uint16_t kUnknownReader = 0x0002;
constexpr uint16_t kUnknownSession = 0x0003;
constexpr uint16_t kUnknownChannel = 0x0004;
constexpr uint16_t kBadRequest = 0x0005;
constexpr uint16_t kAuthFailed = 0x0006;
constexpr uint16_t kTerminalFailure = 0x0007;
constexpr uint16_t kSessionLimit = 0x0008;
constexpr uint16_t kChannelLimit = 0x0009;
constexpr uint16_t kNoChannelAvailable = 0x6881;
constexpr uint16_t kAccessDenied = 0x6982;
constexpr uint16_t kChannelEscape = 0x6986;
constexpr uint16_t kAppletNotFound = 0x6A82;
}  // namespace wirecode

uint16_t wireCodeFor(ErrorCode code);
Error errorFromWire(uint16_t code, const std::string& message);

// --- Client hop requests ---
struct MsgHello {
    std::string packageName;
    Token authToken{};
    bool operator==(const MsgHello&) const = default;
};
struct MsgListReaders {
    bool operator==(const MsgListReaders&) const = default;
};
struct MsgOpenSession {
    uint8_t readerIndex = 0;
    bool operator==(const MsgOpenSession&) const = default;
};
struct MsgOpenChannel {
    uint32_t sessionId = 0;
    Bytes aid;
    bool operator==(const MsgOpenChannel&) const = default;
};
struct MsgTransmit {
    uint32_t channelId = 0;
    Bytes apdu;
    bool operator==(const MsgTransmit&) const = default;
};
struct MsgCloseChannel {
    uint32_t channelId = 0;
    bool operator==(const MsgCloseChannel&) const = default;
};
struct MsgCloseSession {
    uint32_t sessionId = 0;
    bool operator==(const MsgCloseSession&) const = default;
};

// --- Client hop replies ---
struct MsgReaders {
    std::vector<std::string> names;
    bool operator==(const MsgReaders&) const = default;
};
struct MsgSessionOpened {
    uint32_t sessionId = 0;
    bool operator==(const MsgSessionOpened&) const = default;
};
struct MsgChannelOpened {
    uint32_t channelId = 0;
    Bytes selectResponse;
    bool operator==(const MsgChannelOpened&) const = default;
};
struct MsgResponse {
    Bytes response;
    bool operator==(const MsgResponse&) const = default;
};
struct MsgError {
    uint16_t code = 0;
    std::string message;
    bool operator==(const MsgError&) const = default;
};

// Empty-bodied reply; `of` names the request type being acknowledged.
struct MsgAck {
    uint8_t of = 0;
    bool operator==(const MsgAck&) const = default;
};

// --- Terminal hop requests ---
struct MsgBind {
    Token bindToken{};
    std::string packageName;
    bool operator==(const MsgBind&) const = default;
};
// Empty-bodied contract request; `op` is one of the 0x41..0x4E types with
// no arguments.
struct MsgTerminalOp {
    uint8_t op = 0;
    bool operator==(const MsgTerminalOp&) const = default;
};
struct MsgOpenLcAid {
    Bytes aid;
    bool operator==(const MsgOpenLcAid&) const = default;
};
struct MsgTerminalTransmit {
    Bytes apdu;
    bool operator==(const MsgTerminalTransmit&) const = default;
};
struct MsgCloseLc {
    uint32_t channel = 0;
    bool operator==(const MsgCloseLc&) const = default;
};
struct MsgSetCallingPackageInfo {
    std::string packageName;
    uint32_t userId = 0;
    uint32_t processId = 0;
    bool operator==(const MsgSetCallingPackageInfo&) const = default;
};

// --- Terminal hop replies ---
struct MsgText {
    uint8_t of = 0;  // kGetName or kGetType
    std::string text;
    bool operator==(const MsgText&) const = default;
};
struct MsgFlag {
    uint8_t of = 0;  // kIsCardPresent or kIsChannelCanBeEstablished
    bool value = false;
    bool operator==(const MsgFlag&) const = default;
};
struct MsgOptBytes {
    uint8_t of = 0;  // kGetAtr, kGetSelectResponse or kGetUid
    std::optional<Bytes> data;
    bool operator==(const MsgOptBytes&) const = default;
};
struct MsgChannelNumber {
    uint8_t of = 0;  // kOpenChannelNoAid or kOpenChannelAid
    uint32_t channel = 0;
    bool operator==(const MsgChannelNumber&) const = default;
};
struct MsgTerminalResponse {
    Bytes response;
    bool operator==(const MsgTerminalResponse&) const = default;
};

using WireMessage =
    std::variant<MsgHello, MsgListReaders, MsgOpenSession, MsgOpenChannel, MsgTransmit,
                 MsgCloseChannel, MsgCloseSession, MsgReaders, MsgSessionOpened, MsgChannelOpened,
                 MsgResponse, MsgError, MsgAck, MsgBind, MsgTerminalOp, MsgOpenLcAid,
                 MsgTerminalTransmit, MsgCloseLc, MsgSetCallingPackageInfo, MsgText, MsgFlag,
                 MsgOptBytes, MsgChannelNumber, MsgTerminalResponse>;

Bytes encodeMsg(const WireMessage& message);
WireMessage decodeMsg(BytesView raw);

// ---------------------------------------------------------------------------
// Unix stream socket plumbing: one message per frame, strict request/reply.
// ---------------------------------------------------------------------------

int listenUnix(const std::string& path);
int connectUnix(const std::string& path);
int acceptConnection(int listenFd);
void closeSocket(int fd);

void sendFrame(int fd, BytesView payload);
Bytes recvFrame(int fd);  // IoError on EOF or short read

void sendMsg(int fd, const WireMessage& message);
WireMessage recvMsg(int fd);

}  // namespace scsim
