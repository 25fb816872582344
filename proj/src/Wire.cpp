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

#include "scsim/Wire.h"

#include <sys/socket.h>
#include <sys/un.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace scsim {

namespace {

// --- body packing -----------------------------------------------------------

class BodyWriter {
public:
    void u8(uint8_t v) { out_.push_back(v); }
    void u16(uint16_t v) {
        out_.push_back(static_cast<uint8_t>(v >> 8));
        out_.push_back(static_cast<uint8_t>(v & 0xFF));
    }
    void u32(uint32_t v) {
        out_.push_back(static_cast<uint8_t>(v >> 24));
        out_.push_back(static_cast<uint8_t>(v >> 16));
        out_.push_back(static_cast<uint8_t>(v >> 8));
        out_.push_back(static_cast<uint8_t>(v & 0xFF));
    }
    void blob(BytesView data) {
        if (data.size() > 0xFFFF) {
            throw Error(ErrorCode::MalformedBody, "blob exceeds 65535 bytes");
        }
        u16(static_cast<uint16_t>(data.size()));
        out_.insert(out_.end(), data.begin(), data.end());
    }
    void str(const std::string& s) {
        blob(BytesView(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
    }
    void token(const Token& t) { out_.insert(out_.end(), t.begin(), t.end()); }
    void optBlob(const std::optional<Bytes>& data) {
        u8(data ? 1 : 0);
        if (data) blob(*data);
    }

    Bytes take() { return std::move(out_); }

private:
    Bytes out_;
};

class BodyReader {
public:
    explicit BodyReader(BytesView data) : data_(data) {}

    uint8_t u8() { return take(1)[0]; }
    uint16_t u16() {
        BytesView b = take(2);
        return static_cast<uint16_t>(b[0]) << 8 | b[1];
    }
    uint32_t u32() {
        BytesView b = take(4);
        return static_cast<uint32_t>(b[0]) << 24 | static_cast<uint32_t>(b[1]) << 16 |
               static_cast<uint32_t>(b[2]) << 8 | b[3];
    }
    Bytes blob() {
        size_t n = u16();
        BytesView b = take(n);
        return Bytes(b.begin(), b.end());
    }
    std::string str() {
        Bytes b = blob();
        return std::string(b.begin(), b.end());
    }
    Token token() {
        BytesView b = take(16);
        Token t;
        std::copy(b.begin(), b.end(), t.begin());
        return t;
    }
    std::optional<Bytes> optBlob() {
        uint8_t present = u8();
        if (present == 0) return std::nullopt;
        if (present != 1) {
            throw Error(ErrorCode::MalformedBody, "optional presence byte must be 0 or 1");
        }
        return blob();
    }
    bool flag() {
        uint8_t v = u8();
        if (v > 1) {
            throw Error(ErrorCode::MalformedBody, "flag byte must be 0 or 1");
        }
        return v == 1;
    }

    void expectEnd() const {
        if (pos_ != data_.size()) {
            throw Error(ErrorCode::MalformedBody, "trailing bytes after message body");
        }
    }

private:
    BytesView take(size_t n) {
        if (data_.size() - pos_ < n) {
            throw Error(ErrorCode::MalformedBody, "message body shorter than declared fields");
        }
        BytesView out = data_.subspan(pos_, n);
        pos_ += n;
        return out;
    }

    BytesView data_;
    size_t pos_ = 0;
};

bool isEmptyTerminalOp(uint8_t op) {
    switch (op) {
        case wiretype::kGetName:
        case wiretype::kGetType:
        case wiretype::kIsCardPresent:
        case wiretype::kConnect:
        case wiretype::kDisconnect:
        case wiretype::kGetAtr:
        case wiretype::kOpenChannelNoAid:
        case wiretype::kGetSelectResponse:
        case wiretype::kIsChannelCanBeEstablished:
        case wiretype::kGetUid:
            return true;
        default:
            return false;
    }
}

bool isAckable(uint8_t of) {
    switch (of) {
        case wiretype::kHello:
        case wiretype::kCloseChannel:
        case wiretype::kCloseSession:
        case wiretype::kBind:
        case wiretype::kConnect:
        case wiretype::kDisconnect:
        case wiretype::kCloseLogicalChannel:
        case wiretype::kSetCallingPackageInfo:
            return true;
        default:
            return false;
    }
}

}  // namespace

// --- framing ----------------------------------------------------------------

Bytes encodeFrame(BytesView payload) {
    if (payload.empty()) {
        throw Error(ErrorCode::ZeroLengthFrame, "frames must carry at least one byte");
    }
    if (payload.size() > kMaxFramePayload) {
        throw Error(ErrorCode::FrameTooLarge,
                    "payload of " + std::to_string(payload.size()) + " bytes exceeds 65535");
    }
    Bytes out;
    out.reserve(payload.size() + 4);
    uint32_t len = static_cast<uint32_t>(payload.size());
    out.push_back(static_cast<uint8_t>(len >> 24));
    out.push_back(static_cast<uint8_t>(len >> 16));
    out.push_back(static_cast<uint8_t>(len >> 8));
    out.push_back(static_cast<uint8_t>(len & 0xFF));
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

DecodedFrame decodeFrame(BytesView stream) {
    if (stream.size() < 4) {
        throw Error(ErrorCode::Truncated, "frame header needs 4 bytes");
    }
    uint32_t len = static_cast<uint32_t>(stream[0]) << 24 | static_cast<uint32_t>(stream[1]) << 16 |
                   static_cast<uint32_t>(stream[2]) << 8 | stream[3];
    if (len == 0) {
        throw Error(ErrorCode::ZeroLengthFrame, "zero-length frame");
    }
    if (len > kMaxFramePayload) {
        throw Error(ErrorCode::FrameTooLarge, "declared length " + std::to_string(len));
    }
    if (stream.size() - 4 < len) {
        throw Error(ErrorCode::Truncated, "frame payload incomplete");
    }
    DecodedFrame out;
    out.payload.assign(stream.begin() + 4, stream.begin() + 4 + len);
    out.consumed = 4 + len;
    return out;
}

// --- error code table ---------------------------------------------------------

uint16_t wireCodeFor(ErrorCode code) {
    switch (code) {
        case ErrorCode::PermissionDenied: return wirecode::kPermissionDenied;
        case ErrorCode::UnknownReader: return wirecode::kUnknownReader;
        case ErrorCode::UnknownSession: return wirecode::kUnknownSession;
        case ErrorCode::UnknownChannel: return wirecode::kUnknownChannel;
        case ErrorCode::AuthFailed: return wirecode::kAuthFailed;
        case ErrorCode::SessionLimit: return wirecode::kSessionLimit;
        case ErrorCode::ChannelLimit: return wirecode::kChannelLimit;
        case ErrorCode::NoChannelAvailable:
        case ErrorCode::NoResourceAvailable: return wirecode::kNoChannelAvailable;
        case ErrorCode::AccessDenied:
        case ErrorCode::FilteredOut: return wirecode::kAccessDenied;
        case ErrorCode::ChannelEscapeAttempt: return wirecode::kChannelEscape;
        case ErrorCode::AppletNotFound: return wirecode::kAppletNotFound;
        case ErrorCode::NotConnected:
        case ErrorCode::TerminalFailure:
        case ErrorCode::HandshakeFailure: return wirecode::kTerminalFailure;
        default: return wirecode::kBadRequest;
    }
}

Error errorFromWire(uint16_t code, const std::string& message) {
    switch (code) {
        case wirecode::kPermissionDenied: return Error(ErrorCode::PermissionDenied, message);
        case wirecode::kUnknownReader: return Error(ErrorCode::UnknownReader, message);
        case wirecode::kUnknownSession: return Error(ErrorCode::UnknownSession, message);
        case wirecode::kUnknownChannel: return Error(ErrorCode::UnknownChannel, message);
        case wirecode::kAuthFailed: return Error(ErrorCode::AuthFailed, message);
        case wirecode::kSessionLimit: return Error(ErrorCode::SessionLimit, message);
        case wirecode::kChannelLimit: return Error(ErrorCode::ChannelLimit, message);
        case wirecode::kNoChannelAvailable: return Error(ErrorCode::NoChannelAvailable, message);
        case wirecode::kAccessDenied: return Error(ErrorCode::AccessDenied, message);
        case wirecode::kChannelEscape: return Error(ErrorCode::ChannelEscapeAttempt, message);
        case wirecode::kAppletNotFound: return Error(ErrorCode::AppletNotFound, message);
        case wirecode::kTerminalFailure: return Error(ErrorCode::TerminalFailure, message);
        default: return Error(ErrorCode::UnknownType, message);
    }
}

// --- message codec ------------------------------------------------------------

Bytes encodeMsg(const WireMessage& message) {
    BodyWriter w;
    uint8_t type = 0;

    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, MsgHello>) {
                type = wiretype::kHello;
                w.str(m.packageName);
                w.token(m.authToken);
            } else if constexpr (std::is_same_v<T, MsgListReaders>) {
                type = wiretype::kListReaders;
            } else if constexpr (std::is_same_v<T, MsgOpenSession>) {
                type = wiretype::kOpenSession;
                w.u8(m.readerIndex);
            } else if constexpr (std::is_same_v<T, MsgOpenChannel>) {
                type = wiretype::kOpenChannel;
                w.u32(m.sessionId);
                w.blob(m.aid);
            } else if constexpr (std::is_same_v<T, MsgTransmit>) {
                type = wiretype::kTransmit;
                w.u32(m.channelId);
                w.blob(m.apdu);
            } else if constexpr (std::is_same_v<T, MsgCloseChannel>) {
                type = wiretype::kCloseChannel;
                w.u32(m.channelId);
            } else if constexpr (std::is_same_v<T, MsgCloseSession>) {
                type = wiretype::kCloseSession;
                w.u32(m.sessionId);
            } else if constexpr (std::is_same_v<T, MsgReaders>) {
                type = wiretype::kListReaders | wiretype::kReplyBit;
                if (m.names.size() > 0xFF) {
                    throw Error(ErrorCode::MalformedBody, "too many reader names");
                }
                w.u8(static_cast<uint8_t>(m.names.size()));
                for (const std::string& name : m.names) w.str(name);
            } else if constexpr (std::is_same_v<T, MsgSessionOpened>) {
                type = wiretype::kOpenSession | wiretype::kReplyBit;
                w.u32(m.sessionId);
            } else if constexpr (std::is_same_v<T, MsgChannelOpened>) {
                type = wiretype::kOpenChannel | wiretype::kReplyBit;
                w.u32(m.channelId);
                w.blob(m.selectResponse);
            } else if constexpr (std::is_same_v<T, MsgResponse>) {
                type = wiretype::kTransmit | wiretype::kReplyBit;
                w.blob(m.response);
            } else if constexpr (std::is_same_v<T, MsgError>) {
                type = wiretype::kError;
                w.u16(m.code);
                w.str(m.message);
            } else if constexpr (std::is_same_v<T, MsgAck>) {
                if (!isAckable(m.of)) {
                    throw Error(ErrorCode::UnknownType, "type cannot be acknowledged");
                }
                type = m.of | wiretype::kReplyBit;
            } else if constexpr (std::is_same_v<T, MsgBind>) {
                type = wiretype::kBind;
                w.token(m.bindToken);
                w.str(m.packageName);
            } else if constexpr (std::is_same_v<T, MsgTerminalOp>) {
                if (!isEmptyTerminalOp(m.op)) {
                    throw Error(ErrorCode::UnknownType, "not an empty-bodied terminal op");
                }
                type = m.op;
            } else if constexpr (std::is_same_v<T, MsgOpenLcAid>) {
                type = wiretype::kOpenChannelAid;
                w.blob(m.aid);
            } else if constexpr (std::is_same_v<T, MsgTerminalTransmit>) {
                type = wiretype::kTerminalTransmit;
                w.blob(m.apdu);
            } else if constexpr (std::is_same_v<T, MsgCloseLc>) {
                type = wiretype::kCloseLogicalChannel;
                w.u32(m.channel);
            } else if constexpr (std::is_same_v<T, MsgSetCallingPackageInfo>) {
                type = wiretype::kSetCallingPackageInfo;
                w.str(m.packageName);
                w.u32(m.userId);
                w.u32(m.processId);
            } else if constexpr (std::is_same_v<T, MsgText>) {
                if (m.of != wiretype::kGetName && m.of != wiretype::kGetType) {
                    throw Error(ErrorCode::UnknownType, "text reply must answer getName/getType");
                }
                type = m.of | wiretype::kReplyBit;
                w.str(m.text);
            } else if constexpr (std::is_same_v<T, MsgFlag>) {
                if (m.of != wiretype::kIsCardPresent &&
                    m.of != wiretype::kIsChannelCanBeEstablished) {
                    throw Error(ErrorCode::UnknownType, "flag reply answers the wrong op");
                }
                type = m.of | wiretype::kReplyBit;
                w.u8(m.value ? 1 : 0);
            } else if constexpr (std::is_same_v<T, MsgOptBytes>) {
                if (m.of != wiretype::kGetAtr && m.of != wiretype::kGetSelectResponse &&
                    m.of != wiretype::kGetUid) {
                    throw Error(ErrorCode::UnknownType, "optional-bytes reply answers the wrong op");
                }
                type = m.of | wiretype::kReplyBit;
                w.optBlob(m.data);
            } else if constexpr (std::is_same_v<T, MsgChannelNumber>) {
                if (m.of != wiretype::kOpenChannelNoAid && m.of != wiretype::kOpenChannelAid) {
                    throw Error(ErrorCode::UnknownType, "channel reply answers the wrong op");
                }
                type = m.of | wiretype::kReplyBit;
                w.u32(m.channel);
            } else if constexpr (std::is_same_v<T, MsgTerminalResponse>) {
                type = wiretype::kTerminalTransmit | wiretype::kReplyBit;
                w.blob(m.response);
            }
        },
        message);

    Bytes body = w.take();
    Bytes out;
    out.reserve(body.size() + 1);
    out.push_back(type);
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

WireMessage decodeMsg(BytesView raw) {
    if (raw.empty()) {
        throw Error(ErrorCode::MalformedBody, "empty message");
    }
    uint8_t type = raw[0];
    BodyReader r(raw.subspan(1));

    auto done = [&r](WireMessage m) {
        r.expectEnd();
        return m;
    };

    switch (type) {
        case wiretype::kHello: {
            MsgHello m;
            m.packageName = r.str();
            m.authToken = r.token();
            return done(m);
        }
        case wiretype::kListReaders:
            return done(MsgListReaders{});
        case wiretype::kOpenSession:
            return done(MsgOpenSession{r.u8()});
        case wiretype::kOpenChannel: {
            MsgOpenChannel m;
            m.sessionId = r.u32();
            m.aid = r.blob();
            return done(m);
        }
        case wiretype::kTransmit: {
            MsgTransmit m;
            m.channelId = r.u32();
            m.apdu = r.blob();
            return done(m);
        }
        case wiretype::kCloseChannel:
            return done(MsgCloseChannel{r.u32()});
        case wiretype::kCloseSession:
            return done(MsgCloseSession{r.u32()});
        case wiretype::kListReaders | wiretype::kReplyBit: {
            MsgReaders m;
            size_t count = r.u8();
            for (size_t i = 0; i < count; ++i) m.names.push_back(r.str());
            return done(m);
        }
        case wiretype::kOpenSession | wiretype::kReplyBit:
            return done(MsgSessionOpened{r.u32()});
        case wiretype::kOpenChannel | wiretype::kReplyBit: {
            MsgChannelOpened m;
            m.channelId = r.u32();
            m.selectResponse = r.blob();
            return done(m);
        }
        case wiretype::kTransmit | wiretype::kReplyBit:
            return done(MsgResponse{r.blob()});
        case wiretype::kTerminalTransmit | wiretype::kReplyBit:
            return done(MsgTerminalResponse{r.blob()});
        case wiretype::kError: {
            MsgError m;
            m.code = r.u16();
            m.message = r.str();
            return done(m);
        }
        case wiretype::kBind: {
            MsgBind m;
            m.bindToken = r.token();
            m.packageName = r.str();
            return done(m);
        }
        case wiretype::kOpenChannelAid:
            return done(MsgOpenLcAid{r.blob()});
        case wiretype::kTerminalTransmit:
            return done(MsgTerminalTransmit{r.blob()});
        case wiretype::kCloseLogicalChannel:
            return done(MsgCloseLc{r.u32()});
        case wiretype::kSetCallingPackageInfo: {
            MsgSetCallingPackageInfo m;
            m.packageName = r.str();
            m.userId = r.u32();
            m.processId = r.u32();
            return done(m);
        }
        case wiretype::kGetName | wiretype::kReplyBit:
        case wiretype::kGetType | wiretype::kReplyBit:
            return done(MsgText{static_cast<uint8_t>(type & ~wiretype::kReplyBit), r.str()});
        case wiretype::kIsCardPresent | wiretype::kReplyBit:
        case wiretype::kIsChannelCanBeEstablished | wiretype::kReplyBit:
            return done(MsgFlag{static_cast<uint8_t>(type & ~wiretype::kReplyBit), r.flag()});
        case wiretype::kGetAtr | wiretype::kReplyBit:
        case wiretype::kGetSelectResponse | wiretype::kReplyBit:
        case wiretype::kGetUid | wiretype::kReplyBit:
            return done(MsgOptBytes{static_cast<uint8_t>(type & ~wiretype::kReplyBit), r.optBlob()});
        case wiretype::kOpenChannelNoAid | wiretype::kReplyBit:
        case wiretype::kOpenChannelAid | wiretype::kReplyBit:
            return done(
                MsgChannelNumber{static_cast<uint8_t>(type & ~wiretype::kReplyBit), r.u32()});
        default:
            break;
    }

    if (isEmptyTerminalOp(type)) {
        return done(MsgTerminalOp{type});
    }
    if ((type & wiretype::kReplyBit) && isAckable(static_cast<uint8_t>(type & ~wiretype::kReplyBit))) {
        return done(MsgAck{static_cast<uint8_t>(type & ~wiretype::kReplyBit)});
    }
    throw Error(ErrorCode::UnknownType, "unknown message type " + std::to_string(type));
}

// --- sockets ------------------------------------------------------------------

namespace {

sockaddr_un makeAddress(const std::string& path) {
    sockaddr_un addr{};
    addr.sun_family = AF_UNIX;
    if (path.size() >= sizeof(addr.sun_path)) {
        throw Error(ErrorCode::IoError, "socket path too long: " + path);
    }
    std::memcpy(addr.sun_path, path.c_str(), path.size() + 1);
    return addr;
}

void writeAll(int fd, const uint8_t* data, size_t len) {
    size_t sent = 0;
    while (sent < len) {
        ssize_t n = ::send(fd, data + sent, len - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw Error(ErrorCode::IoError, std::string("send: ") + std::strerror(errno));
        }
        sent += static_cast<size_t>(n);
    }
}

void readAll(int fd, uint8_t* data, size_t len) {
    size_t got = 0;
    while (got < len) {
        ssize_t n = ::recv(fd, data + got, len - got, 0);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw Error(ErrorCode::IoError, std::string("recv: ") + std::strerror(errno));
        }
        if (n == 0) {
            throw Error(ErrorCode::IoError, "connection closed by peer");
        }
        got += static_cast<size_t>(n);
    }
}

}  // namespace

int listenUnix(const std::string& path) {
    int fd = ::socket(AF_UNIX, SOCK_STREAM, 0);
    if (fd < 0) {
        throw Error(ErrorCode::IoError, std::string("socket: ") + std::strerror(errno));
    }
    ::unlink(path.c_str());
    sockaddr_un addr = makeAddress(path);
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
        int err = errno;
        ::close(fd);
        throw Error(ErrorCode::IoError, "bind " + path + ": " + std::strerror(err));
    }
    if (::listen(fd, 16) < 0) {
        int err = errno;
        ::close(fd);
        throw Error(ErrorCode::IoError, "listen " + path + ": " + std::strerror(err));
    }
    return fd;
}

int connectUnix(const std::string& path) {
    int fd = ::socket(AF_UNIX, SOCK_STREAM, 0);
    if (fd < 0) {
        throw Error(ErrorCode::IoError, std::string("socket: ") + std::strerror(errno));
    }
    sockaddr_un addr = makeAddress(path);
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
        int err = errno;
        ::close(fd);
        throw Error(ErrorCode::IoError, "connect " + path + ": " + std::strerror(err));
    }
    return fd;
}

int acceptConnection(int listenFd) {
    while (true) {
        int fd = ::accept(listenFd, nullptr, nullptr);
        if (fd >= 0) return fd;
        if (errno == EINTR) continue;
        throw Error(ErrorCode::IoError, std::string("accept: ") + std::strerror(errno));
    }
}

void closeSocket(int fd) {
    if (fd >= 0) ::close(fd);
}

void sendFrame(int fd, BytesView payload) {
    Bytes frame = encodeFrame(payload);
    writeAll(fd, frame.data(), frame.size());
}

Bytes recvFrame(int fd) {
    uint8_t header[4];
    readAll(fd, header, 4);
    uint32_t len = static_cast<uint32_t>(header[0]) << 24 | static_cast<uint32_t>(header[1]) << 16 |
                   static_cast<uint32_t>(header[2]) << 8 | header[3];
    if (len == 0) {
        throw Error(ErrorCode::ZeroLengthFrame, "zero-length frame");
    }
    if (len > kMaxFramePayload) {
        throw Error(ErrorCode::FrameTooLarge, "declared length " + std::to_string(len));
    }
    Bytes payload(len);
    readAll(fd, payload.data(), len);
    return payload;
}

void sendMsg(int fd, const WireMessage& message) { sendFrame(fd, encodeMsg(message)); }

WireMessage recvMsg(int fd) { return decodeMsg(recvFrame(fd)); }

}  // namespace scsim
