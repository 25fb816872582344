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

#include <doctest.h>

#include <functional>
#include <random>

#include "scsim/Wire.h"

using namespace scsim;

namespace {

std::string randomText(std::mt19937& rng) {
    std::uniform_int_distribution<int> lenDist(0, 40);
    std::uniform_int_distribution<int> charDist('a', 'z');
    std::string out(static_cast<size_t>(lenDist(rng)), ' ');
    for (auto& c : out) c = static_cast<char>(charDist(rng));
    return out;
}

Bytes randomBlob(std::mt19937& rng, int maxLen = 64) {
    std::uniform_int_distribution<int> lenDist(0, maxLen);
    std::uniform_int_distribution<int> byteDist(0, 255);
    Bytes out(static_cast<size_t>(lenDist(rng)));
    for (auto& b : out) b = static_cast<uint8_t>(byteDist(rng));
    return out;
}

Token randomTestToken(std::mt19937& rng) {
    std::uniform_int_distribution<int> byteDist(0, 255);
    Token t;
    for (auto& b : t) b = static_cast<uint8_t>(byteDist(rng));
    return t;
}

std::optional<Bytes> randomOptBlob(std::mt19937& rng) {
    std::uniform_int_distribution<int> coin(0, 1);
    if (coin(rng) == 0) return std::nullopt;
    return randomBlob(rng);
}

WireMessage randomMessage(std::mt19937& rng) {
    static const uint8_t emptyOps[] = {
        wiretype::kGetName,      wiretype::kGetType,  wiretype::kIsCardPresent,
        wiretype::kConnect,      wiretype::kDisconnect, wiretype::kGetAtr,
        wiretype::kOpenChannelNoAid, wiretype::kGetSelectResponse,
        wiretype::kIsChannelCanBeEstablished, wiretype::kGetUid,
    };
    static const uint8_t ackable[] = {
        wiretype::kHello,     wiretype::kCloseChannel,        wiretype::kCloseSession,
        wiretype::kBind,      wiretype::kConnect,             wiretype::kDisconnect,
        wiretype::kCloseLogicalChannel, wiretype::kSetCallingPackageInfo,
    };

    std::uniform_int_distribution<int> pick(0, 23);
    std::uniform_int_distribution<uint32_t> idDist(0, 0xFFFFFFFF);
    std::uniform_int_distribution<int> byteDist(0, 255);
    std::uniform_int_distribution<int> coin(0, 1);

    switch (pick(rng)) {
        case 0: return MsgHello{randomText(rng), randomTestToken(rng)};
        case 1: return MsgListReaders{};
        case 2: return MsgOpenSession{static_cast<uint8_t>(byteDist(rng))};
        case 3: return MsgOpenChannel{idDist(rng), randomBlob(rng)};
        case 4: return MsgTransmit{idDist(rng), randomBlob(rng)};
        case 5: return MsgCloseChannel{idDist(rng)};
        case 6: return MsgCloseSession{idDist(rng)};
        case 7: {
            MsgReaders readers;
            std::uniform_int_distribution<int> count(0, 5);
            int n = count(rng);
            for (int i = 0; i < n; ++i) readers.names.push_back(randomText(rng));
            return readers;
        }
        case 8: return MsgSessionOpened{idDist(rng)};
        case 9: return MsgChannelOpened{idDist(rng), randomBlob(rng)};
        case 10: return MsgResponse{randomBlob(rng)};
        case 11:
            return MsgError{static_cast<uint16_t>(idDist(rng) & 0xFFFF), randomText(rng)};
        case 12: {
            std::uniform_int_distribution<size_t> which(0, std::size(ackable) - 1);
            return MsgAck{ackable[which(rng)]};
        }
        case 13: return MsgBind{randomTestToken(rng), randomText(rng)};
        case 14: {
            std::uniform_int_distribution<size_t> which(0, std::size(emptyOps) - 1);
            return MsgTerminalOp{emptyOps[which(rng)]};
        }
        case 15: return MsgOpenLcAid{randomBlob(rng)};
        case 16: return MsgTerminalTransmit{randomBlob(rng)};
        case 17: return MsgCloseLc{idDist(rng)};
        case 18: return MsgSetCallingPackageInfo{randomText(rng), idDist(rng), idDist(rng)};
        case 19:
            return MsgText{coin(rng) ? wiretype::kGetName : wiretype::kGetType, randomText(rng)};
        case 20:
            return MsgFlag{coin(rng) ? wiretype::kIsCardPresent
                                     : wiretype::kIsChannelCanBeEstablished,
                           coin(rng) == 1};
        case 21: {
            static const uint8_t ops[] = {wiretype::kGetAtr, wiretype::kGetSelectResponse,
                                          wiretype::kGetUid};
            std::uniform_int_distribution<size_t> which(0, 2);
            return MsgOptBytes{ops[which(rng)], randomOptBlob(rng)};
        }
        case 22:
            return MsgChannelNumber{coin(rng) ? wiretype::kOpenChannelNoAid
                                              : wiretype::kOpenChannelAid,
                                    idDist(rng)};
        default: return MsgTerminalResponse{randomBlob(rng)};
    }
}

}  // namespace

TEST_CASE("frame encoding: single byte payload") {
    CHECK(toHex(encodeFrame(fromHex("02"))) == "0000000102");

    DecodedFrame decoded = decodeFrame(fromHex("0000000102FFFF"));
    CHECK(decoded.payload == fromHex("02"));
    CHECK(decoded.consumed == 5);
}

TEST_CASE("frame errors: zero length, oversize, truncation") {
    CHECK_THROWS_AS(encodeFrame(Bytes{}), Error);
    Bytes big(70000, 0xAA);
    CHECK_THROWS_AS(encodeFrame(big), Error);

    try {
        decodeFrame(fromHex("00000000"));
        FAIL("expected ZeroLengthFrame");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroLengthFrame);
    }
    try {
        decodeFrame(fromHex("000000"));
        FAIL("expected Truncated");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Truncated);
    }
    try {
        decodeFrame(fromHex("00000005AABB"));
        FAIL("expected Truncated");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Truncated);
    }
    try {
        decodeFrame(fromHex("00011170AABB"));
        FAIL("expected FrameTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FrameTooLarge);
    }
}

TEST_CASE("catalog literals") {
    CHECK(toHex(encodeMsg(MsgListReaders{})) == "02");
    // transmit is not an empty-bodied op and cannot ride MsgTerminalOp
    CHECK_THROWS_AS(encodeMsg(MsgTerminalOp{wiretype::kTerminalTransmit}), Error);

    // TRANSMIT on the terminal hop is 0x4A with a blob body.
    Bytes transmit = encodeMsg(MsgTerminalTransmit{fromHex("00A40400")});
    CHECK(transmit[0] == 0x4A);
    CHECK(toHex(transmit) == "4A000400A40400");

    // The error carrying 0x6982 decodes as AccessDenied on the client side.
    Error e = errorFromWire(0x6982, "denied");
    CHECK(e.code() == ErrorCode::AccessDenied);
}

TEST_CASE("decode/encode identity over 5000 random catalog messages") {
    std::mt19937 rng(0x31E0);
    for (int i = 0; i < 5000; ++i) {
        WireMessage message = randomMessage(rng);
        Bytes encoded = encodeMsg(message);
        WireMessage decoded = decodeMsg(encoded);
        CHECK(decoded == message);
        CHECK(encodeMsg(decoded) == encoded);
    }
}

TEST_CASE("decoder is total over 10000 fuzzed buffers") {
    std::mt19937 rng(0xF22);
    std::uniform_int_distribution<int> lenDist(0, 80);
    std::uniform_int_distribution<int> byteDist(0, 255);
    for (int i = 0; i < 10000; ++i) {
        Bytes raw(lenDist(rng));
        for (auto& b : raw) b = static_cast<uint8_t>(byteDist(rng));
        try {
            decodeMsg(raw);
        } catch (const Error&) {
            // typed rejection is fine; crashes are not
        }
    }
    CHECK(true);
}

TEST_CASE("wire code mapping covers the service error set") {
    CHECK(wireCodeFor(ErrorCode::AccessDenied) == 0x6982);
    CHECK(wireCodeFor(ErrorCode::FilteredOut) == 0x6982);
    CHECK(wireCodeFor(ErrorCode::NoChannelAvailable) == 0x6881);
    CHECK(wireCodeFor(ErrorCode::AppletNotFound) == 0x6A82);
    CHECK(wireCodeFor(ErrorCode::ChannelEscapeAttempt) == 0x6986);
    CHECK(errorFromWire(wireCodeFor(ErrorCode::PermissionDenied), "x").code() ==
          ErrorCode::PermissionDenied);
    CHECK(errorFromWire(wireCodeFor(ErrorCode::UnknownSession), "x").code() ==
          ErrorCode::UnknownSession);
}
