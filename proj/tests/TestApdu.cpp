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

#include "scsim/Apdu.h"

using namespace scsim;

namespace {

CommandApdu randomCommand(std::mt19937& rng) {
    std::uniform_int_distribution<int> byteDist(0, 255);
    std::uniform_int_distribution<int> caseDist(1, 4);
    std::uniform_int_distribution<int> lcDist(1, 255);
    std::uniform_int_distribution<int> leDist(1, 256);

    CommandApdu cmd;
    cmd.cla = static_cast<uint8_t>(byteDist(rng));
    cmd.ins = static_cast<uint8_t>(byteDist(rng));
    cmd.p1 = static_cast<uint8_t>(byteDist(rng));
    cmd.p2 = static_cast<uint8_t>(byteDist(rng));
    switch (caseDist(rng)) {
        case 1:
            break;
        case 2:
            cmd.le = static_cast<uint16_t>(leDist(rng));
            break;
        case 3:
            cmd.data.resize(lcDist(rng));
            for (auto& b : cmd.data) b = static_cast<uint8_t>(byteDist(rng));
            break;
        case 4:
            cmd.data.resize(lcDist(rng));
            for (auto& b : cmd.data) b = static_cast<uint8_t>(byteDist(rng));
            cmd.le = static_cast<uint16_t>(leDist(rng));
            break;
    }
    return cmd;
}

ErrorCode codeOf(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("parse_command decodes the four short-form cases") {
    // case 3: SELECT MF
    CommandApdu select = parseCommand(fromHex("00A40400023F00"));
    CHECK(select.cla == 0x00);
    CHECK(select.ins == 0xA4);
    CHECK(select.p1 == 0x04);
    CHECK(select.p2 == 0x00);
    CHECK(select.data == fromHex("3F00"));
    CHECK_FALSE(select.le.has_value());

    // case 2: MANAGE CHANNEL open
    CommandApdu open = parseCommand(fromHex("0070000001"));
    CHECK(open.ins == 0x70);
    CHECK(open.data.empty());
    CHECK(open.le == 1);

    // case 1
    CommandApdu header = parseCommand(fromHex("00B00000"));
    CHECK(header.data.empty());
    CHECK_FALSE(header.le.has_value());

    // case 4
    CommandApdu full = parseCommand(fromHex("80CA01020200FF10"));
    CHECK(full.data == fromHex("00FF"));
    CHECK(full.le == 0x10);
}

TEST_CASE("parse_command rejects malformed input with typed errors") {
    CHECK(codeOf([] { parseCommand(fromHex("00A404")); }) == ErrorCode::TooShort);
    CHECK(codeOf([] { parseCommand(Bytes{}); }) == ErrorCode::TooShort);
    // Lc says 5 but only 2 data bytes follow.
    CHECK(codeOf([] { parseCommand(fromHex("00A4040005AABB")); }) == ErrorCode::LengthMismatch);
    // Extended form: zero marker byte then a 2-byte length.
    CHECK(codeOf([] { parseCommand(fromHex("00A4040000012AFF")); }) ==
          ErrorCode::ExtendedNotSupported);
}

TEST_CASE("le byte 0x00 means 256 and survives a round trip") {
    CommandApdu cmd;
    cmd.ins = 0xB0;
    cmd.le = 256;
    Bytes raw = serializeCommand(cmd);
    CHECK(raw == fromHex("00B0000000"));
    CHECK(parseCommand(raw).le == 256);
}

TEST_CASE("serialize cases produce the expected byte counts") {
    CommandApdu cmd;
    CHECK(serializeCommand(cmd).size() == 4);
    cmd.data = fromHex("3F00");
    CHECK(toHex(serializeCommand(cmd)).substr(8) == "023F00");
}

TEST_CASE("parse/serialize round trip over 10000 random valid commands") {
    std::mt19937 rng(0xA4A4);
    for (int i = 0; i < 10000; ++i) {
        CommandApdu cmd = randomCommand(rng);
        CAPTURE(toHex(serializeCommand(cmd)));
        CHECK(parseCommand(serializeCommand(cmd)) == cmd);
    }
}

TEST_CASE("parse_command is total over arbitrary byte sequences") {
    std::mt19937 rng(0x7816);
    std::uniform_int_distribution<int> lenDist(0, 300);
    std::uniform_int_distribution<int> byteDist(0, 255);
    for (int i = 0; i < 10000; ++i) {
        Bytes raw(lenDist(rng));
        for (auto& b : raw) b = static_cast<uint8_t>(byteDist(rng));
        try {
            parseCommand(raw);
        } catch (const Error&) {
            // typed errors are the contract; anything else aborts the test
        }
    }
    CHECK(true);
}

TEST_CASE("response codec: minimal, exploit literal, trailing-two-bytes rule") {
    ResponseApdu ok = parseResponse(fromHex("9000"));
    CHECK(ok.data.empty());
    CHECK(ok.sw() == 0x9000);

    ResponseApdu unknown = parseResponse(fromHex("6F00"));
    CHECK(unknown.data.empty());
    CHECK(unknown.sw() == 0x6F00);

    ResponseApdu data = parseResponse(fromHex("01029000"));
    CHECK(data.data == fromHex("0102"));
    CHECK(data.sw() == 0x9000);

    CHECK(codeOf([] { parseResponse(fromHex("90")); }) == ErrorCode::TooShort);
}

TEST_CASE("serialize_response(parse_response(r)) == r for random r of length >= 2") {
    std::mt19937 rng(0x6F00);
    std::uniform_int_distribution<int> lenDist(2, 260);
    std::uniform_int_distribution<int> byteDist(0, 255);
    for (int i = 0; i < 2000; ++i) {
        Bytes raw(lenDist(rng));
        for (auto& b : raw) b = static_cast<uint8_t>(byteDist(rng));
        CHECK(serializeResponse(parseResponse(raw)) == raw);
    }
}

TEST_CASE("channel bits: set/get over all channels and interindustry CLA bytes") {
    CommandApdu cmd;
    cmd.cla = 0x00;
    CHECK(setChannel(cmd, 2).cla == 0x02);
    CHECK(setChannel(cmd, 0).cla == 0x00);

    // Brute force: every interindustry base CLA (64 with the channel bits
    // cleared, extended via all 256 sub-0x80 values) x channels 0..3.
    for (int cla = 0; cla < 0x80; ++cla) {
        for (int channel = 0; channel <= 3; ++channel) {
            CommandApdu c;
            c.cla = static_cast<uint8_t>(cla);
            CommandApdu set = setChannel(c, channel);
            CHECK(getChannel(set) == channel);
            CHECK((set.cla & ~0x03) == (cla & ~0x03));
        }
    }

    CHECK(codeOf([&] { setChannel(cmd, 4); }) == ErrorCode::ChannelOutOfRange);
    CommandApdu proprietary;
    proprietary.cla = 0x80;
    CHECK(codeOf([&] { setChannel(proprietary, 1); }) == ErrorCode::ProprietaryClass);
    CHECK(codeOf([&] { getChannel(proprietary); }) == ErrorCode::ProprietaryClass);
}

TEST_CASE("build_select follows the fixed template") {
    CommandApdu cmd = buildSelect(fromHex("A00000015141434C00"));
    CHECK(toHex(serializeCommand(cmd)) == "00A4040009A00000015141434C0000");

    CHECK(codeOf([] { buildSelect(fromHex("A0000001")); }) == ErrorCode::BadAidLength);

    CommandApdu max = buildSelect(fromHex("A00000015141434C0011223344556677"));
    CHECK(serializeCommand(max)[4] == 0x10);
}

TEST_CASE("build_manage_channel templates") {
    CHECK(toHex(serializeCommand(buildManageChannelOpen())) == "0070000001");
    CHECK(toHex(serializeCommand(buildManageChannelClose(2))) == "00708002");
    CHECK(codeOf([] { buildManageChannelClose(0); }) == ErrorCode::CannotCloseBasicChannel);
}
