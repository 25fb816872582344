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

#include "scsim/Apdu.h"

#include <string>

namespace scsim {

namespace {

constexpr uint8_t kProprietaryBit = 0x80;
constexpr uint8_t kChannelMask = 0x03;

uint16_t decodeLe(uint8_t leByte) {
    // Le byte 0x00 means "maximum", i.e. 256 data bytes expected.
    return leByte == 0 ? 256 : leByte;
}

uint8_t encodeLe(uint16_t le) {
    return le == 256 ? 0x00 : static_cast<uint8_t>(le);
}

}  // namespace

ResponseApdu statusResponse(uint16_t sw) {
    return ResponseApdu{{}, static_cast<uint8_t>(sw >> 8), static_cast<uint8_t>(sw & 0xFF)};
}

CommandApdu parseCommand(BytesView raw) {
    if (raw.size() < 4) {
        throw Error(ErrorCode::TooShort, "command APDU needs a 4-byte header, got " +
                                             std::to_string(raw.size()) + " bytes");
    }

    CommandApdu cmd;
    cmd.cla = raw[0];
    cmd.ins = raw[1];
    cmd.p1 = raw[2];
    cmd.p2 = raw[3];

    const size_t len = raw.size();
    if (len == 4) {
        return cmd;  // case 1
    }

    if (len == 5) {
        cmd.le = decodeLe(raw[4]);  // case 2
        return cmd;
    }

    // A zero first length byte with more bytes following signals the
    // three-byte extended form, which this codec does not speak.
    const uint8_t lc = raw[4];
    if (lc == 0) {
        throw Error(ErrorCode::ExtendedNotSupported, "extended-length APDU rejected");
    }

    if (len == 5u + lc) {  // case 3
        cmd.data.assign(raw.begin() + 5, raw.end());
        return cmd;
    }
    if (len == 6u + lc) {  // case 4
        cmd.data.assign(raw.begin() + 5, raw.begin() + 5 + lc);
        cmd.le = decodeLe(raw[len - 1]);
        return cmd;
    }

    throw Error(ErrorCode::LengthMismatch,
                "Lc=" + std::to_string(lc) + " inconsistent with total length " + std::to_string(len));
}

Bytes serializeCommand(const CommandApdu& cmd) {
    Bytes out{cmd.cla, cmd.ins, cmd.p1, cmd.p2};
    if (!cmd.data.empty()) {
        out.push_back(static_cast<uint8_t>(cmd.data.size()));
        out.insert(out.end(), cmd.data.begin(), cmd.data.end());
    }
    if (cmd.le) {
        out.push_back(encodeLe(*cmd.le));
    }
    return out;
}

ResponseApdu parseResponse(BytesView raw) {
    if (raw.size() < 2) {
        throw Error(ErrorCode::TooShort, "response APDU needs at least the status word");
    }
    ResponseApdu resp;
    resp.data.assign(raw.begin(), raw.end() - 2);
    resp.sw1 = raw[raw.size() - 2];
    resp.sw2 = raw[raw.size() - 1];
    return resp;
}

Bytes serializeResponse(const ResponseApdu& resp) {
    Bytes out = resp.data;
    out.push_back(resp.sw1);
    out.push_back(resp.sw2);
    return out;
}

CommandApdu setChannel(CommandApdu cmd, int channel) {
    if (cmd.cla & kProprietaryBit) {
        throw Error(ErrorCode::ProprietaryClass, "channel bits only defined for interindustry CLA");
    }
    if (channel < 0 || channel > 3) {
        throw Error(ErrorCode::ChannelOutOfRange, "logical channel must be 0..3, got " +
                                                      std::to_string(channel));
    }
    cmd.cla = static_cast<uint8_t>((cmd.cla & ~kChannelMask) | channel);
    return cmd;
}

int getChannel(const CommandApdu& cmd) {
    if (cmd.cla & kProprietaryBit) {
        throw Error(ErrorCode::ProprietaryClass, "channel bits only defined for interindustry CLA");
    }
    return cmd.cla & kChannelMask;
}

CommandApdu buildSelect(BytesView aid) {
    if (aid.size() < 5 || aid.size() > 16) {
        throw Error(ErrorCode::BadAidLength, "AID must be 5..16 bytes, got " +
                                                 std::to_string(aid.size()));
    }
    CommandApdu cmd;
    cmd.cla = 0x00;
    cmd.ins = 0xA4;
    cmd.p1 = 0x04;
    cmd.p2 = 0x00;
    cmd.data.assign(aid.begin(), aid.end());
    cmd.le = 256;
    return cmd;
}

CommandApdu buildManageChannelOpen() {
    CommandApdu cmd;
    cmd.cla = 0x00;
    cmd.ins = 0x70;
    cmd.p1 = 0x00;
    cmd.p2 = 0x00;
    cmd.le = 1;  // expects the assigned channel number back
    return cmd;
}

CommandApdu buildManageChannelClose(int channel) {
    if (channel == 0) {
        throw Error(ErrorCode::CannotCloseBasicChannel, "basic channel cannot be closed");
    }
    if (channel < 1 || channel > 3) {
        throw Error(ErrorCode::ChannelOutOfRange, "logical channel must be 1..3, got " +
                                                      std::to_string(channel));
    }
    CommandApdu cmd;
    cmd.cla = 0x00;
    cmd.ins = 0x70;
    cmd.p1 = 0x80;
    cmd.p2 = static_cast<uint8_t>(channel);
    return cmd;
}

}  // namespace scsim
