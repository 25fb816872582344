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

#include <cstdint>
#include <optional>

#include "scsim/Bytes.h"
#include "scsim/Errors.h"

namespace scsim {

// Status words used across the simulation. Anything a card-side fault can
// produce maps onto one of these.
namespace sw {
constexpr uint16_t kSuccess = 0x9000;
constexpr uint16_t kAppletNotFound = 0x6A82;
constexpr uint16_t kNoLogicalChannel = 0x6881;
constexpr uint16_t kSecurityStatus = 0x6982;
constexpr uint16_t kUnknownError = 0x6F00;
}  // namespace sw

// ISO 7816-4 short-form command APDU (cases 1-4). Extended length is
// deliberately unsupported; parseCommand rejects it with a typed error.
struct CommandApdu {
    uint8_t cla = 0;
    uint8_t ins = 0;
    uint8_t p1 = 0;
    uint8_t p2 = 0;
    Bytes data;                   // Lc bytes, 0..255
    std::optional<uint16_t> le;   // 1..256; 256 serializes as Le byte 0x00

    bool operator==(const CommandApdu&) const = default;
};

struct ResponseApdu {
    Bytes data;
    uint8_t sw1 = 0;
    uint8_t sw2 = 0;

    uint16_t sw() const { return static_cast<uint16_t>(sw1) << 8 | sw2; }

    bool operator==(const ResponseApdu&) const = default;
};

ResponseApdu statusResponse(uint16_t sw);

// Case selection is pure length arithmetic:
//   4 bytes -> case 1, 5 -> case 2, 5+Lc -> case 3, 6+Lc -> case 4.
// Errors: TooShort, LengthMismatch, ExtendedNotSupported.
CommandApdu parseCommand(BytesView raw);
Bytes serializeCommand(const CommandApdu& cmd);

ResponseApdu parseResponse(BytesView raw);
Bytes serializeResponse(const ResponseApdu& resp);

// Logical channels 0-3 live in the two low-order CLA bits of interindustry
// class bytes (bit 8 clear). Proprietary classes are rejected.
CommandApdu setChannel(CommandApdu cmd, int channel);
int getChannel(const CommandApdu& cmd);

// SELECT by AID: 00 A4 04 00 Lc <aid> 00
CommandApdu buildSelect(BytesView aid);

// MANAGE CHANNEL open: 00 70 00 00 01; close(n): 00 70 80 0n (case 1).
CommandApdu buildManageChannelOpen();
CommandApdu buildManageChannelClose(int channel);

}  // namespace scsim
