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
#include <vector>

#include "scsim/Bytes.h"
#include "scsim/Errors.h"

namespace scsim {

// BER-TLV with 1-2 byte tags and definite lengths only (short form, or long
// form with one or two length octets). The constructed bit of the leading tag
// byte decides whether `children` or `value` is the payload.
struct TlvNode {
    uint16_t tag = 0;
    Bytes value;                    // primitive payload
    std::vector<TlvNode> children;  // constructed payload

    bool constructed() const;

    bool operator==(const TlvNode&) const = default;
};

TlvNode makePrimitive(uint16_t tag, Bytes value);
TlvNode makeConstructed(uint16_t tag, std::vector<TlvNode> children);

// Parses a complete sequence of TLV nodes; trailing bytes are an error.
std::vector<TlvNode> parseBerTlv(BytesView raw);

// Parses exactly one node; any byte after it is TrailingGarbage.
TlvNode parseSingleTlv(BytesView raw);

Bytes serializeBerTlv(const std::vector<TlvNode>& nodes);
Bytes serializeBerTlv(const TlvNode& node);

}  // namespace scsim
