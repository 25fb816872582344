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

#include "scsim/BerTlv.h"

#include <string>

namespace scsim {

namespace {

constexpr uint8_t kConstructedBit = 0x20;
constexpr uint8_t kMultiByteTagMask = 0x1F;

uint8_t leadingTagByte(uint16_t tag) {
    return tag > 0xFF ? static_cast<uint8_t>(tag >> 8) : static_cast<uint8_t>(tag);
}

struct Cursor {
    BytesView data;
    size_t pos = 0;

    size_t remaining() const { return data.size() - pos; }

    uint8_t next() {
        if (pos >= data.size()) {
            throw Error(ErrorCode::Truncated, "TLV input ended inside a field");
        }
        return data[pos++];
    }

    BytesView take(size_t n) {
        if (remaining() < n) {
            throw Error(ErrorCode::Truncated, "TLV value shorter than its declared length");
        }
        BytesView out = data.subspan(pos, n);
        pos += n;
        return out;
    }
};

uint16_t parseTag(Cursor& cur) {
    uint8_t first = cur.next();
    if ((first & kMultiByteTagMask) != kMultiByteTagMask) {
        return first;
    }
    uint8_t second = cur.next();
    if (second & 0x80) {
        throw Error(ErrorCode::BadTag, "tags longer than two bytes are not supported");
    }
    return static_cast<uint16_t>(first) << 8 | second;
}

size_t parseLength(Cursor& cur) {
    uint8_t first = cur.next();
    if (first < 0x80) {
        return first;
    }
    if (first == 0x80) {
        throw Error(ErrorCode::IndefiniteLength, "indefinite TLV lengths are not supported");
    }
    size_t count = first & 0x7F;
    if (count > 2) {
        throw Error(ErrorCode::BadLength, "length fields longer than two bytes are not supported");
    }
    size_t len = 0;
    for (size_t i = 0; i < count; ++i) {
        len = len << 8 | cur.next();
    }
    return len;
}

void appendLength(Bytes& out, size_t len) {
    if (len < 0x80) {
        out.push_back(static_cast<uint8_t>(len));
    } else if (len <= 0xFF) {
        out.push_back(0x81);
        out.push_back(static_cast<uint8_t>(len));
    } else if (len <= 0xFFFF) {
        out.push_back(0x82);
        out.push_back(static_cast<uint8_t>(len >> 8));
        out.push_back(static_cast<uint8_t>(len & 0xFF));
    } else {
        throw Error(ErrorCode::BadLength, "TLV value exceeds 65535 bytes");
    }
}

TlvNode parseNode(Cursor& cur) {
    TlvNode node;
    node.tag = parseTag(cur);
    size_t len = parseLength(cur);
    BytesView payload = cur.take(len);

    if (node.constructed()) {
        Cursor inner{payload};
        while (inner.remaining() > 0) {
            node.children.push_back(parseNode(inner));
        }
    } else {
        node.value.assign(payload.begin(), payload.end());
    }
    return node;
}

}  // namespace

bool TlvNode::constructed() const {
    return (leadingTagByte(tag) & kConstructedBit) != 0;
}

TlvNode makePrimitive(uint16_t tag, Bytes value) {
    TlvNode node;
    node.tag = tag;
    node.value = std::move(value);
    if (node.constructed()) {
        throw Error(ErrorCode::BadTag, "tag has the constructed bit set but a primitive payload");
    }
    return node;
}

TlvNode makeConstructed(uint16_t tag, std::vector<TlvNode> children) {
    TlvNode node;
    node.tag = tag;
    node.children = std::move(children);
    if (!node.constructed()) {
        throw Error(ErrorCode::BadTag, "tag lacks the constructed bit but has child nodes");
    }
    return node;
}

std::vector<TlvNode> parseBerTlv(BytesView raw) {
    Cursor cur{raw};
    std::vector<TlvNode> nodes;
    while (cur.remaining() > 0) {
        nodes.push_back(parseNode(cur));
    }
    // parseNode consumes exactly the declared lengths; anything that did not
    // form a complete node has already thrown. Reaching here means the whole
    // input was consumed.
    return nodes;
}

TlvNode parseSingleTlv(BytesView raw) {
    Cursor cur{raw};
    TlvNode node = parseNode(cur);
    if (cur.remaining() > 0) {
        throw Error(ErrorCode::TrailingGarbage, std::to_string(cur.remaining()) +
                                                    " byte(s) left after the first TLV node");
    }
    return node;
}

Bytes serializeBerTlv(const TlvNode& node) {
    Bytes payload;
    if (node.constructed()) {
        if (!node.value.empty()) {
            throw Error(ErrorCode::BadTag, "constructed node must not carry a primitive value");
        }
        for (const TlvNode& child : node.children) {
            Bytes encoded = serializeBerTlv(child);
            payload.insert(payload.end(), encoded.begin(), encoded.end());
        }
    } else {
        if (!node.children.empty()) {
            throw Error(ErrorCode::BadTag, "primitive node must not have children");
        }
        payload = node.value;
    }

    Bytes out;
    if (node.tag > 0xFF) {
        out.push_back(static_cast<uint8_t>(node.tag >> 8));
        out.push_back(static_cast<uint8_t>(node.tag & 0xFF));
    } else {
        out.push_back(static_cast<uint8_t>(node.tag));
    }
    appendLength(out, payload.size());
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

Bytes serializeBerTlv(const std::vector<TlvNode>& nodes) {
    Bytes out;
    for (const TlvNode& node : nodes) {
        Bytes encoded = serializeBerTlv(node);
        out.insert(out.end(), encoded.begin(), encoded.end());
    }
    return out;
}

}  // namespace scsim
