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

#include "scsim/Bytes.h"

#include "scsim/Errors.h"

namespace scsim {

namespace {

int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::string toHex(BytesView data) {
    static const char digits[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0F]);
    }
    return out;
}

Bytes fromHex(const std::string& hex) {
    if (hex.size() % 2 != 0) {
        throw Error(ErrorCode::BadHex, "odd number of hex digits in \"" + hex + "\"");
    }
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = nibble(hex[i]);
        int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw Error(ErrorCode::BadHex, "invalid hex digit in \"" + hex + "\"");
        }
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return out;
}

std::string toHex(const SignatureHash& hash) {
    return toHex(BytesView(hash.data(), hash.size()));
}

SignatureHash hashFromHex(const std::string& hex) {
    Bytes raw = fromHex(hex);
    if (raw.size() != 20) {
        throw Error(ErrorCode::BadHex, "signature hash must be 20 bytes, got " + std::to_string(raw.size()));
    }
    SignatureHash hash{};
    std::copy(raw.begin(), raw.end(), hash.begin());
    return hash;
}

}  // namespace scsim
