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

#include "scsim/BerTlv.h"

using namespace scsim;

namespace {

// Random tree generator for the round-trip oracle. Primitive tags drawn from
// a pool without the constructed bit, constructed tags from one with it.
TlvNode randomTree(std::mt19937& rng, int maxDepth) {
    static const uint16_t primitiveTags[] = {0x4F, 0xC1, 0xD0, 0x80, 0x81, 0x9F70};
    static const uint16_t constructedTags[] = {0xE1, 0xE2, 0xE3, 0x61, 0xFF40, 0xBF20};

    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<size_t> primPick(0, std::size(primitiveTags) - 1);
    std::uniform_int_distribution<size_t> consPick(0, std::size(constructedTags) - 1);

    bool constructed = maxDepth > 0 && coin(rng) == 1;
    if (!constructed) {
        std::uniform_int_distribution<int> lenDist(0, 200);
        std::uniform_int_distribution<int> byteDist(0, 255);
        Bytes value(static_cast<size_t>(lenDist(rng)));
        for (auto& b : value) b = static_cast<uint8_t>(byteDist(rng));
        return makePrimitive(primitiveTags[primPick(rng)], std::move(value));
    }

    std::uniform_int_distribution<int> kidCount(0, 3);
    std::vector<TlvNode> children;
    int kids = kidCount(rng);
    for (int i = 0; i < kids; ++i) {
        children.push_back(randomTree(rng, maxDepth - 1));
    }
    return makeConstructed(constructedTags[consPick(rng)], std::move(children));
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

TEST_CASE("zero-length primitive and one-level nesting") {
    std::vector<TlvNode> nodes = parseBerTlv(fromHex("4F00"));
    REQUIRE(nodes.size() == 1);
    CHECK(nodes[0].tag == 0x4F);
    CHECK(nodes[0].value.empty());
    CHECK_FALSE(nodes[0].constructed());

    nodes = parseBerTlv(fromHex("E203D001FF"));
    REQUIRE(nodes.size() == 1);
    CHECK(nodes[0].tag == 0xE2);
    CHECK(nodes[0].constructed());
    REQUIRE(nodes[0].children.size() == 1);
    CHECK(nodes[0].children[0].tag == 0xD0);
    CHECK(nodes[0].children[0].value == Bytes{0xFF});
}

TEST_CASE("two-byte tags and long-form lengths") {
    std::vector<TlvNode> nodes = parseBerTlv(fromHex("FF4000"));
    REQUIRE(nodes.size() == 1);
    CHECK(nodes[0].tag == 0xFF40);
    CHECK(nodes[0].constructed());
    CHECK(nodes[0].children.empty());

    // 0x81-prefixed length (one length byte).
    Bytes value(0x90, 0xAB);
    TlvNode big = makePrimitive(0x4F, value);
    Bytes encoded = serializeBerTlv(big);
    CHECK(encoded[1] == 0x81);
    CHECK(encoded[2] == 0x90);
    CHECK(parseBerTlv(encoded)[0] == big);

    // 0x82-prefixed length (two length bytes).
    Bytes huge(0x1234, 0xCD);
    TlvNode node = makePrimitive(0x4F, huge);
    encoded = serializeBerTlv(node);
    CHECK(encoded[1] == 0x82);
    CHECK(parseBerTlv(encoded)[0] == node);
}

TEST_CASE("typed parse errors") {
    CHECK(codeOf([] { parseBerTlv(fromHex("4F05AABB")); }) == ErrorCode::Truncated);
    CHECK(codeOf([] { parseBerTlv(fromHex("4F")); }) == ErrorCode::Truncated);
    CHECK(codeOf([] { parseBerTlv(fromHex("4F80AABB")); }) == ErrorCode::IndefiniteLength);
    CHECK(codeOf([] { parseBerTlv(fromHex("4F83010203")); }) == ErrorCode::BadLength);
    CHECK(codeOf([] { parseSingleTlv(fromHex("4F00AA")); }) == ErrorCode::TrailingGarbage);
}

TEST_CASE("1000 random trees of depth <= 4 round-trip exactly") {
    std::mt19937 rng(0x7717);
    for (int i = 0; i < 1000; ++i) {
        std::vector<TlvNode> forest;
        std::uniform_int_distribution<int> treeCount(1, 3);
        int trees = treeCount(rng);
        for (int t = 0; t < trees; ++t) {
            forest.push_back(randomTree(rng, 4));
        }
        Bytes encoded = serializeBerTlv(forest);
        CHECK(parseBerTlv(encoded) == forest);
    }
}
