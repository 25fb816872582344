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

#include <algorithm>
#include <numeric>
#include <random>

#include "scsim/AccessControl.h"
#include "scsim/BerTlv.h"

using namespace scsim;

namespace {

SignatureHash hashOf(uint8_t fill) {
    SignatureHash h{};
    h.fill(fill);
    return h;
}

Bytes aidOf(uint8_t tail) { return Bytes{0xA0, 0x00, 0x00, 0x00, tail}; }

AccessRule rule(std::optional<Bytes> aid, std::optional<SignatureHash> hash, RulePolicy policy,
                std::vector<ApduFilter> filters = {}) {
    return AccessRule{std::move(aid), std::move(hash), policy, std::move(filters)};
}

// Literal restatement of the precedence definition, evaluated naively: walk
// the specificity classes from most to least specific, stop at the first
// class with a match, let Deny beat AllowFiltered beat Allow.
Decision::Kind naiveDecide(const AccessRuleDb& db, const SignatureHash& hash, const Bytes& aid) {
    for (int wantAid = 1; wantAid >= 0; --wantAid) {
        for (int wantHash = 1; wantHash >= 0; --wantHash) {
            bool deny = false, filtered = false, allow = false;
            for (const AccessRule& r : db.rules) {
                if (r.aidRef.has_value() != (wantAid == 1)) continue;
                if (r.hashRef.has_value() != (wantHash == 1)) continue;
                if (r.aidRef && *r.aidRef != aid) continue;
                if (r.hashRef && *r.hashRef != hash) continue;
                if (r.policy == RulePolicy::Deny) deny = true;
                if (r.policy == RulePolicy::AllowFiltered) filtered = true;
                if (r.policy == RulePolicy::Allow) allow = true;
            }
            if (deny) return Decision::Kind::Denied;
            if (filtered) return Decision::Kind::AllowedFiltered;
            if (allow) return Decision::Kind::Allowed;
        }
    }
    return Decision::Kind::Denied;
}

AccessRuleDb randomDb(std::mt19937& rng, int ruleCount) {
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_int_distribution<int> fills(0, 3);
    AccessRuleDb db;
    for (int i = 0; i < ruleCount; ++i) {
        AccessRule r;
        if (coin(rng)) r.aidRef = aidOf(static_cast<uint8_t>(fills(rng)));
        if (coin(rng)) r.hashRef = hashOf(static_cast<uint8_t>(fills(rng)));
        switch (pick(rng)) {
            case 0:
                r.policy = RulePolicy::Allow;
                break;
            case 1:
                r.policy = RulePolicy::Deny;
                break;
            default: {
                r.policy = RulePolicy::AllowFiltered;
                ApduFilter f;
                f.header = {0x00, static_cast<uint8_t>(fills(rng)), 0x00, 0x00};
                f.mask = {0x00, 0xFF, 0x00, 0x00};
                r.filters = {f};
                break;
            }
        }
        db.rules.push_back(std::move(r));
    }
    return db;
}

}  // namespace

TEST_CASE("empty db encodes to FF4000") {
    CHECK(toHex(encodeRuleDb(AccessRuleDb{})) == "FF4000");
    CHECK(decodeRuleDb(fromHex("FF4000")) == AccessRuleDb{});
}

TEST_CASE("one-rule encoding agrees with hand-checked TLV length arithmetic") {
    // (wildcard aid, wildcard hash, Allow): the inner data objects are
    //   4F 00               AID-REF-DO, empty
    //   C1 00               Hash-REF-DO, empty
    //   E1 04 [4F 00 C1 00] REF-DO
    //   D0 01 01            APDU-AR-DO, Allow
    //   E3 03 [D0 01 01]    AR-DO
    //   E2 0B [E1.. E3..]   REF-AR-DO (4+2 + 3+2 = 11 bytes)
    //   FF40 0D [E2..]      Response-ALL-AR-DO (11+2 = 13 bytes)
    AccessRuleDb db;
    db.rules.push_back(rule(std::nullopt, std::nullopt, RulePolicy::Allow));

    // Independent construction through the raw TLV serializer.
    TlvNode expectedTree = makeConstructed(
        0xFF40,
        {makeConstructed(0xE2, {makeConstructed(0xE1, {makePrimitive(0x4F, {}),
                                                       makePrimitive(0xC1, {})}),
                                makeConstructed(0xE3, {makePrimitive(0xD0, {0x01})})})});
    Bytes expected = serializeBerTlv(expectedTree);

    CHECK(toHex(expected) == "FF400DE20BE1044F00C100E303D00101");
    CHECK(encodeRuleDb(db) == expected);
    CHECK(decodeRuleDb(expected) == db);
}

TEST_CASE("rule db round-trips over 500 random databases") {
    std::mt19937 rng(0xACDB);
    std::uniform_int_distribution<int> count(0, 8);
    for (int i = 0; i < 500; ++i) {
        AccessRuleDb db = randomDb(rng, count(rng));
        CHECK(decodeRuleDb(encodeRuleDb(db)) == db);
    }
}

TEST_CASE("malformed rule databases are rejected") {
    CHECK_THROWS_AS(decodeRuleDb(fromHex("E100")), Error);                  // wrong root
    CHECK_THROWS_AS(decodeRuleDb(fromHex("FF4002E200")), Error);            // empty REF-AR-DO
    CHECK_THROWS_AS(decodeRuleDb(fromHex("FF4000AA")), Error);              // trailing garbage
    // Filter payload not a multiple of 8.
    CHECK_THROWS_AS(decodeRuleDb(fromHex("FF400FE20DE1044F00C100E305D003AABBCC")), Error);
}

TEST_CASE("absent database denies with DeniedNoDb for any client and aid") {
    std::mt19937 rng(0x0DB0);
    std::uniform_int_distribution<int> byteDist(0, 255);
    for (int i = 0; i < 100; ++i) {
        Decision d = enforcerDecide(std::nullopt, hashOf(static_cast<uint8_t>(byteDist(rng))),
                                    aidOf(static_cast<uint8_t>(byteDist(rng))));
        CHECK(d.kind == Decision::Kind::DeniedNoDb);
    }
}

TEST_CASE("single matching rule allows") {
    AccessRuleDb db;
    db.rules.push_back(rule(std::nullopt, hashOf(0x11), RulePolicy::Allow));
    Decision d = enforcerDecide(db, hashOf(0x11), aidOf(1));
    CHECK(d.kind == Decision::Kind::Allowed);
    CHECK(enforcerDecide(db, hashOf(0x22), aidOf(1)).kind == Decision::Kind::Denied);
}

TEST_CASE("specific rule beats wildcard rule; Deny beats Allow, under all orderings") {
    Bytes aid = aidOf(0xAA);
    SignatureHash hash = hashOf(0x42);
    AccessRule wildcardAllow = rule(aid, std::nullopt, RulePolicy::Allow);
    AccessRule specificDeny = rule(aid, hash, RulePolicy::Deny);

    for (int order = 0; order < 2; ++order) {
        AccessRuleDb db;
        if (order == 0) {
            db.rules = {wildcardAllow, specificDeny};
        } else {
            db.rules = {specificDeny, wildcardAllow};
        }
        CHECK(enforcerDecide(db, hash, aid).kind == Decision::Kind::Denied);
        // A different client only matches the wildcard-hash rule.
        CHECK(enforcerDecide(db, hashOf(0x43), aid).kind == Decision::Kind::Allowed);
    }
}

TEST_CASE("precedence agrees with the naive class-walk oracle") {
    std::mt19937 rng(0x9E9E);
    std::uniform_int_distribution<int> count(0, 6);
    std::uniform_int_distribution<int> fills(0, 3);
    for (int i = 0; i < 2000; ++i) {
        AccessRuleDb db = randomDb(rng, count(rng));
        SignatureHash hash = hashOf(static_cast<uint8_t>(fills(rng)));
        Bytes aid = aidOf(static_cast<uint8_t>(fills(rng)));
        CHECK(enforcerDecide(db, hash, aid).kind == naiveDecide(db, hash, aid));
    }
}

TEST_CASE("decision is order-independent over all permutations of 6-rule databases") {
    std::mt19937 rng(0x6DB6);
    std::uniform_int_distribution<int> fills(0, 2);
    for (int round = 0; round < 10; ++round) {
        AccessRuleDb db = randomDb(rng, 6);
        SignatureHash hash = hashOf(static_cast<uint8_t>(fills(rng)));
        Bytes aid = aidOf(static_cast<uint8_t>(fills(rng)));
        Decision reference = enforcerDecide(db, hash, aid);

        std::vector<size_t> index(db.rules.size());
        std::iota(index.begin(), index.end(), 0);
        int permutations = 0;
        do {
            AccessRuleDb shuffled;
            for (size_t i : index) shuffled.rules.push_back(db.rules[i]);
            Decision d = enforcerDecide(shuffled, hash, aid);
            CHECK(d == reference);
            ++permutations;
        } while (std::next_permutation(index.begin(), index.end()));
        CHECK(permutations == 720);
    }
}

TEST_CASE("a wildcard Deny never turns a denial into an allow") {
    std::mt19937 rng(0xDE17);
    std::uniform_int_distribution<int> count(0, 6);
    std::uniform_int_distribution<int> fills(0, 3);
    for (int i = 0; i < 1000; ++i) {
        AccessRuleDb db = randomDb(rng, count(rng));
        SignatureHash hash = hashOf(static_cast<uint8_t>(fills(rng)));
        Bytes aid = aidOf(static_cast<uint8_t>(fills(rng)));
        Decision before = enforcerDecide(db, hash, aid);

        AccessRuleDb extended = db;
        extended.rules.push_back(rule(std::nullopt, std::nullopt, RulePolicy::Deny));
        Decision after = enforcerDecide(extended, hash, aid);
        if (!before.allowed()) {
            CHECK_FALSE(after.allowed());
        }
    }
}

TEST_CASE("filter matching applies the mask to both sides") {
    Decision allowed{Decision::Kind::Allowed, {}};
    CommandApdu select;
    select.cla = 0x00;
    select.ins = 0xA4;
    CHECK(filterApdu(allowed, select));

    ApduFilter f;
    f.header = {0x00, 0xA4, 0x00, 0x00};
    f.mask = {0xFF, 0xFF, 0x00, 0x00};
    Decision filtered{Decision::Kind::AllowedFiltered, {f}};
    CHECK(filterApdu(filtered, select));

    CommandApdu readBinary;
    readBinary.ins = 0xB0;
    CHECK_FALSE(filterApdu(filtered, readBinary));

    // p1/p2 are masked out and may vary.
    select.p1 = 0x04;
    select.p2 = 0x0C;
    CHECK(filterApdu(filtered, select));
}

TEST_CASE("rule file lines parse and render back") {
    AccessRule r = parseRuleLine("aid=A0000000180102FF hash=* policy=allow");
    CHECK(r.aidRef == fromHex("A0000000180102FF"));
    CHECK_FALSE(r.hashRef.has_value());
    CHECK(r.policy == RulePolicy::Allow);
    CHECK(formatRuleLine(r) == "aid=A0000000180102FF hash=* policy=allow");

    AccessRule filters = parseRuleLine("aid=* hash=* policy=filters:00A40000FFFF0000,00B00000FFFF0000");
    CHECK(filters.policy == RulePolicy::AllowFiltered);
    REQUIRE(filters.filters.size() == 2);
    CHECK(filters.filters[1].header[1] == 0xB0);

    CHECK_THROWS_AS(parseRuleLine("aid=* hash=*"), Error);
    CHECK_THROWS_AS(parseRuleLine("aid=* hash=* policy=filters:"), Error);
    CHECK_THROWS_AS(parseRuleLine("aid=ZZ hash=* policy=allow"), Error);
    CHECK_THROWS_AS(parseRuleLine("aid=A000 hash=* policy=allow"), Error);
}
