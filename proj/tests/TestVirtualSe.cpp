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

#include <filesystem>
#include <random>

#include "scsim/Config.h"
#include "scsim/VirtualSe.h"

using namespace scsim;

namespace {

Bytes processCmd(VirtualSecureElement& se, const std::string& hex) {
    return se.process(fromHex(hex));
}

uint16_t swOf(const Bytes& response) {
    REQUIRE(response.size() >= 2);
    return static_cast<uint16_t>(response[response.size() - 2]) << 8 | response.back();
}

int openChannel(VirtualSecureElement& se) {
    Bytes resp = processCmd(se, "0070000001");
    REQUIRE(swOf(resp) == 0x9000);
    REQUIRE(resp.size() == 3);
    return resp[0];
}

}  // namespace

TEST_CASE("reset returns the configured ATR and closes logical channels") {
    auto se = makeDefaultElement();
    CHECK(toHex(se->reset()) == "3B9F96803FC7828031E073FE211B6407689A00829000");

    openChannel(*se);
    openChannel(*se);
    openChannel(*se);
    CHECK(se->openLogicalChannels() == 3);
    se->reset();
    CHECK(se->openLogicalChannels() == 0);
    CHECK(se->channelOpen(0));

    // Idempotent: a second reset leaves identical state.
    Bytes atr1 = se->reset();
    Bytes atr2 = se->reset();
    CHECK(atr1 == atr2);
    CHECK(se->openLogicalChannels() == 0);

    VirtualSecureElement custom(fromHex("3B00"));
    CHECK(custom.reset() == fromHex("3B00"));
}

TEST_CASE("SELECT of an unknown AID answers 6A82") {
    auto se = makeDefaultElement();
    CHECK(swOf(processCmd(*se, "00A4040005A1A2A3A4A5")) == 0x6A82);
}

TEST_CASE("channel table holds exactly three logical channels") {
    auto se = makeDefaultElement();
    CHECK(openChannel(*se) == 1);
    CHECK(openChannel(*se) == 2);
    CHECK(openChannel(*se) == 3);
    CHECK(swOf(processCmd(*se, "0070000001")) == 0x6881);

    // Close 2, the next open reuses the lowest free slot.
    CHECK(swOf(processCmd(*se, "00708002")) == 0x9000);
    CHECK(openChannel(*se) == 2);

    // Closing a closed slot stays a no-op success; the count only decreases
    // for genuinely open slots.
    int before = se->openLogicalChannels();
    CHECK(swOf(processCmd(*se, "00708003")) == 0x9000);
    CHECK(se->openLogicalChannels() == before - 1);
    CHECK(swOf(processCmd(*se, "00708003")) == 0x9000);
    CHECK(se->openLogicalChannels() == before - 1);
}

TEST_CASE("echo applet answers on its channel, nothing answers before SELECT") {
    auto se = makeDefaultElement();
    int channel = openChannel(*se);
    REQUIRE(channel == 1);

    // No applet selected yet.
    CHECK(swOf(se->process(fromHex("01B0000002AABB"))) == 0x6F00);

    Bytes select = serializeCommand(setChannel(buildSelect(EchoApplet::defaultAid()), channel));
    Bytes selectResp = se->process(select);
    CHECK(swOf(selectResp) == 0x9000);
    CHECK(Bytes(selectResp.begin(), selectResp.end() - 2) == fromHex("6F0684044543484F"));

    Bytes echoResp = se->process(fromHex("01B0000002DEAD"));
    CHECK(echoResp == fromHex("DEAD9000"));
}

TEST_CASE("ARA applet serves the rule database through GET DATA(ALL)") {
    auto se = makeDefaultElement();
    AccessRuleDb db;
    db.rules.push_back(AccessRule{std::nullopt, std::nullopt, RulePolicy::Allow, {}});
    se->installApplet(std::make_shared<AraApplet>(db));

    int channel = openChannel(*se);
    Bytes select = serializeCommand(setChannel(buildSelect(AraApplet::defaultAid()), channel));
    CHECK(swOf(se->process(select)) == 0x9000);

    CommandApdu getData;
    getData.cla = static_cast<uint8_t>(0x80 | channel);
    getData.ins = 0xCA;
    getData.p1 = 0xFF;
    getData.p2 = 0x40;
    getData.le = 256;
    Bytes resp = se->process(serializeCommand(getData));
    CHECK(swOf(resp) == 0x9000);
    CHECK(Bytes(resp.begin(), resp.end() - 2) == encodeRuleDb(db));

    // Anything but GET DATA(ALL) is refused by the ARA.
    CHECK(swOf(se->process(fromHex("01B0000001"))) == 0x6F00);
}

TEST_CASE("install and remove applets") {
    auto se = std::make_unique<VirtualSecureElement>();
    se->installApplet(std::make_shared<EchoApplet>());
    CHECK_THROWS_AS(se->installApplet(std::make_shared<EchoApplet>()), Error);

    int channel = openChannel(*se);
    Bytes select = serializeCommand(setChannel(buildSelect(EchoApplet::defaultAid()), channel));
    CHECK(swOf(se->process(select)) == 0x9000);

    se->removeApplet(EchoApplet::defaultAid());
    CHECK_THROWS_AS(se->removeApplet(EchoApplet::defaultAid()), Error);

    // The selection was invalidated: commands on the channel fail, and a
    // fresh SELECT now answers 6A82.
    CHECK(swOf(se->process(fromHex("01B0000001"))) == 0x6F00);
    CHECK(swOf(se->process(select)) == 0x6A82);
}

TEST_CASE("process is total over 10000 fuzzed inputs") {
    auto se = makeDefaultElement();
    std::mt19937 rng(0x5EED);
    std::uniform_int_distribution<int> lenDist(0, 64);
    std::uniform_int_distribution<int> byteDist(0, 255);
    for (int i = 0; i < 10000; ++i) {
        Bytes raw(lenDist(rng));
        for (auto& b : raw) b = static_cast<uint8_t>(byteDist(rng));
        Bytes resp = se->process(raw);
        CHECK(resp.size() >= 2);
    }
}

TEST_CASE("after reset, behavior depends only on the installed applets") {
    auto run = [](VirtualSecureElement& se) {
        std::vector<Bytes> transcript;
        transcript.push_back(se.process(fromHex("0070000001")));
        transcript.push_back(
            se.process(serializeCommand(setChannel(buildSelect(EchoApplet::defaultAid()), 1))));
        transcript.push_back(se.process(fromHex("01C0000002BEEF")));
        transcript.push_back(se.process(fromHex("00708001")));
        return transcript;
    };

    auto se = makeDefaultElement();
    std::vector<Bytes> first = run(*se);

    // Scramble state, then reset and replay.
    se->process(fromHex("0070000001"));
    se->process(fromHex("0070000001"));
    se->process(serializeCommand(setChannel(buildSelect(EchoApplet::defaultAid()), 1)));
    se->reset();
    std::vector<Bytes> second = run(*se);
    CHECK(first == second);
}

TEST_CASE("element config file: ATR, roster, rule file") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "scsim-test-element";
    fs::create_directories(dir);

    writeTextFile((dir / "rules.txt").string(), "# allow everyone\naid=* hash=* policy=allow\n");
    writeTextFile((dir / "element.conf").string(),
                  "atr = 3B00\napplets = echo\nara_rules = rules.txt\n");

    auto se = loadElementConfig((dir / "element.conf").string());
    CHECK(se->atr() == fromHex("3B00"));
    CHECK(se->hasApplet(EchoApplet::defaultAid()));
    CHECK(se->hasApplet(AraApplet::defaultAid()));

    writeTextFile((dir / "bad.conf").string(), "applets = warp\n");
    CHECK_THROWS_AS(loadElementConfig((dir / "bad.conf").string()), Error);

    fs::remove_all(dir);
}
